#include "ddpinn/sampling.hpp"

#include "ddpinn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace ddpinn {

namespace {

// Sub-stream identifiers for derive_seed.
enum Stream : std::uint64_t {
    kInteriorStream = 1,
    kBoundaryStream,
    kInterfaceStream,
    kInitialStream,
    kSliceStream,
    kTimeStream,
};

SurfaceSpacing surface_spacing(SamplingStrategy s)
{
    return s == SamplingStrategy::Grid ? SurfaceSpacing::Even : SurfaceSpacing::Stratified;
}

Mat with_time(const Mat& space, double t)
{
    Mat out(space.rows() + 1, space.cols());
    out.topRows(space.rows()) = space;
    out.row(space.rows()).setConstant(t);
    return out;
}

Mat concat_cols(const std::vector<Mat>& parts, Eigen::Index rows)
{
    Eigen::Index cols = 0;
    for (const auto& p : parts)
        cols += p.cols();
    Mat out(rows, cols);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.middleCols(at, p.cols()) = p;
        at += p.cols();
    }
    return out;
}

Mat gather(const Mat& pts, const std::vector<Eigen::Index>& idx)
{
    Mat out(pts.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = pts.col(idx[k]);
    return out;
}

//! Sampling box: the domain bounding box, extended by (0, T] for
//! parabolic problems.
std::pair<Vec, Vec> sampling_box(const ProblemSpec& problem)
{
    const auto& bb = problem.domain.bounding_box();
    if (!problem.parabolic)
        return {bb.lower, bb.upper};
    Vec lo(problem.dim + 1);
    Vec hi(problem.dim + 1);
    lo << bb.lower, 0.0;
    hi << bb.upper, problem.horizon;
    return {lo, hi};
}

double time_of(const ProblemSpec& problem, const Eigen::Ref<const Vec>& col)
{
    return problem.parabolic ? col[problem.dim] : 0.0;
}

//! Region of a candidate interior point, or OnInterface when it must be
//! rejected (outside the domain, inside a tolerance band, or at t = 0 for
//! space-time interiors).
Region interior_label(const ProblemSpec& problem, const Eigen::Ref<const Vec>& col)
{
    Vec x = col.head(problem.dim);
    if (!problem.domain.contains(x))
        return Region::OnInterface;
    double t = time_of(problem, col);
    if (problem.parabolic && !(t > 0))
        return Region::OnInterface;
    return region_of(problem, x, t);
}

//! Candidate batch of m points in the sampling box.
Mat candidate_batch(const Vec& lo, const Vec& hi, std::size_t m, SamplingStrategy strategy,
                    std::mt19937_64& rng)
{
    if (strategy == SamplingStrategy::Grid)
        return cell_centered_grid(lo, hi, m);
    return latin_hypercube(lo, hi, m, rng);
}

void split_by_region(const ProblemSpec& problem, const Mat& cand, std::vector<Mat>& out1,
                     std::vector<Mat>& out2, std::size_t* budget = nullptr)
{
    std::vector<Eigen::Index> i1;
    std::vector<Eigen::Index> i2;
    for (Eigen::Index j = 0; j < cand.cols(); ++j) {
        if (budget && *budget == 0)
            break;
        Region r = interior_label(problem, cand.col(j));
        if (r == Region::Omega1)
            i1.push_back(j);
        else if (r == Region::Omega2)
            i2.push_back(j);
        else
            continue;
        if (budget)
            --*budget;
    }
    out1.push_back(gather(cand, i1));
    out2.push_back(gather(cand, i2));
}

std::pair<Mat, Mat> interior_by_geometry(const ProblemSpec& problem, std::size_t m,
                                         SamplingStrategy strategy, std::mt19937_64& rng)
{
    auto [lo, hi] = sampling_box(problem);
    const auto rows = static_cast<Eigen::Index>(lo.size());
    std::vector<Mat> p1;
    std::vector<Mat> p2;
    if (problem.domain.is_box()) {
        split_by_region(problem, candidate_batch(lo, hi, m, strategy, rng), p1, p2);
    } else if (strategy == SamplingStrategy::Grid) {
        // Refine the grid until enough nodes fall inside the domain, then
        // keep an evenly strided subset of them.
        std::size_t n = m;
        for (int attempt = 0; attempt < 64; ++attempt) {
            Mat cand = cell_centered_grid(lo, hi, n);
            std::vector<Eigen::Index> inside;
            for (Eigen::Index j = 0; j < cand.cols(); ++j)
                if (problem.domain.contains(cand.col(j).head(problem.dim)))
                    inside.push_back(j);
            if (inside.size() >= m) {
                auto keep = even_subset(inside.size(), m);
                std::vector<Eigen::Index> sel;
                for (auto k : keep)
                    sel.push_back(inside[k]);
                split_by_region(problem, gather(cand, sel), p1, p2);
                break;
            }
            n = n * 3 / 2 + 1;
        }
    } else {
        std::size_t budget = m;
        for (int attempt = 0; budget > 0 && attempt < 10000; ++attempt)
            split_by_region(problem, latin_hypercube(lo, hi, m, rng), p1, p2, &budget);
    }
    return {concat_cols(p1, rows), concat_cols(p2, rows)};
}

//! Uniform points inside the interface shape (for the Balanced split).
Mat inner_points(const ProblemSpec& problem, std::size_t m, std::mt19937_64& rng)
{
    const int dim = problem.dim;
    const auto& kind = problem.interface.kind();
    if (problem.parabolic || problem.interface.is_moving())
        throw std::invalid_argument("balanced split supports static elliptic problems only");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat out(dim, static_cast<Eigen::Index>(m));
    if (const auto* s = std::get_if<Sphere>(&kind)) {
        for (std::size_t k = 0; k < m;) {
            Vec g(dim);
            for (int i = 0; i < dim; ++i)
                g[i] = normal(rng);
            double len = g.norm();
            if (len < 1e-12)
                continue;
            double r = s->radius * std::pow(unit(rng), 1.0 / dim);
            Vec x = s->center + (r / len) * g;
            if (region_of(problem, x) != Region::Omega1 || !problem.domain.contains(x))
                continue;
            out.col(static_cast<Eigen::Index>(k++)) = x;
        }
        return out;
    }
    Vec lo;
    Vec hi;
    if (const auto* e = std::get_if<Ellipsoid>(&kind)) {
        lo = e->center - e->semi_axes;
        hi = e->center + e->semi_axes;
    } else {
        lo = problem.domain.bounding_box().lower;
        hi = problem.domain.bounding_box().upper;
    }
    for (std::size_t k = 0; k < m;) {
        Vec x(dim);
        for (int i = 0; i < dim; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
        if (!problem.domain.contains(x) || region_of(problem, x) != Region::Omega1)
            continue;
        out.col(static_cast<Eigen::Index>(k++)) = x;
    }
    return out;
}

std::pair<Mat, Mat> interior_balanced(const ProblemSpec& problem, std::size_t m,
                                      SamplingStrategy strategy, std::mt19937_64& rng)
{
    const std::size_t m1 = m / 2;
    const std::size_t m2 = m - m1;
    Mat in1 = inner_points(problem, m1, rng);
    auto [lo, hi] = sampling_box(problem);
    std::vector<Mat> p2;
    std::size_t have = 0;
    for (int attempt = 0; have < m2 && attempt < 10000; ++attempt) {
        Mat cand = candidate_batch(lo, hi, m2, strategy, rng);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < cand.cols() && have < m2; ++j) {
            if (interior_label(problem, cand.col(j)) == Region::Omega2) {
                keep.push_back(j);
                ++have;
            }
        }
        p2.push_back(gather(cand, keep));
        if (strategy == SamplingStrategy::Grid && have < m2)
            throw std::runtime_error("balanced grid sampling could not fill Omega2");
    }
    return {in1, concat_cols(p2, problem.dim)};
}

//! Count for slice k when n items are spread over `slices` slices.
std::size_t share(std::size_t n, int slices, int k)
{
    auto s = static_cast<std::size_t>(slices);
    return n / s + (static_cast<std::size_t>(k) < n % s ? 1 : 0);
}

double slice_time(const ProblemSpec& problem, int k)
{
    return problem.horizon * (k + 1) / kTimeSlices;
}

//! Half of n on the structured time slices, the rest at uniform times.
template<class SliceFn>
void spread_in_time(const ProblemSpec& problem, std::size_t n, std::uint64_t seed, SliceFn&& emit)
{
    const std::size_t structured = n / 2;
    for (int k = 0; k < kTimeSlices; ++k) {
        std::size_t c = share(structured, kTimeSlices, k);
        if (c > 0)
            emit(c, slice_time(problem, k), derive_seed(seed, kSliceStream * 1000 + k));
    }
    std::mt19937_64 rng(derive_seed(seed, kTimeStream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t k = structured; k < n; ++k) {
        double t = problem.horizon * (1.0 - unit(rng));  // (0, T]
        emit(1, t, rng());
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::pair<Mat, Mat> sample_interior(const ProblemSpec& problem, std::size_t m_total,
                                    SamplingStrategy strategy, std::uint64_t seed)
{
    return sample_interior(problem, m_total, strategy, seed, problem.interior_split);
}

std::pair<Mat, Mat> sample_interior(const ProblemSpec& problem, std::size_t m_total,
                                    SamplingStrategy strategy, std::uint64_t seed,
                                    InteriorSplit split)
{
    if (m_total < 2)
        throw std::invalid_argument("sample_interior: need at least 2 points");
    std::mt19937_64 rng(derive_seed(seed, kInteriorStream));
    auto result = split == InteriorSplit::Balanced
                      ? interior_balanced(problem, m_total, strategy, rng)
                      : interior_by_geometry(problem, m_total, strategy, rng);
    if (result.first.cols() == 0 || result.second.cols() == 0)
        throw std::runtime_error("sample_interior: a region received no points ("
                                 + std::to_string(result.first.cols()) + " / "
                                 + std::to_string(result.second.cols()) + ")");
    return result;
}

PointSet sample_boundary(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                         std::uint64_t seed)
{
    if (m < 1)
        throw std::invalid_argument("sample_boundary: m must be at least 1");
    const auto spacing = surface_spacing(strategy);
    const std::uint64_t base = derive_seed(seed, kBoundaryStream);
    PointSet out;
    if (!problem.parabolic) {
        out.points = problem.domain.sample_boundary(m, base, spacing);
        for (Eigen::Index j = 0; j < out.points.cols(); ++j)
            out.regions.push_back(boundary_region(problem, out.points.col(j)));
        return out;
    }
    std::vector<Mat> parts;
    spread_in_time(problem, m, base, [&](std::size_t c, double t, std::uint64_t s) {
        Mat space = problem.domain.sample_boundary(c, s, c == 1 ? SurfaceSpacing::Random : spacing);
        for (Eigen::Index j = 0; j < space.cols(); ++j)
            out.regions.push_back(boundary_region(problem, space.col(j), t));
        parts.push_back(with_time(space, t));
    });
    out.points = concat_cols(parts, problem.dim + 1);
    return out;
}

Mat sample_interface_points(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                            std::uint64_t seed)
{
    if (m < 1)
        throw std::invalid_argument("sample_interface: m must be at least 1");
    const auto spacing = surface_spacing(strategy);
    const std::uint64_t base = derive_seed(seed, kInterfaceStream);
    if (!problem.parabolic)
        return sample_interface(problem.interface, m, 0.0, base, spacing);
    std::vector<Mat> parts;
    spread_in_time(problem, m, base, [&](std::size_t c, double t, std::uint64_t s) {
        parts.push_back(with_time(
            sample_interface(problem.interface, c, t, s, c == 1 ? SurfaceSpacing::Random : spacing),
            t));
    });
    return concat_cols(parts, problem.dim + 1);
}

PointSet sample_initial(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                        std::uint64_t seed)
{
    if (!problem.parabolic)
        throw std::invalid_argument("initial points exist only for parabolic problems");
    if (m < 1)
        throw std::invalid_argument("parabolic problems need at least one initial point");
    std::mt19937_64 rng(derive_seed(seed, kInitialStream));
    const auto& bb = problem.domain.bounding_box();
    PointSet out;
    std::vector<Mat> parts;
    std::size_t have = 0;
    for (int attempt = 0; have < m && attempt < 10000; ++attempt) {
        Mat cand = candidate_batch(bb.lower, bb.upper, m, strategy, rng);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < cand.cols() && have < m; ++j) {
            Vec x = cand.col(j);
            if (!problem.domain.contains(x))
                continue;
            Region r = region_of(problem, x, 0.0);
            if (r == Region::OnInterface)
                continue;
            keep.push_back(j);
            out.regions.push_back(r);
            ++have;
        }
        parts.push_back(with_time(gather(cand, keep), 0.0));
        if (strategy == SamplingStrategy::Grid)
            break;
    }
    out.points = concat_cols(parts, problem.dim + 1);
    return out;
}

CollocationSet sample_spacetime(const ProblemSpec& problem, std::size_t m_interior,
                                std::size_t m_boundary, std::size_t m_interface,
                                std::size_t m_initial, SamplingStrategy strategy,
                                std::uint64_t seed)
{
    if (!problem.parabolic)
        throw std::invalid_argument("sample_spacetime requires a parabolic problem");
    if (m_initial == 0)
        throw std::invalid_argument("parabolic problems need at least one initial point");
    CollocationSet set;
    set.seed = seed;
    set.strategy = strategy;
    std::tie(set.interior1, set.interior2) = sample_interior(problem, m_interior, strategy, seed);
    set.boundary = sample_boundary(problem, m_boundary, strategy, seed);
    set.interface = sample_interface_points(problem, m_interface, strategy, seed);
    set.initial = sample_initial(problem, m_initial, strategy, seed);
    return set;
}

CollocationSet sample_collocation(const ProblemSpec& problem, const CollocationCounts& counts,
                                  SamplingStrategy strategy, std::uint64_t seed)
{
    if (problem.parabolic)
        return sample_spacetime(problem, counts.interior, counts.boundary, counts.interface,
                                counts.initial, strategy, seed);
    CollocationSet set;
    set.seed = seed;
    set.strategy = strategy;
    std::tie(set.interior1, set.interior2) = sample_interior(problem, counts.interior, strategy, seed);
    set.boundary = sample_boundary(problem, counts.boundary, strategy, seed);
    set.interface = sample_interface_points(problem, counts.interface, strategy, seed);
    set.initial.points.resize(problem.input_dim(), 0);
    return set;
}

PointSet validation_set(const ProblemSpec& problem, std::size_t m_interior,
                        SamplingStrategy strategy, std::uint64_t seed)
{
    auto [a, b] = sample_interior(problem, kValidationMultiplier * m_interior, strategy,
                                  seed + kValidationSeedOffset, InteriorSplit::ByGeometry);
    PointSet out;
    out.points.resize(a.rows(), a.cols() + b.cols());
    out.points << a, b;
    out.regions.assign(static_cast<std::size_t>(a.cols()), Region::Omega1);
    out.regions.insert(out.regions.end(), static_cast<std::size_t>(b.cols()), Region::Omega2);
    return out;
}

const char* region_name(Region region)
{
    switch (region) {
    case Region::Omega1: return "omega1";
    case Region::Omega2: return "omega2";
    case Region::OnInterface: return "interface";
    }
    return "?";
}

const char* strategy_name(SamplingStrategy strategy)
{
    return strategy == SamplingStrategy::Grid ? "grid" : "lhs";
}

SamplingStrategy parse_strategy(const std::string& text)
{
    if (text == "grid")
        return SamplingStrategy::Grid;
    if (text == "lhs" || text == "latin_hypercube")
        return SamplingStrategy::LatinHypercube;
    throw ConfigError("unknown sampling strategy '" + text + "' (expected grid or lhs)");
}

void write_csv(const CollocationSet& set, const ProblemSpec& problem, std::ostream& os)
{
    const int dim = problem.dim;
    for (int i = 0; i < dim; ++i)
        os << 'x' << (i + 1) << ',';
    if (problem.parabolic)
        os << "t,";
    os << "set_tag,region\n";
    os << std::setprecision(17);
    auto emit = [&](const Mat& pts, const char* tag, auto region_at) {
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            for (Eigen::Index i = 0; i < pts.rows(); ++i)
                os << pts(i, j) << ',';
            os << tag << ',' << region_name(region_at(j)) << '\n';
        }
    };
    emit(set.interior1, "interior", [](Eigen::Index) { return Region::Omega1; });
    emit(set.interior2, "interior", [](Eigen::Index) { return Region::Omega2; });
    emit(set.boundary.points, "boundary",
         [&](Eigen::Index j) { return set.boundary.regions[static_cast<std::size_t>(j)]; });
    emit(set.interface, "interface", [](Eigen::Index) { return Region::OnInterface; });
    if (problem.parabolic)
        emit(set.initial.points, "initial",
             [&](Eigen::Index j) { return set.initial.regions[static_cast<std::size_t>(j)]; });
}

}  // namespace ddpinn
