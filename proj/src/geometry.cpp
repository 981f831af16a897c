#include "ddpinn/geometry.hpp"

#include "ddpinn/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddpinn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCurveSweepSamples = 2048;
constexpr double kCurveThetaTolerance = 1e-12;
constexpr int kEllipsoidNewtonIterations = 50;
constexpr double kHorizonSlack = 1e-12;

template<class... Ts>
struct Overloaded : Ts...
{
    using Ts::operator()...;
};
template<class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const InterfaceShape& shape, const Vec& x)
{
    if (x.size() != shape.dim())
        throw std::invalid_argument("point dimension " + std::to_string(x.size())
                                    + " does not match interface dimension "
                                    + std::to_string(shape.dim()));
}

double eval_harmonic(Harmonic h, double arg)
{
    return h == Harmonic::Sin ? std::sin(arg) : std::cos(arg);
}

double eval_harmonic_derivative(Harmonic h, double arg)
{
    return h == Harmonic::Sin ? std::cos(arg) : -std::sin(arg);
}

double polar_angle(const Eigen::Vector2d& v)
{
    return std::atan2(v.y(), v.x());
}

//! Cumulative chord-length table of a closed plane curve, used to place
//! points uniformly in arc length.
class ArcLengthTable
{
  public:
    ArcLengthTable(const std::function<Eigen::Vector2d(double)>& curve, int samples = 4096)
        : theta_(samples + 1), length_(samples + 1)
    {
        Eigen::Vector2d prev = curve(0.0);
        length_[0] = 0;
        theta_[0] = 0;
        for (int k = 1; k <= samples; ++k) {
            theta_[k] = kTwoPi * k / samples;
            Eigen::Vector2d cur = curve(theta_[k]);
            length_[k] = length_[k - 1] + (cur - prev).norm();
            prev = cur;
        }
    }

    double total() const { return length_.back(); }

    double theta_at(double s) const
    {
        s = std::clamp(s, 0.0, total());
        auto it = std::upper_bound(length_.begin(), length_.end(), s);
        auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - length_.begin(), 1));
        k = std::min(k, length_.size() - 1);
        double seg = length_[k] - length_[k - 1];
        double frac = seg > 0 ? (s - length_[k - 1]) / seg : 0.0;
        return theta_[k - 1] + frac * (theta_[k] - theta_[k - 1]);
    }

  private:
    std::vector<double> theta_;
    std::vector<double> length_;
};

//! Fractions in [0,1) spread along a parametrization.
std::vector<double> unit_positions(std::size_t n, SurfaceSpacing spacing, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (spacing) {
        case SurfaceSpacing::Even:
            u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            break;
        case SurfaceSpacing::Stratified:
            u[i] = (static_cast<double>(i) + unit(rng)) / static_cast<double>(n);
            break;
        case SurfaceSpacing::Random:
            u[i] = unit(rng);
            break;
        }
    }
    return u;
}

Mat sample_closed_curve(const std::function<Eigen::Vector2d(double)>& curve, std::size_t n,
                        SurfaceSpacing spacing, std::mt19937_64& rng)
{
    ArcLengthTable table(curve);
    auto u = unit_positions(n, spacing, rng);
    Mat pts(2, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        pts.col(static_cast<Eigen::Index>(i)) = curve(table.theta_at(u[i] * table.total()));
    return pts;
}

Vec gaussian_direction(int dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec g(dim);
    do {
        for (int i = 0; i < dim; ++i)
            g[i] = normal(rng);
    } while (g.norm() < 1e-12);
    return g / g.norm();
}

//! Secular-equation solver for the closest point on an ellipsoid, working in
//! the positive orthant (z >= 0). Only axes in `active` participate; the
//! others have a zero foot coordinate.
struct OrthantSolver
{
    const Vec& a;
    const Vec& z;
    int iterations = 0;
    bool used_bisection = false;

    Vec solve(std::vector<int> active)
    {
        const auto dim = a.size();
        Vec foot = Vec::Zero(dim);
        if (active.empty())
            return foot;

        double amin = std::numeric_limits<double>::infinity();
        for (int i : active)
            amin = std::min(amin, a[i]);

        // Smallest-axis coordinate with the largest offset drives the bracket.
        int lead = -1;
        for (int i : active)
            if (a[i] == amin && z[i] > 0 && (lead < 0 || z[i] > z[lead]))
                lead = i;

        if (lead < 0) {
            // Every smallest-axis coordinate is zero: the stationary point may
            // sit at the boundary of the multiplier range.
            double sum = 0;
            std::vector<int> rest;
            for (int i : active) {
                if (a[i] == amin)
                    continue;
                rest.push_back(i);
                double q = a[i] * a[i] * z[i] / (a[i] * a[i] - amin * amin);
                foot[i] = q;
                sum += (q / a[i]) * (q / a[i]);
            }
            if (sum < 1) {
                for (int i : active) {
                    if (a[i] == amin) {
                        foot[i] = amin * std::sqrt(1 - sum);
                        break;
                    }
                }
                return foot;
            }
            return solve(rest);
        }

        // F(s) = sum (a_i z_i / (a_i^2 - amin^2 + s))^2 - 1 is convex and
        // decreasing for s > 0; Newton from the left converges monotonically.
        std::vector<double> shift(active.size());
        double znorm = 0;
        double amax = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            int i = active[k];
            shift[k] = a[i] * a[i] - amin * amin;
            znorm += z[i] * z[i];
            amax = std::max(amax, a[i]);
        }
        znorm = std::sqrt(znorm);

        auto secular = [&](double s, double* deriv) {
            double f = -1;
            double df = 0;
            for (std::size_t k = 0; k < active.size(); ++k) {
                int i = active[k];
                double denom = shift[k] + s;
                double r = a[i] * z[i] / denom;
                f += r * r;
                df -= 2 * r * r / denom;
            }
            if (deriv)
                *deriv = df;
            return f;
        };

        double s = a[lead] * z[lead];
        bool converged = false;
        for (int it = 0; it < kEllipsoidNewtonIterations; ++it) {
            ++iterations;
            double df = 0;
            double f = secular(s, &df);
            if (!std::isfinite(f) || !std::isfinite(df) || df >= 0)
                break;
            double step = -f / df;
            double next = s + step;
            if (!(next > 0) || !std::isfinite(next))
                break;
            s = next;
            if (std::abs(step) <= 1e-15 * s || f == 0) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            used_bisection = true;
            double lo = a[lead] * z[lead];
            double hi = amin * amin + amax * znorm;
            if (secular(s, nullptr) >= 0)
                lo = std::max(lo, s);
            for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                if (secular(mid, nullptr) > 0)
                    lo = mid;
                else
                    hi = mid;
            }
            s = 0.5 * (lo + hi);
        }
        for (std::size_t k = 0; k < active.size(); ++k) {
            int i = active[k];
            foot[i] = a[i] * a[i] * z[i] / (shift[k] + s);
        }
        return foot;
    }
};

double ellipsoid_level(const Ellipsoid& e, const Vec& x)
{
    return ((x - e.center).array() / e.semi_axes.array()).square().sum();
}

}  // namespace

//---------------------------------------------------------------------------//
// PolarCurve
//---------------------------------------------------------------------------//

double PolarCurve::radius(double theta) const
{
    return r0 + amplitude * eval_harmonic(harmonic, lobes * (theta - rotation));
}

double PolarCurve::radius_derivative(double theta) const
{
    return amplitude * lobes * eval_harmonic_derivative(harmonic, lobes * (theta - rotation));
}

Eigen::Vector2d PolarCurve::point(double theta) const
{
    double r = radius(theta);
    return center + r * Eigen::Vector2d(std::cos(theta), std::sin(theta));
}

Eigen::Vector2d PolarCurve::tangent(double theta) const
{
    double r = radius(theta);
    double dr = radius_derivative(theta);
    return {dr * std::cos(theta) - r * std::sin(theta), dr * std::sin(theta) + r * std::cos(theta)};
}

//---------------------------------------------------------------------------//
// InterfaceShape
//---------------------------------------------------------------------------//

InterfaceShape::InterfaceShape(ShapeKind kind, Motion motion, double horizon)
    : kind_(std::move(kind)), motion_(std::move(motion)), horizon_(horizon)
{
    dim_ = std::visit(Overloaded{
                          [](const Hyperplane& h) {
                              if (h.lower.size() != h.upper.size() || h.lower.size() < 1)
                                  throw std::invalid_argument("hyperplane extent malformed");
                              if (h.axis < 0 || h.axis >= h.lower.size())
                                  throw std::invalid_argument("hyperplane axis out of range");
                              return static_cast<int>(h.lower.size());
                          },
                          [](const Sphere& s) {
                              if (!(s.radius > 0))
                                  throw std::invalid_argument("sphere radius must be positive");
                              return static_cast<int>(s.center.size());
                          },
                          [](const Ellipsoid& e) {
                              if (e.center.size() != e.semi_axes.size())
                                  throw std::invalid_argument("ellipsoid center/axes size mismatch");
                              if ((e.semi_axes.array() <= 0).any())
                                  throw std::invalid_argument("ellipsoid semi-axes must be positive");
                              return static_cast<int>(e.center.size());
                          },
                          [](const PolarCurve& c) {
                              if (!(c.r0 > std::abs(c.amplitude)) || c.lobes < 1)
                                  throw std::invalid_argument(
                                      "polar curve needs r0 > |amplitude| and lobes >= 1");
                              return 2;
                          },
                      },
                      kind_);
    if (dim_ < 1)
        throw std::invalid_argument("interface dimension must be positive");

    if (is_moving() && !(horizon_ > 0))
        throw std::invalid_argument("moving interface needs a positive horizon");

    std::visit(Overloaded{
                   [](const Static&) {},
                   [this](const Translate& m) {
                       if (m.velocity.size() != dim_)
                           throw std::invalid_argument("velocity dimension mismatch");
                       if (std::holds_alternative<Hyperplane>(kind_))
                           throw std::invalid_argument("moving hyperplanes are not supported");
                   },
                   [this](const TranslateAndDeform& m) {
                       const auto* e = std::get_if<Ellipsoid>(&kind_);
                       if (!e)
                           throw std::invalid_argument("axis deformation applies to ellipsoids only");
                       if (m.velocity.size() != dim_ || m.squared_axis_rates.size() != dim_)
                           throw std::invalid_argument("deformation dimension mismatch");
                       Vec end = e->semi_axes.array().square() + m.squared_axis_rates.array() * horizon_;
                       if ((end.array() <= 0).any())
                           throw std::invalid_argument("ellipsoid collapses within the horizon");
                   },
                   [this](const TranslateRotateDeform& m) {
                       const auto* c = std::get_if<PolarCurve>(&kind_);
                       if (!c)
                           throw std::invalid_argument("rotation/deformation applies to polar curves only");
                       if (m.velocity.size() != 2)
                           throw std::invalid_argument("velocity dimension mismatch");
                       double end = c->amplitude + m.amplitude_rate * horizon_;
                       if (!(c->r0 > std::abs(end)))
                           throw std::invalid_argument("polar curve loses star shape within the horizon");
                   },
               },
               motion_);
}

ShapeKind InterfaceShape::at(double t) const
{
    if (!is_moving())
        return kind_;
    if (!(t >= -kHorizonSlack && t <= horizon_ + kHorizonSlack))
        throw std::out_of_range("time " + std::to_string(t) + " outside interface horizon [0, "
                                + std::to_string(horizon_) + "]");
    ShapeKind snap = kind_;
    std::visit(Overloaded{
                   [](const Static&) {},
                   [&](const Translate& m) {
                       std::visit(Overloaded{
                                      [](Hyperplane&) {},
                                      [&](Sphere& s) { s.center += m.velocity * t; },
                                      [&](Ellipsoid& e) { e.center += m.velocity * t; },
                                      [&](PolarCurve& c) { c.center += m.velocity * t; },
                                  },
                                  snap);
                   },
                   [&](const TranslateAndDeform& m) {
                       auto& e = std::get<Ellipsoid>(snap);
                       e.center += m.velocity * t;
                       e.semi_axes = (e.semi_axes.array().square()
                                      + m.squared_axis_rates.array() * t)
                                         .sqrt()
                                         .matrix();
                   },
                   [&](const TranslateRotateDeform& m) {
                       auto& c = std::get<PolarCurve>(snap);
                       c.center += m.velocity * t;
                       c.rotation += m.angular_rate * t;
                       c.amplitude += m.amplitude_rate * t;
                   },
               },
               motion_);
    return snap;
}

//---------------------------------------------------------------------------//
// Projections
//---------------------------------------------------------------------------//

EllipsoidProjection project_onto_ellipsoid(const Ellipsoid& e, const Vec& x)
{
    if (x.size() != e.center.size())
        throw std::invalid_argument("ellipsoid projection: dimension mismatch");
    const auto dim = x.size();
    Vec y = x - e.center;
    Vec z = y.cwiseAbs();
    OrthantSolver solver{e.semi_axes, z};
    std::vector<int> active(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i)
        active[static_cast<std::size_t>(i)] = static_cast<int>(i);
    Vec foot_abs = solver.solve(active);

    EllipsoidProjection out;
    out.foot = e.center;
    for (Eigen::Index i = 0; i < dim; ++i)
        out.foot[i] += (y[i] < 0 ? -1.0 : 1.0) * foot_abs[i];
    out.distance = (z - foot_abs).norm();
    out.iterations = solver.iterations;
    out.used_bisection = solver.used_bisection;
    return out;
}

CurveProjection project_onto_curve(const PolarCurve& curve, const Eigen::Vector2d& x)
{
    constexpr int n = kCurveSweepSamples;
    std::vector<double> d2(n);
    std::vector<Eigen::Vector2d> pts(n);
    double best = std::numeric_limits<double>::infinity();
    double max_chord = 0;
    for (int k = 0; k < n; ++k) {
        pts[k] = curve.point(kTwoPi * k / n);
        d2[k] = (pts[k] - x).squaredNorm();
        best = std::min(best, d2[k]);
        if (k > 0)
            max_chord = std::max(max_chord, (pts[k] - pts[k - 1]).norm());
    }
    max_chord = std::max(max_chord, (pts[0] - pts[n - 1]).norm());

    auto dist2 = [&](double theta) { return (curve.point(theta) - x).squaredNorm(); };

    // Any sampled local minimum that could still hide the global minimum
    // (within one chord of the best sample) is refined by golden section.
    const double cutoff = std::sqrt(best) + max_chord;
    const double invphi = (std::sqrt(5.0) - 1) / 2;
    CurveProjection out;
    out.distance = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        double prev = d2[(k + n - 1) % n];
        double next = d2[(k + 1) % n];
        if (d2[k] > prev || d2[k] > next || std::sqrt(d2[k]) > cutoff)
            continue;
        double lo = kTwoPi * (k - 1) / n;
        double hi = kTwoPi * (k + 1) / n;
        double c = hi - invphi * (hi - lo);
        double d = lo + invphi * (hi - lo);
        double fc = dist2(c);
        double fd = dist2(d);
        while (hi - lo > kCurveThetaTolerance) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - invphi * (hi - lo);
                fc = dist2(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + invphi * (hi - lo);
                fd = dist2(d);
            }
        }
        double theta = 0.5 * (lo + hi);
        double dist = std::sqrt(dist2(theta));
        if (dist < out.distance) {
            out.distance = dist;
            out.theta = theta;
        }
    }
    out.theta = std::remainder(out.theta, kTwoPi);
    out.foot = curve.point(out.theta);
    return out;
}

//---------------------------------------------------------------------------//
// Queries
//---------------------------------------------------------------------------//

namespace {

double snapshot_distance(const ShapeKind& snap, const Vec& x)
{
    return std::visit(Overloaded{
                          [&](const Hyperplane& h) { return std::abs(x[h.axis] - h.offset); },
                          [&](const Sphere& s) { return std::abs((x - s.center).norm() - s.radius); },
                          [&](const Ellipsoid& e) { return project_onto_ellipsoid(e, x).distance; },
                          [&](const PolarCurve& c) {
                              return project_onto_curve(c, Eigen::Vector2d(x[0], x[1])).distance;
                          },
                      },
                      snap);
}

bool snapshot_inside(const ShapeKind& snap, const Vec& x)
{
    return std::visit(Overloaded{
                          [&](const Hyperplane& h) { return x[h.axis] > h.offset; },
                          [&](const Sphere& s) { return (x - s.center).norm() < s.radius; },
                          [&](const Ellipsoid& e) { return ellipsoid_level(e, x) < 1.0; },
                          [&](const PolarCurve& c) {
                              Eigen::Vector2d v(x[0] - c.center.x(), x[1] - c.center.y());
                              return v.norm() < c.radius(polar_angle(v));
                          },
                      },
                      snap);
}

}  // namespace

double distance(const InterfaceShape& shape, const Vec& x, double t)
{
    require_dim(shape, x);
    return snapshot_distance(shape.at(t), x);
}

bool inside_or_positive(const InterfaceShape& shape, const Vec& x, double t)
{
    require_dim(shape, x);
    return snapshot_inside(shape.at(t), x);
}

double signed_distance(const InterfaceShape& shape, const Vec& x, double t)
{
    require_dim(shape, x);
    ShapeKind snap = shape.at(t);
    double d = snapshot_distance(snap, x);
    if (std::holds_alternative<Hyperplane>(snap)) {
        const auto& h = std::get<Hyperplane>(snap);
        return x[h.axis] - h.offset;
    }
    return snapshot_inside(snap, x) ? -d : d;
}

Vec outward_normal(const InterfaceShape& shape, const Vec& p, double t)
{
    require_dim(shape, p);
    ShapeKind snap = shape.at(t);
    double d = snapshot_distance(snap, p);
    if (!(d <= kOnInterfaceTolerance))
        throw std::invalid_argument("normal requested at a point " + std::to_string(d)
                                    + " away from the interface");
    Vec n = std::visit(Overloaded{
                           [&](const Hyperplane& h) {
                               Vec e = Vec::Zero(p.size());
                               e[h.axis] = 1.0;
                               return e;
                           },
                           [&](const Sphere& s) { return Vec(p - s.center); },
                           [&](const Ellipsoid& e) {
                               return Vec((p - e.center).array() / e.semi_axes.array().square());
                           },
                           [&](const PolarCurve& c) {
                               Eigen::Vector2d v(p[0] - c.center.x(), p[1] - c.center.y());
                               double theta = polar_angle(v);
                               double rho = v.norm();
                               Eigen::Vector2d e_r(std::cos(theta), std::sin(theta));
                               Eigen::Vector2d e_t(-std::sin(theta), std::cos(theta));
                               Eigen::Vector2d g = e_r - (c.radius_derivative(theta) / rho) * e_t;
                               return Vec(g);
                           },
                       },
                       snap);
    double len = n.norm();
    if (!(len > 0))
        throw std::invalid_argument("normal undefined at this point");
    return n / len;
}

Vec normal(const InterfaceShape& shape, const Vec& p, double t, Omega1Side omega1_side)
{
    Vec n = outward_normal(shape, p, t);
    switch (omega1_side) {
    case Omega1Side::Inside:
    case Omega1Side::NegativeHalf:
        if (omega1_side == Omega1Side::Inside && !shape.is_closed())
            throw std::invalid_argument("Inside/Outside sides need a closed interface");
        if (omega1_side == Omega1Side::NegativeHalf && shape.is_closed())
            throw std::invalid_argument("half-space sides need a hyperplane");
        return n;
    case Omega1Side::Outside:
    case Omega1Side::PositiveHalf:
        if (omega1_side == Omega1Side::Outside && !shape.is_closed())
            throw std::invalid_argument("Inside/Outside sides need a closed interface");
        if (omega1_side == Omega1Side::PositiveHalf && shape.is_closed())
            throw std::invalid_argument("half-space sides need a hyperplane");
        return -n;
    }
    return n;
}

Region classify(const InterfaceShape& shape, const Vec& x, double t, Omega1Side omega1_side)
{
    require_dim(shape, x);
    bool closed_side = omega1_side == Omega1Side::Inside || omega1_side == Omega1Side::Outside;
    if (closed_side != shape.is_closed())
        throw std::invalid_argument("Omega1 side convention does not match interface kind");
    ShapeKind snap = shape.at(t);
    if (snapshot_distance(snap, x) <= kClassifyTolerance)
        return Region::OnInterface;
    bool pos = snapshot_inside(snap, x);
    bool omega1 = (omega1_side == Omega1Side::Inside || omega1_side == Omega1Side::PositiveHalf)
                      ? pos
                      : !pos;
    return omega1 ? Region::Omega1 : Region::Omega2;
}

Mat sample_interface(const InterfaceShape& shape, std::size_t n, double t, std::uint64_t seed,
                     SurfaceSpacing spacing)
{
    if (n < 1)
        throw std::invalid_argument("sample_interface: n must be at least 1");
    std::mt19937_64 rng(seed);
    ShapeKind snap = shape.at(t);
    const int dim = shape.dim();
    return std::visit(
        Overloaded{
            [&](const Hyperplane& h) {
                Mat pts(dim, static_cast<Eigen::Index>(n));
                if (dim == 1) {
                    pts.setConstant(h.offset);
                    return pts;
                }
                Vec lo(dim - 1);
                Vec hi(dim - 1);
                for (int i = 0, k = 0; i < dim; ++i) {
                    if (i == h.axis)
                        continue;
                    lo[k] = h.lower[i];
                    hi[k] = h.upper[i];
                    ++k;
                }
                Mat face;
                if (spacing == SurfaceSpacing::Even) {
                    face = cell_centered_grid(lo, hi, n);
                } else if (spacing == SurfaceSpacing::Stratified) {
                    face = latin_hypercube(lo, hi, n, rng);
                } else {
                    std::uniform_real_distribution<double> unit(0.0, 1.0);
                    face.resize(dim - 1, static_cast<Eigen::Index>(n));
                    for (Eigen::Index j = 0; j < face.cols(); ++j)
                        for (int k = 0; k < dim - 1; ++k)
                            face(k, j) = lo[k] + (hi[k] - lo[k]) * unit(rng);
                }
                for (Eigen::Index j = 0; j < face.cols(); ++j) {
                    for (int i = 0, k = 0; i < dim; ++i) {
                        if (i == h.axis) {
                            pts(i, j) = h.offset;
                        } else {
                            pts(i, j) = face(k, j);
                            ++k;
                        }
                    }
                }
                return pts;
            },
            [&](const Sphere& s) {
                if (dim == 2) {
                    auto circle = [&](double th) {
                        return Eigen::Vector2d(s.center[0] + s.radius * std::cos(th),
                                               s.center[1] + s.radius * std::sin(th));
                    };
                    auto u = unit_positions(n, spacing, rng);
                    Mat pts(2, static_cast<Eigen::Index>(n));
                    for (std::size_t i = 0; i < n; ++i)
                        pts.col(static_cast<Eigen::Index>(i)) = circle(kTwoPi * u[i]);
                    return pts;
                }
                Mat pts(dim, static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < n; ++i)
                    pts.col(static_cast<Eigen::Index>(i))
                        = s.center + s.radius * gaussian_direction(dim, rng);
                return pts;
            },
            [&](const Ellipsoid& e) {
                if (dim == 2) {
                    auto ellipse = [&](double th) {
                        return Eigen::Vector2d(e.center[0] + e.semi_axes[0] * std::cos(th),
                                               e.center[1] + e.semi_axes[1] * std::sin(th));
                    };
                    return sample_closed_curve(ellipse, n, spacing, rng);
                }
                // Area-uniform: map sphere directions and accept in proportion
                // to the surface area element of the map.
                std::uniform_real_distribution<double> unit(0.0, 1.0);
                const double amin = e.semi_axes.minCoeff();
                Mat pts(dim, static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < n;) {
                    Vec u = gaussian_direction(dim, rng);
                    double density = (u.array() / e.semi_axes.array()).matrix().norm() * amin;
                    if (unit(rng) > density)
                        continue;
                    pts.col(static_cast<Eigen::Index>(i))
                        = e.center + (e.semi_axes.array() * u.array()).matrix();
                    ++i;
                }
                return pts;
            },
            [&](const PolarCurve& c) {
                return sample_closed_curve([&](double th) { return c.point(th); }, n, spacing,
                                           rng);
            },
        },
        snap);
}

//---------------------------------------------------------------------------//
// Domain
//---------------------------------------------------------------------------//

Domain::Domain(BoxDomain box) : shape_(box), bbox_(std::move(box))
{
    if (bbox_.lower.size() != bbox_.upper.size() || bbox_.lower.size() < 1)
        throw std::invalid_argument("box bounds malformed");
    if ((bbox_.upper.array() <= bbox_.lower.array()).any())
        throw std::invalid_argument("box must have positive extent on every axis");
}

Domain::Domain(PolarDomain region) : shape_(region)
{
    const auto& c = region.boundary;
    if (!(c.r0 > std::abs(c.amplitude)))
        throw std::invalid_argument("polar domain boundary must be star-shaped");
    double rmax = c.r0 + std::abs(c.amplitude);
    bbox_.lower = Vec(2);
    bbox_.upper = Vec(2);
    bbox_.lower << c.center.x() - rmax, c.center.y() - rmax;
    bbox_.upper << c.center.x() + rmax, c.center.y() + rmax;
}

int Domain::dim() const
{
    return static_cast<int>(bbox_.lower.size());
}

double Domain::boundary_distance(const Vec& x) const
{
    if (x.size() != dim())
        throw std::invalid_argument("domain: dimension mismatch");
    return std::visit(Overloaded{
                          [&](const BoxDomain& b) {
                              double d = std::numeric_limits<double>::infinity();
                              for (Eigen::Index i = 0; i < x.size(); ++i) {
                                  double inside = std::min(x[i] - b.lower[i], b.upper[i] - x[i]);
                                  d = std::min(d, std::abs(inside));
                              }
                              return d;
                          },
                          [&](const PolarDomain& p) {
                              return project_onto_curve(p.boundary, Eigen::Vector2d(x[0], x[1]))
                                  .distance;
                          },
                      },
                      shape_);
}

bool Domain::contains(const Vec& x, double tol) const
{
    if (x.size() != dim())
        throw std::invalid_argument("domain: dimension mismatch");
    bool in = std::visit(Overloaded{
                             [&](const BoxDomain& b) {
                                 return ((x.array() > b.lower.array())
                                         && (x.array() < b.upper.array()))
                                     .all();
                             },
                             [&](const PolarDomain& p) {
                                 Eigen::Vector2d v(x[0] - p.boundary.center.x(),
                                                   x[1] - p.boundary.center.y());
                                 return v.norm() < p.boundary.radius(polar_angle(v));
                             },
                         },
                         shape_);
    return in && boundary_distance(x) > tol;
}

Mat Domain::sample_boundary(std::size_t m, std::uint64_t seed, SurfaceSpacing spacing) const
{
    if (m < 1)
        throw std::invalid_argument("sample_boundary: m must be at least 1");
    std::mt19937_64 rng(seed);
    if (const auto* p = std::get_if<PolarDomain>(&shape_))
        return sample_closed_curve([&](double th) { return p->boundary.point(th); }, m, spacing,
                                   rng);

    const auto& b = std::get<BoxDomain>(shape_);
    const int dim = this->dim();
    if (dim == 1) {
        Mat pts(1, static_cast<Eigen::Index>(m));
        for (std::size_t k = 0; k < m; ++k)
            pts(0, static_cast<Eigen::Index>(k)) = (k % 2 == 0) ? b.lower[0] : b.upper[0];
        return pts;
    }

    // Faces ordered (axis 0 lower, axis 0 upper, axis 1 lower, ...); counts
    // proportional to area by largest remainder.
    const int faces = 2 * dim;
    std::vector<double> area(faces);
    double total_area = 0;
    for (int f = 0; f < faces; ++f) {
        int axis = f / 2;
        double a = 1;
        for (int i = 0; i < dim; ++i)
            if (i != axis)
                a *= b.upper[i] - b.lower[i];
        area[f] = a;
        total_area += a;
    }
    std::vector<std::size_t> count(faces);
    std::vector<std::pair<double, int>> remainder(faces);
    std::size_t assigned = 0;
    for (int f = 0; f < faces; ++f) {
        double exact = static_cast<double>(m) * area[f] / total_area;
        count[f] = static_cast<std::size_t>(std::floor(exact));
        assigned += count[f];
        remainder[f] = {exact - std::floor(exact), -f};
    }
    std::sort(remainder.rbegin(), remainder.rend());
    for (std::size_t k = 0; assigned < m; ++k, ++assigned)
        ++count[static_cast<std::size_t>(-remainder[k % faces].second)];

    Mat pts(dim, static_cast<Eigen::Index>(m));
    Eigen::Index col = 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int f = 0; f < faces; ++f) {
        if (count[f] == 0)
            continue;
        int axis = f / 2;
        double fixed = (f % 2 == 0) ? b.lower[axis] : b.upper[axis];
        Vec lo(dim - 1);
        Vec hi(dim - 1);
        for (int i = 0, k = 0; i < dim; ++i) {
            if (i == axis)
                continue;
            lo[k] = b.lower[i];
            hi[k] = b.upper[i];
            ++k;
        }
        Mat face;
        if (spacing == SurfaceSpacing::Even) {
            face = cell_centered_grid(lo, hi, count[f]);
        } else if (spacing == SurfaceSpacing::Stratified) {
            face = latin_hypercube(lo, hi, count[f], rng);
        } else {
            face.resize(dim - 1, static_cast<Eigen::Index>(count[f]));
            for (Eigen::Index j = 0; j < face.cols(); ++j)
                for (int k = 0; k < dim - 1; ++k)
                    face(k, j) = lo[k] + (hi[k] - lo[k]) * unit(rng);
        }
        for (Eigen::Index j = 0; j < face.cols(); ++j, ++col) {
            for (int i = 0, k = 0; i < dim; ++i) {
                if (i == axis) {
                    pts(i, col) = fixed;
                } else {
                    pts(i, col) = face(k, j);
                    ++k;
                }
            }
        }
    }
    return pts;
}

}  // namespace ddpinn
