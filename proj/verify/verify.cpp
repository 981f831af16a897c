#include "verify.hpp"

#include "ddpinn/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ddpinn::verify {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;

Vec shifted(const Vec& x, int axis, double off)
{
    Vec y = x;
    y[axis] += off;
    return y;
}

//! Golden-section minimum of f on [a, b].
template<class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol)
{
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    const double m = 0.5 * (a + b);
    return {m, f(m)};
}

double elapsed(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

//---------------------------------------------------------------------------//
// Stencils
//---------------------------------------------------------------------------//

double central_first(const ScalarField& f, const Vec& x, int axis, double h)
{
    return (f(shifted(x, axis, h)) - f(shifted(x, axis, -h))) / (2 * h);
}

double central_second(const ScalarField& f, const Vec& x, int axis, double h)
{
    return (f(shifted(x, axis, h)) - 2 * f(x) + f(shifted(x, axis, -h))) / (h * h);
}

double richardson_first(const ScalarField& f, const Vec& x, int axis, double h)
{
    return (4 * central_first(f, x, axis, 0.5 * h) - central_first(f, x, axis, h)) / 3;
}

double richardson_second(const ScalarField& f, const Vec& x, int axis, double h)
{
    return (4 * central_second(f, x, axis, 0.5 * h) - central_second(f, x, axis, h)) / 3;
}

double richardson_laplacian(const ScalarField& f, const Vec& x, int axes, double h)
{
    double lap = 0;
    for (int k = 0; k < axes; ++k)
        lap += richardson_second(f, x, k, h);
    return lap;
}

//---------------------------------------------------------------------------//
// Distance oracles
//---------------------------------------------------------------------------//

double curve_distance(const PlaneCurve& curve, const Eigen::Vector2d& x, int samples)
{
    const int n = samples;
    std::vector<double> d(static_cast<std::size_t>(n));
    double best = std::numeric_limits<double>::infinity();
    double chord = 0;
    Eigen::Vector2d prev = curve(0.0);
    for (int k = 0; k < n; ++k) {
        Eigen::Vector2d p = curve(kTwoPi * k / n);
        d[static_cast<std::size_t>(k)] = (p - x).norm();
        best = std::min(best, d[static_cast<std::size_t>(k)]);
        chord = std::max(chord, (p - prev).norm());
        prev = p;
    }
    chord = std::max(chord, (curve(0.0) - prev).norm());
    auto dist = [&](double th) { return (curve(th) - x).norm(); };
    double refined = best;
    for (int k = 0; k < n; ++k) {
        const double dk = d[static_cast<std::size_t>(k)];
        const double dl = d[static_cast<std::size_t>((k + n - 1) % n)];
        const double dr = d[static_cast<std::size_t>((k + 1) % n)];
        if (dk > dl || dk > dr || dk > best + chord)
            continue;
        const double a = kTwoPi * (k - 1) / n;
        const double b = kTwoPi * (k + 1) / n;
        refined = std::min(refined, golden_min(dist, a, b, 1e-14).second);
    }
    return refined;
}

double ellipsoid3_distance(const Eigen::Vector3d& center, const Eigen::Vector3d& axes,
                           const Eigen::Vector3d& x, int samples)
{
    auto point = [&](double th, double ph) {
        return Eigen::Vector3d(center[0] + axes[0] * std::sin(th) * std::cos(ph),
                               center[1] + axes[1] * std::sin(th) * std::sin(ph),
                               center[2] + axes[2] * std::cos(th));
    };
    auto dist = [&](double th, double ph) { return (point(th, ph) - x).norm(); };
    double best = std::numeric_limits<double>::infinity();
    double bt = 0;
    double bp = 0;
    for (int i = 0; i <= samples; ++i) {
        const double th = std::numbers::pi * i / samples;
        for (int j = 0; j < 2 * samples; ++j) {
            const double ph = std::numbers::pi * j / samples;
            const double v = dist(th, ph);
            if (v < best) {
                best = v;
                bt = th;
                bp = ph;
            }
        }
    }
    double step = std::numbers::pi / samples;
    while (step > 1e-13) {
        bool moved = false;
        for (auto [dt, dp] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1},
                              {-1, 1}}) {
            const double v = dist(bt + dt * step, bp + dp * step);
            if (v < best) {
                best = v;
                bt += dt * step;
                bp += dp * step;
                moved = true;
            }
        }
        if (!moved)
            step *= 0.5;
    }
    return best;
}

PlaneCurve catalog_curve(const std::string& problem, double t)
{
    using V2 = Eigen::Vector2d;
    if (problem == "ellipse2d")
        return [](double th) { return V2(0.2 * std::cos(th), 0.5 * std::sin(th)); };
    if (problem == "sunflower2d") {
        const double c = 0.02 * std::sqrt(5.0);
        return [c](double th) {
            const double r = 0.4 + 0.2 * std::sin(20 * th);
            return V2(c + r * std::cos(th), c + r * std::sin(th));
        };
    }
    if (problem == "flower2d")
        return [](double th) {
            const double r = 0.4 - 0.2 * std::cos(5 * th);
            return V2(r * std::cos(th), r * std::sin(th));
        };
    if (problem == "fixed_circle")
        return [](double th) { return V2(1.5 + std::cos(th), 1.5 + std::sin(th)); };
    if (problem == "moving_circle")
        return [t](double th) { return V2(1.2 + t + std::cos(th), 1.2 + t + std::sin(th)); };
    if (problem == "deforming_ellipse") {
        const double a = std::sqrt(1 + 0.1 * t);
        const double b = std::sqrt(1 - 0.1 * t);
        const double c = 1.2 + 0.8 * t;
        return [=](double th) { return V2(c + a * std::cos(th), c + b * std::sin(th)); };
    }
    if (problem == "deforming_star") {
        const double c = 1.2 + 0.8 * t;
        const double phi = kTwoPi * t;
        return [=](double th) {
            const double r = 1 - 0.3 * t * std::cos(5 * th);
            const double bx = r * std::cos(th);
            const double by = r * std::sin(th);
            return V2(c + std::cos(phi) * bx - std::sin(phi) * by,
                      c + std::sin(phi) * bx + std::cos(phi) * by);
        };
    }
    throw std::invalid_argument("no closed plane curve for problem '" + problem + "'");
}

namespace {

//! Level set F of Gamma(t) increasing from the inside (or x < 0) outward.
ScalarField catalog_level_set(const std::string& problem, double t)
{
    auto ellipse = [](Vec c, Vec a) {
        return [c, a](const Vec& x) { return ((x - c).array() / a.array()).square().sum() - 1; };
    };
    auto polar = [](Eigen::Vector2d c, double phi, std::function<double(double)> r) {
        return [=](const Vec& x) {
            const double dx = x[0] - c[0];
            const double dy = x[1] - c[1];
            return std::hypot(dx, dy) - r(std::atan2(dy, dx) - phi);
        };
    };
    if (problem == "line2d")
        return [](const Vec& x) { return x[0]; };
    if (problem == "sunflower2d") {
        const double c = 0.02 * std::sqrt(5.0);
        return polar({c, c}, 0, [](double th) { return 0.4 + 0.2 * std::sin(20 * th); });
    }
    if (problem == "flower2d")
        return polar({0, 0}, 0, [](double th) { return 0.4 - 0.2 * std::cos(5 * th); });
    if (problem == "deforming_star") {
        const double c = 1.2 + 0.8 * t;
        return polar({c, c}, kTwoPi * t, [t](double th) { return 1 - 0.3 * t * std::cos(5 * th); });
    }
    if (problem == "ellipse2d")
        return ellipse(Vec::Zero(2), Eigen::Vector2d(0.2, 0.5));
    if (problem == "ellipsoid3d")
        return ellipse(Vec::Zero(3), Eigen::Vector3d(0.7, 0.5, 0.3));
    if (problem == "deforming_ellipse")
        return ellipse(Vec::Constant(2, 1.2 + 0.8 * t),
                       Eigen::Vector2d(std::sqrt(1 + 0.1 * t), std::sqrt(1 - 0.1 * t)));
    if (problem == "hypersphere10d")
        return [](const Vec& x) { return x.norm() - 0.5; };
    if (problem == "fixed_circle")
        return [](const Vec& x) { return (x - Vec::Constant(2, 1.5)).norm() - 1; };
    if (problem == "moving_circle")
        return [t](const Vec& x) { return (x - Vec::Constant(2, 1.2 + t)).norm() - 1; };
    throw std::invalid_argument("no level set for problem '" + problem + "'");
}

Architecture random_architecture(std::mt19937_64& rng, int d_in, ActivationMode mode)
{
    std::uniform_int_distribution<int> layers(1, 3);
    std::uniform_int_distribution<int> width(3, 10);
    std::uniform_real_distribution<double> u(0, 1);
    Architecture a;
    a.d_in = d_in;
    a.hidden.resize(static_cast<std::size_t>(layers(rng)));
    for (auto& w : a.hidden)
        w = width(rng);
    a.mode = mode;
    a.gauss_bias = u(rng) < 0.5;
    a.gauss_gamma = 0.5 + 1.5 * u(rng);
    a.input_shift = Vec::NullaryExpr(d_in, [&] { return u(rng) - 0.5; });
    a.input_scale = Vec::NullaryExpr(d_in, [&] { return 0.5 + 1.5 * u(rng); });
    return a;
}

//! Initialized parameters with every entry (biases included) perturbed.
NetworkParams random_params(const Architecture& arch, std::mt19937_64& rng)
{
    NetworkParams p = initialize(arch, rng());
    std::normal_distribution<double> noise(0, 0.1);
    for (Eigen::Index i = 0; i < p.theta().size(); ++i)
        p.theta()[i] += noise(rng);
    return p;
}

}  // namespace

//---------------------------------------------------------------------------//
// Suites
//---------------------------------------------------------------------------//

CheckResult check_derivatives(std::uint64_t seed, int networks, int points)
{
    const auto start = std::chrono::steady_clock::now();
    CheckResult res{"derivatives", true, "", 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    const int dims[] = {1, 2, 3, 10};
    constexpr double kJetTol = 1e-5;
    constexpr double kFloor = 1e-2;
    double worst = 0;
    std::string where;

    for (int i = 0; i < networks; ++i) {
        const int d = dims[i % 4];
        const ActivationMode mode
            = (i / 4) % 2 == 0 ? ActivationMode::MultiActivation : ActivationMode::TanhOnly;
        const bool timed = i % 3 == 0;
        const int d_in = d + (timed ? 1 : 0);
        NetworkParams p = random_params(random_architecture(rng, d_in, mode), rng);
        for (int k = 0; k < points; ++k) {
            Vec x = Vec::NullaryExpr(d, [&] { return 2 * u(rng) - 1; });
            const double t = u(rng);
            const double w2 = mode == ActivationMode::MultiActivation ? u(rng) : 0.0;
            Jet jet = eval_jet(p, x, timed ? std::optional<double>(t) : std::nullopt, {1 - w2, w2});
            Vec z(d_in);
            z.head(d) = x;
            if (timed)
                z[d] = t;
            ScalarField f = [&](const Vec& y) { return forward_with_weight(p, y, w2); };
            auto record = [&](double got, double ref, const char* what) {
                const double err = std::abs(got - ref) / std::max(std::abs(ref), kFloor);
                if (err > worst) {
                    worst = err;
                    where = std::string(what) + " (network " + std::to_string(i) + ", d="
                            + std::to_string(d) + ")";
                }
            };
            record(jet.value, f(z), "value");
            for (int a = 0; a < d; ++a)
                record(jet.grad[a], richardson_first(f, z, a, 1e-3), "gradient");
            record(jet.lap, richardson_laplacian(f, z, d, 1e-2), "laplacian");
            if (timed)
                record(*jet.dt, richardson_first(f, z, d, 1e-3), "time derivative");
        }
    }
    const bool jets_ok = worst <= kJetTol;

    // Loss gradients on every cataloged problem, per activation and weight mode.
    double worst_grad = 0;
    std::string grad_where;
    std::size_t checked = 0;
    struct Variant
    {
        ActivationMode mode;
        OmegaMode omega;
        const char* name;
    };
    const Variant variants[] = {
        {ActivationMode::MultiActivation, OmegaMode::Frozen, "multi/frozen"},
        {ActivationMode::MultiActivation, OmegaMode::Differentiated, "multi/differentiated"},
        {ActivationMode::TanhOnly, OmegaMode::Frozen, "tanh"},
    };
    for (const auto& problem : catalog()) {
        for (const auto& v : variants) {
            TrainConfig cfg;
            cfg.problem = problem.name;
            cfg.hidden = {6, 5};
            cfg.mode = v.mode;
            cfg.gauss_bias = u(rng) < 0.5;
            Architecture arch = make_architecture(cfg, problem);
            NetworkParams p1 = random_params(arch, rng);
            NetworkParams p2 = random_params(arch, rng);
            CollocationCounts counts{200, 8, 6, 6};
            CollocationSet colloc = sample_collocation(problem, counts, problem.default_strategy, rng());
            ProblemLoss loss(problem, colloc, cfg.weights, arch, v.omega);
            GradientCheckReport rep = check_gradient(loss, p1, p2, 1e-4, 1e-5);
            checked += rep.checked;
            if (rep.max_rel_error > worst_grad) {
                worst_grad = rep.max_rel_error;
                grad_where = problem.name + " " + v.name;
            }
        }
    }
    const bool grads_ok = worst_grad <= 1e-4;

    res.pass = jets_ok && grads_ok;
    res.detail = "jets: " + std::to_string(networks) + " networks x " + std::to_string(points)
                 + " points, max rel err " + fmt(worst) + (where.empty() ? "" : " at " + where)
                 + "; loss gradient: " + std::to_string(checked) + " entries, max rel err "
                 + fmt(worst_grad) + (grad_where.empty() ? "" : " at " + grad_where);
    res.seconds = elapsed(start);
    return res;
}

CheckResult check_geometry(std::uint64_t seed, int points)
{
    const auto start = std::chrono::steady_clock::now();
    CheckResult res{"geometry", true, "", 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    struct Case
    {
        const char* problem;
        double t;
    };
    const Case cases[] = {
        {"ellipse2d", 0},         {"sunflower2d", 0},         {"flower2d", 0},
        {"deforming_star", 0},    {"deforming_star", 0.5},    {"deforming_star", 1},
        {"deforming_ellipse", 0}, {"deforming_ellipse", 0.5}, {"deforming_ellipse", 1},
    };
    double worst = 0;
    std::string where;
    for (const auto& c : cases) {
        const ProblemSpec& p = find_problem(c.problem);
        PlaneCurve curve = catalog_curve(c.problem, c.t);
        const auto& bb = p.domain.bounding_box();
        for (int k = 0; k < points; ++k) {
            Vec x(2);
            for (int i = 0; i < 2; ++i)
                x[i] = bb.lower[i] + (bb.upper[i] - bb.lower[i]) * u(rng);
            const double got = distance(p.interface, x, c.t);
            const double ref = curve_distance(curve, Eigen::Vector2d(x[0], x[1]));
            const double err = std::abs(got - ref);
            if (err > worst) {
                worst = err;
                where = std::string(c.problem) + " t=" + fmt(c.t);
            }
        }
    }
    res.pass = worst <= 1e-6;
    res.detail = std::to_string(std::size(cases)) + " shapes x " + std::to_string(points)
                 + " points, max abs err " + fmt(worst) + (where.empty() ? "" : " at " + where);
    res.seconds = elapsed(start);
    return res;
}

CheckResult check_manufactured(std::uint64_t seed, int points)
{
    const auto start = std::chrono::steady_clock::now();
    CheckResult res{"manufactured", true, "", 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    constexpr double h = 1e-3;
    double worst_pde = 0;
    double worst_g1 = 0;
    double worst_g2 = 0;
    std::string pde_where, g1_where, g2_where;

    for (const auto& p : catalog()) {
        const auto& bb = p.domain.bounding_box();
        const int dim = p.dim;
        auto draw_time = [&] { return p.parabolic ? 0.01 + (p.horizon - 0.02) * u(rng) : 0.0; };

        int accepted = 0;
        for (int attempt = 0; accepted < points && attempt < 1000 * points; ++attempt) {
            Vec x(dim);
            for (int i = 0; i < dim; ++i)
                x[i] = bb.lower[i] + (bb.upper[i] - bb.lower[i]) * u(rng);
            const double t = draw_time();
            if (!p.domain.contains(x, 2 * h) || distance(p.interface, x, t) <= 2 * h)
                continue;
            ++accepted;
            const Region r = region_of(p, x, t);
            const ExactField& field = p.field(r);
            Vec z(p.input_dim());
            z.head(dim) = x;
            if (p.parabolic)
                z[dim] = t;
            ScalarField fu = [&](const Vec& y) {
                return field.value(y.head(dim), p.parabolic ? y[dim] : 0.0);
            };
            double res_v = -p.beta(r) * richardson_laplacian(fu, z, dim, h) - source(p, r, x, t);
            if (p.parabolic)
                res_v += richardson_first(fu, z, dim, h);
            const double err = std::abs(res_v) / std::max(1.0, std::abs(source(p, r, x, t)));
            if (err > worst_pde) {
                worst_pde = err;
                pde_where = p.name;
            }
        }

        for (int k = 0; k < 20; ++k) {
            const double t = draw_time();
            Mat pts = sample_interface(p.interface, 5, t, rng());
            ScalarField level = catalog_level_set(p.name, t);
            for (Eigen::Index j = 0; j < pts.cols(); ++j) {
                Vec q = pts.col(j);
                auto [g1, g2] = jump_data(p, q, t);
                const double ref1 = p.u1.value(q, t) - p.u2.value(q, t);
                const double e1 = std::abs(g1 - ref1) + std::abs(level(q));
                if (e1 > worst_g1) {
                    worst_g1 = e1;
                    g1_where = p.name;
                }
                Vec grad_f(dim), g_u1(dim), g_u2(dim);
                ScalarField u1 = [&](const Vec& y) { return p.u1.value(y, t); };
                ScalarField u2 = [&](const Vec& y) { return p.u2.value(y, t); };
                for (int a = 0; a < dim; ++a) {
                    grad_f[a] = richardson_first(level, q, a, h);
                    g_u1[a] = richardson_first(u1, q, a, h);
                    g_u2[a] = richardson_first(u2, q, a, h);
                }
                Vec n = grad_f.normalized();
                if (p.omega1_side == Omega1Side::Outside || p.omega1_side == Omega1Side::PositiveHalf)
                    n = -n;
                const double ref2 = p.beta1 * g_u1.dot(n) - p.beta2 * g_u2.dot(n);
                const double e2 = std::abs(g2 - ref2) / std::max(1.0, std::abs(ref2));
                if (e2 > worst_g2) {
                    worst_g2 = e2;
                    g2_where = p.name;
                }
            }
        }
    }
    res.pass = worst_pde <= 1e-6 && worst_g1 <= 1e-10 && worst_g2 <= 1e-6;
    auto at = [](const std::string& w) { return w.empty() ? std::string() : " (" + w + ")"; };
    res.detail = "pde residual " + fmt(worst_pde) + at(pde_where) + ", g1 " + fmt(worst_g1)
                 + at(g1_where) + ", g2 " + fmt(worst_g2) + at(g2_where);
    res.seconds = elapsed(start);
    return res;
}

std::vector<CheckResult> run_checks(std::uint64_t seed)
{
    return {check_derivatives(seed), check_geometry(seed), check_manufactured(seed)};
}

}  // namespace ddpinn::verify
