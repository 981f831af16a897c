#include "ddpinn/problems.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace ddpinn {

namespace {

constexpr double kPi = std::numbers::pi;

Vec filled(int dim, double v)
{
    return Vec::Constant(dim, v);
}

ExactField scaled(ExactField f, double c)
{
    return {
        [v = f.value, c](const Vec& x, double t) { return c * v(x, t); },
        [g = f.gradient, c](const Vec& x, double t) { return Vec(c * g(x, t)); },
        [l = f.laplacian, c](const Vec& x, double t) { return c * l(x, t); },
        [d = f.time_derivative, c](const Vec& x, double t) { return c * d(x, t); },
    };
}

//! f(x) * e^t; the time derivative equals the value.
ExactField times_exp_t(ExactField f)
{
    auto v = f.value;
    return {
        [v](const Vec& x, double t) { return std::exp(t) * v(x, t); },
        [g = f.gradient](const Vec& x, double t) { return Vec(std::exp(t) * g(x, t)); },
        [l = f.laplacian](const Vec& x, double t) { return std::exp(t) * l(x, t); },
        [v](const Vec& x, double t) { return std::exp(t) * v(x, t); },
    };
}

double zero_field(const Vec&, double)
{
    return 0.0;
}

//! exp(x_1 + ... + x_d)
ExactField exp_sum()
{
    return {
        [](const Vec& x, double) { return std::exp(x.sum()); },
        [](const Vec& x, double) { return filled(static_cast<int>(x.size()), std::exp(x.sum())); },
        [](const Vec& x, double) { return static_cast<double>(x.size()) * std::exp(x.sum()); },
        zero_field,
    };
}

//! sin(x_1) ... sin(x_d)
ExactField sin_product()
{
    return {
        [](const Vec& x, double) { return x.array().sin().prod(); },
        [](const Vec& x, double) {
            Vec g(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                double p = std::cos(x[i]);
                for (Eigen::Index j = 0; j < x.size(); ++j)
                    if (j != i)
                        p *= std::sin(x[j]);
                g[i] = p;
            }
            return g;
        },
        [](const Vec& x, double) {
            return -static_cast<double>(x.size()) * x.array().sin().prod();
        },
        zero_field,
    };
}

//! c * sin(2 pi x) sin(2 pi y) + k
ExactField line_field(double c, double k)
{
    const double w = 2 * kPi;
    return {
        [=](const Vec& x, double) { return c * std::sin(w * x[0]) * std::sin(w * x[1]) + k; },
        [=](const Vec& x, double) {
            Vec g(2);
            g << c * w * std::cos(w * x[0]) * std::sin(w * x[1]),
                c * w * std::sin(w * x[0]) * std::cos(w * x[1]);
            return g;
        },
        [=](const Vec& x, double) {
            return -2 * w * w * c * std::sin(w * x[0]) * std::sin(w * x[1]);
        },
        zero_field,
    };
}

Vec zero_vec(int dim)
{
    return Vec::Zero(dim);
}

Vec unit_box(int dim, double v)
{
    return filled(dim, v);
}

ProblemSpec line2d()
{
    Vec lo = unit_box(2, -1);
    Vec hi = unit_box(2, 1);
    const double b1 = -1;
    const double b2 = 1;
    // u1 = -s - 1, u2 = s + 1 with s = sin(2 pi x) sin(2 pi y), lap s = -8 pi^2 s.
    return ProblemSpec{
        .name = "line2d",
        .description = "straight interface x=0 in [-1,1]^2, beta = (-1, 1)",
        .dim = 2,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(BoxDomain{lo, hi}),
        .interface = InterfaceShape(Hyperplane{0, 0.0, lo, hi}),
        .omega1_side = Omega1Side::PositiveHalf,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = line_field(-1, -1),
        .u2 = line_field(1, 1),
        .f1 = [](const Vec& x, double) {
            return 8 * kPi * kPi * std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
        },
        .f2 = [](const Vec& x, double) {
            return 8 * kPi * kPi * std::sin(2 * kPi * x[0]) * std::sin(2 * kPi * x[1]);
        },
        .default_strategy = SamplingStrategy::Grid,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{100, 40, 25}, {400, 80, 50}, {1600, 160, 100}},
    };
}

ProblemSpec sunflower2d()
{
    const double b1 = 1;
    const double b2 = 10;
    const double c = 0.02 * std::sqrt(5.0);
    PolarCurve curve{{c, c}, 0.4, 0.2, 20, Harmonic::Sin, 0.0};
    // Radial solutions about the origin: u1 = r^2/b1, u2 = (r^4 - 0.1 ln 2r)/b2.
    ExactField u1{
        [=](const Vec& x, double) { return x.squaredNorm() / b1; },
        [=](const Vec& x, double) { return Vec(2 * x / b1); },
        [=](const Vec&, double) { return 4 / b1; },
        zero_field,
    };
    ExactField u2{
        [=](const Vec& x, double) {
            double r2 = x.squaredNorm();
            return (r2 * r2 - 0.1 * std::log(2 * std::sqrt(r2))) / b2;
        },
        [=](const Vec& x, double) {
            double r2 = x.squaredNorm();
            return Vec((4 * r2 - 0.1 / r2) * x / b2);
        },
        [=](const Vec& x, double) { return 16 * x.squaredNorm() / b2; },
        zero_field,
    };
    return ProblemSpec{
        .name = "sunflower2d",
        .description = "20-petal sunflower interface in [-1,1]^2, beta = (1, 10)",
        .dim = 2,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(BoxDomain{unit_box(2, -1), unit_box(2, 1)}),
        .interface = InterfaceShape(curve),
        .omega1_side = Omega1Side::Inside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = u1,
        .u2 = u2,
        .f1 = [](const Vec&, double) { return -4.0; },
        .f2 = [](const Vec& x, double) { return -16 * x.squaredNorm(); },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{100, 40, 25}, {400, 80, 50}, {1600, 160, 100}},
    };
}

ProblemSpec ellipse2d()
{
    const double b1 = 1e-3;
    const double b2 = 1;
    Vec axes(2);
    axes << 0.2, 0.5;
    return ProblemSpec{
        .name = "ellipse2d",
        .description = "ellipse (0.2, 0.5) interface in [-1,1]^2, beta = (1e-3, 1)",
        .dim = 2,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(BoxDomain{unit_box(2, -1), unit_box(2, 1)}),
        .interface = InterfaceShape(Ellipsoid{zero_vec(2), axes}),
        .omega1_side = Omega1Side::Inside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = exp_sum(),
        .u2 = sin_product(),
        .f1 = [=](const Vec& x, double) { return -2 * b1 * std::exp(x.sum()); },
        .f2 = [=](const Vec& x, double) { return 2 * b2 * std::sin(x[0]) * std::sin(x[1]); },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{100, 40, 25}, {400, 80, 50}, {1600, 160, 100}},
    };
}

ProblemSpec flower2d()
{
    const double b1 = 1;
    const double b2 = 10;
    PolarCurve outer{{0, 0}, 1.0, -0.3, 5, Harmonic::Cos, 0.0};
    PolarCurve inner{{0, 0}, 0.4, -0.2, 5, Harmonic::Cos, 0.0};
    return ProblemSpec{
        .name = "flower2d",
        .description = "flower interface inside a flower-shaped domain, beta = (1, 10)",
        .dim = 2,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(PolarDomain{outer}),
        .interface = InterfaceShape(inner),
        .omega1_side = Omega1Side::Inside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = exp_sum(),
        .u2 = sin_product(),
        .f1 = [=](const Vec& x, double) { return -2 * b1 * std::exp(x.sum()); },
        .f2 = [=](const Vec& x, double) { return 2 * b2 * std::sin(x[0]) * std::sin(x[1]); },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{100, 40, 25}, {400, 80, 50}, {1600, 160, 100}},
    };
}

ProblemSpec ellipsoid3d()
{
    const double b1 = 1e-3;
    const double b2 = 1;
    Vec axes(3);
    axes << 0.7, 0.5, 0.3;
    return ProblemSpec{
        .name = "ellipsoid3d",
        .description = "ellipsoid (0.7, 0.5, 0.3) interface in [-1,1]^3, beta = (1e-3, 1)",
        .dim = 3,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(BoxDomain{unit_box(3, -1), unit_box(3, 1)}),
        .interface = InterfaceShape(Ellipsoid{zero_vec(3), axes}),
        .omega1_side = Omega1Side::Inside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = exp_sum(),
        .u2 = sin_product(),
        .f1 = [=](const Vec& x, double) { return -3 * b1 * std::exp(x.sum()); },
        .f2 = [=](const Vec& x, double) { return 3 * b2 * x.array().sin().prod(); },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{125, 50, 30}, {1000, 100, 60}, {8000, 150, 120}},
    };
}

ProblemSpec hypersphere10d()
{
    const double b1 = 1e-3;
    const double b2 = 1;
    return ProblemSpec{
        .name = "hypersphere10d",
        .description = "sphere of radius 0.5 in [-1,1]^10, beta = (1e-3, 1)",
        .dim = 10,
        .parabolic = false,
        .horizon = 0,
        .domain = Domain(BoxDomain{unit_box(10, -1), unit_box(10, 1)}),
        .interface = InterfaceShape(Sphere{zero_vec(10), 0.5}),
        .omega1_side = Omega1Side::Inside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = exp_sum(),
        .u2 = sin_product(),
        .f1 = [=](const Vec& x, double) { return -10 * b1 * std::exp(x.sum()); },
        .f2 = [=](const Vec& x, double) { return 10 * b2 * x.array().sin().prod(); },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::Balanced,
        .reference_counts = {{2000, 100, 50}, {4000, 200, 100}, {8000, 400, 200}},
    };
}

//! Shared data of the parabolic family: u1 = 0.01 e^t e^(x+y) outside,
//! u2 = e^t sin x sin y inside, beta = (1, 10), domain [0,3.5]^2 x [0,1].
ProblemSpec parabolic(std::string name, std::string description, InterfaceShape interface)
{
    const double b1 = 1;
    const double b2 = 10;
    ExactField u1 = scaled(times_exp_t(exp_sum()), 0.01);
    ExactField u2 = times_exp_t(sin_product());
    return ProblemSpec{
        .name = std::move(name),
        .description = std::move(description),
        .dim = 2,
        .parabolic = true,
        .horizon = 1.0,
        .domain = Domain(BoxDomain{unit_box(2, 0), unit_box(2, 3.5)}),
        .interface = std::move(interface),
        .omega1_side = Omega1Side::Outside,
        .beta1 = b1,
        .beta2 = b2,
        .u1 = u1,
        .u2 = u2,
        .f1 = [=](const Vec& x, double t) { return 0.01 * std::exp(t + x.sum()) * (1 - 2 * b1); },
        .f2 = [=](const Vec& x, double t) {
            return std::exp(t) * std::sin(x[0]) * std::sin(x[1]) * (1 + 2 * b2);
        },
        .default_strategy = SamplingStrategy::LatinHypercube,
        .interior_split = InteriorSplit::ByGeometry,
        .reference_counts = {{200, 20, 20}, {400, 40, 40}, {1000, 100, 100}},
    };
}

Vec vec2(double a, double b)
{
    Vec v(2);
    v << a, b;
    return v;
}

std::vector<ProblemSpec> build_catalog()
{
    std::vector<ProblemSpec> all;
    all.push_back(line2d());
    all.push_back(sunflower2d());
    all.push_back(ellipse2d());
    all.push_back(flower2d());
    all.push_back(ellipsoid3d());
    all.push_back(hypersphere10d());

    all.push_back(parabolic("fixed_circle", "static unit circle centered at (1.5, 1.5)",
                            InterfaceShape(Sphere{vec2(1.5, 1.5), 1.0})));
    all.push_back(parabolic("moving_circle", "unit circle translating from (1.2, 1.2) with velocity (1, 1)",
                            InterfaceShape(Sphere{vec2(1.2, 1.2), 1.0}, Translate{vec2(1, 1)}, 1.0)));
    all.push_back(parabolic(
        "deforming_ellipse", "translating ellipse with a^2 = 1 + 0.1t, b^2 = 1 - 0.1t",
        InterfaceShape(Ellipsoid{vec2(1.2, 1.2), vec2(1, 1)},
                       TranslateAndDeform{vec2(0.8, 0.8), vec2(0.1, -0.1)}, 1.0)));
    all.push_back(parabolic(
        "deforming_star",
        "five-lobed star r = 1 - 0.3t cos(5 theta), rotating by 2 pi t and translating",
        InterfaceShape(PolarCurve{{1.2, 1.2}, 1.0, 0.0, 5, Harmonic::Cos, 0.0},
                       TranslateRotateDeform{vec2(0.8, 0.8), 2 * kPi, -0.3}, 1.0)));
    return all;
}

}  // namespace

double ProblemSpec::beta(Region region) const
{
    if (region == Region::OnInterface)
        throw std::invalid_argument("beta is two-valued on the interface");
    return region == Region::Omega1 ? beta1 : beta2;
}

const ExactField& ProblemSpec::field(Region region) const
{
    if (region == Region::OnInterface)
        throw std::invalid_argument("exact field is two-valued on the interface");
    return region == Region::Omega1 ? u1 : u2;
}

const std::vector<ProblemSpec>& catalog()
{
    static const std::vector<ProblemSpec> all = build_catalog();
    return all;
}

std::vector<std::string> problem_names()
{
    std::vector<std::string> names;
    for (const auto& p : catalog())
        names.push_back(p.name);
    return names;
}

const ProblemSpec& find_problem(const std::string& name)
{
    for (const auto& p : catalog())
        if (p.name == name)
            return p;
    std::string msg = "unknown problem '" + name + "'; valid names:";
    for (const auto& n : problem_names())
        msg += " " + n;
    throw ConfigError(msg);
}

Region region_of(const ProblemSpec& problem, const Vec& x, double t)
{
    return classify(problem.interface, x, t, problem.omega1_side);
}

double exact(const ProblemSpec& problem, Region region, const Vec& x, double t)
{
    if (region == Region::OnInterface)
        throw std::invalid_argument("exact: choose Omega1 or Omega2");
    Region actual = region_of(problem, x, t);
    if (actual != Region::OnInterface && actual != region)
        throw std::invalid_argument("exact: point does not lie in the requested region");
    return problem.field(region).value(x, t);
}

double exact_routed(const ProblemSpec& problem, const Vec& x, double t)
{
    Region r = region_of(problem, x, t);
    if (r == Region::OnInterface)
        r = Region::Omega2;
    return problem.field(r).value(x, t);
}

double source(const ProblemSpec& problem, Region region, const Vec& x, double t)
{
    if (region == Region::OnInterface)
        throw std::invalid_argument("source: choose Omega1 or Omega2");
    return region == Region::Omega1 ? problem.f1(x, t) : problem.f2(x, t);
}

Vec interface_normal(const ProblemSpec& problem, const Vec& p, double t)
{
    return normal(problem.interface, p, t, problem.omega1_side);
}

std::pair<double, double> jump_data(const ProblemSpec& problem, const Vec& p, double t)
{
    Vec n = interface_normal(problem, p, t);
    double g1 = problem.u1.value(p, t) - problem.u2.value(p, t);
    double g2 = problem.beta1 * problem.u1.gradient(p, t).dot(n)
                - problem.beta2 * problem.u2.gradient(p, t).dot(n);
    return {g1, g2};
}

Region boundary_region(const ProblemSpec& problem, const Vec& x, double t)
{
    Region r = region_of(problem, x, t);
    return r == Region::OnInterface ? Region::Omega2 : r;
}

double boundary_value(const ProblemSpec& problem, const Vec& x, double t)
{
    return problem.field(boundary_region(problem, x, t)).value(x, t);
}

double initial_value(const ProblemSpec& problem, const Vec& x)
{
    if (!problem.parabolic)
        throw std::invalid_argument("initial data requested for an elliptic problem");
    return exact_routed(problem, x, 0.0);
}

std::string describe(const ProblemSpec& problem)
{
    auto side = [](Omega1Side s) {
        switch (s) {
        case Omega1Side::Inside: return "inside";
        case Omega1Side::Outside: return "outside";
        case Omega1Side::PositiveHalf: return "positive_half";
        case Omega1Side::NegativeHalf: return "negative_half";
        }
        return "?";
    };
    std::ostringstream os;
    os << std::setprecision(17);
    os << "name=" << problem.name << '\n'
       << "description=" << problem.description << '\n'
       << "dim=" << problem.dim << '\n'
       << "parabolic=" << (problem.parabolic ? "true" : "false") << '\n';
    if (problem.parabolic)
        os << "horizon=" << problem.horizon << '\n';
    os << "beta1=" << problem.beta1 << '\n'
       << "beta2=" << problem.beta2 << '\n'
       << "omega1=" << side(problem.omega1_side) << '\n'
       << "domain=" << (problem.domain.is_box() ? "box" : "polar curve") << '\n'
       << "interface_moving=" << (problem.interface.is_moving() ? "true" : "false") << '\n'
       << "default_strategy="
       << (problem.default_strategy == SamplingStrategy::Grid ? "grid" : "lhs") << '\n'
       << "reference_counts=";
    for (std::size_t i = 0; i < problem.reference_counts.size(); ++i) {
        const auto& c = problem.reference_counts[i];
        os << (i ? ";" : "") << c.interior << ',' << c.boundary << ',' << c.interface;
    }
    os << '\n';
    return os.str();
}

}  // namespace ddpinn
