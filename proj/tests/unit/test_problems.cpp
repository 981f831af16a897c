#include "ddpinn/problems.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ddpinn;

namespace {

Vec v2(double x, double y)
{
    Vec p(2);
    p << x, y;
    return p;
}

}  // namespace

TEST_CASE("catalog contents")
{
    const auto& c = catalog();
    REQUIRE(c.size() == 10);
    const char* names[] = {"line2d",         "sunflower2d",   "ellipse2d",
                           "flower2d",       "ellipsoid3d",   "hypersphere10d",
                           "fixed_circle",   "moving_circle", "deforming_ellipse",
                           "deforming_star"};
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(c[i].name == names[i]);
        CHECK(c[i].parabolic == (i >= 6));
    }
    CHECK(find_problem("line2d").beta1 == -1.0);
    CHECK(find_problem("line2d").beta2 == 1.0);
    CHECK(find_problem("ellipse2d").beta1 == 1e-3);
    CHECK(find_problem("ellipse2d").beta2 == 1.0);
    CHECK(find_problem("fixed_circle").beta1 == 1.0);
    CHECK(find_problem("fixed_circle").beta2 == 10.0);
    CHECK(find_problem("hypersphere10d").dim == 10);
}

TEST_CASE("unknown problem names list the valid ones")
{
    try {
        find_problem("nope");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        for (const auto& n : problem_names())
            CHECK(msg.find(n) != std::string::npos);
    }
}

TEST_CASE("exact values and sources")
{
    const double pi = std::numbers::pi;
    const ProblemSpec& line = find_problem("line2d");
    CHECK(exact(line, Region::Omega1, v2(0.25, 0.25)) == doctest::Approx(-2.0));
    CHECK(source(line, Region::Omega1, v2(0.25, 0.25)) == doctest::Approx(8 * pi * pi));
    CHECK(source(line, Region::Omega1, v2(0.25, 0.25)) == doctest::Approx(78.95683521));

    const ProblemSpec& ell = find_problem("ellipse2d");
    CHECK(exact(ell, Region::Omega1, v2(0, 0)) == doctest::Approx(1.0));
    Vec x = v2(0.05, -0.1);
    CHECK(source(ell, Region::Omega1, x) == doctest::Approx(-2e-3 * std::exp(-0.05)));

    const ProblemSpec& fc = find_problem("fixed_circle");
    CHECK(exact(fc, Region::Omega2, v2(pi / 2, pi / 2), 0) == doctest::Approx(1.0));

    const ProblemSpec& sun = find_problem("sunflower2d");
    CHECK(source(sun, Region::Omega2, v2(1, 0)) == doctest::Approx(-16.0));
    CHECK(source(sun, Region::Omega2, v2(0, -1)) == doctest::Approx(-16.0));
}

TEST_CASE("jump data")
{
    const ProblemSpec& line = find_problem("line2d");
    for (double y : {-0.9, -0.3, 0.0, 0.55}) {
        auto [g1, g2] = jump_data(line, v2(0, y));
        CHECK(g1 == doctest::Approx(-2.0));
        CHECK(std::abs(g2) < 1e-12);
    }
    const ProblemSpec& flower = find_problem("flower2d");
    CHECK(jump_data(flower, v2(0.2, 0)).first == doctest::Approx(std::exp(0.2)));
    CHECK_THROWS(jump_data(line, v2(0.1, 0)));
}

TEST_CASE("g1 is the difference of the exact solutions on Gamma")
{
    std::mt19937_64 rng(4);
    for (const auto& p : catalog()) {
        const double t = p.parabolic ? 0.5 * p.horizon : 0.0;
        Mat pts = sample_interface(p.interface, 20, t, rng());
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            Vec q = pts.col(j);
            const double g1 = jump_data(p, q, t).first;
            const double diff = p.u1.value(q, t) - p.u2.value(q, t);
            CHECK(std::abs(g1 - diff) <= 1e-12 * std::max(1.0, std::abs(diff)));
        }
    }
}

TEST_CASE("flipping the orientation negates g2")
{
    for (const char* name : {"ellipse2d", "fixed_circle"}) {
        ProblemSpec p = find_problem(name);
        ProblemSpec q = p;
        q.omega1_side = p.omega1_side == Omega1Side::Inside ? Omega1Side::Outside : Omega1Side::Inside;
        const double t = p.parabolic ? 0.3 : 0.0;
        Mat pts = sample_interface(p.interface, 16, t, 3);
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            Vec s = pts.col(j);
            CHECK(jump_data(q, s, t).second == doctest::Approx(-jump_data(p, s, t).second));
        }
    }
}

TEST_CASE("initial data equals the exact solution at t = 0")
{
    const ProblemSpec& p = find_problem("deforming_star");
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    const BoxDomain& box = p.domain.bounding_box();
    for (int i = 0; i < 50; ++i) {
        Vec x = box.lower + (box.upper - box.lower).cwiseProduct(Vec::NullaryExpr(2, [&] { return u(rng); }));
        if (region_of(p, x, 0) == Region::OnInterface)
            continue;
        CHECK(initial_value(p, x) == exact(p, region_of(p, x, 0), x, 0));
    }
}
