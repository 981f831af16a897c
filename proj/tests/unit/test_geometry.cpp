#include "ddpinn/geometry.hpp"
#include "verify.hpp"

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

InterfaceShape plane_x0()
{
    return InterfaceShape(Hyperplane{0, 0.0, v2(-1, -1), v2(1, 1)});
}

InterfaceShape circle_15()
{
    return InterfaceShape(Sphere{v2(1.5, 1.5), 1.0});
}

}  // namespace

TEST_CASE("distance to elementary shapes")
{
    CHECK(distance(plane_x0(), v2(0.3, -0.5)) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(distance(circle_15(), v2(1.5, 1.5)) == doctest::Approx(1.0).epsilon(1e-15));

    InterfaceShape sphere10(Sphere{Vec::Zero(10), 0.5});
    CHECK(distance(sphere10, Vec::Zero(10)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ellipse distance matches the dense sweep oracle")
{
    InterfaceShape ellipse(Ellipsoid{v2(0, 0), v2(0.2, 0.5)});
    auto curve = [](double th) { return Eigen::Vector2d(0.2 * std::cos(th), 0.5 * std::sin(th)); };
    CHECK(distance(ellipse, v2(0.4, 0)) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(verify::curve_distance(curve, Eigen::Vector2d(0.4, 0)) == doctest::Approx(0.2).epsilon(1e-10));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 40; ++i) {
        Vec x = v2(u(rng), u(rng));
        CHECK(std::abs(distance(ellipse, x) - verify::curve_distance(curve, x)) < 1e-9);
    }
}

TEST_CASE("normals point from Omega1 into Omega2")
{
    Vec n = normal(circle_15(), v2(2.5, 1.5), 0, Omega1Side::Outside);
    CHECK(n[0] == doctest::Approx(-1.0));
    CHECK(std::abs(n[1]) < 1e-14);
    n = normal(circle_15(), v2(2.5, 1.5), 0, Omega1Side::Inside);
    CHECK(n[0] == doctest::Approx(1.0));

    n = normal(plane_x0(), v2(0, 0.7), 0, Omega1Side::PositiveHalf);
    CHECK(n[0] == doctest::Approx(-1.0));
    CHECK(n[1] == 0.0);
}

TEST_CASE("flower normal matches the level-set gradient")
{
    PolarCurve flower{{0.0, 0.0}, 0.4, -0.2, 5, Harmonic::Cos, 0.0};
    InterfaceShape shape(flower);
    auto level = [](const Vec& x) {
        return std::hypot(x[0], x[1]) - (0.4 - 0.2 * std::cos(5 * std::atan2(x[1], x[0])));
    };
    const double h = 1e-6;
    auto check_at = [&](double th) {
        const double r = 0.4 - 0.2 * std::cos(5 * th);
        Vec p = v2(r * std::cos(th), r * std::sin(th));
        Vec g(2);
        for (int a = 0; a < 2; ++a) {
            Vec e = Vec::Zero(2);
            e[a] = h;
            g[a] = (level(p + e) - level(p - e)) / (2 * h);
        }
        g.normalize();
        Vec n = normal(shape, p, 0, Omega1Side::Inside);
        CHECK((n - g).norm() < 1e-6);
    };
    check_at(0.0);
    check_at(0.3);
    check_at(2.1);
}

TEST_CASE("classification")
{
    CHECK(classify(circle_15(), v2(1.5, 1.5), 0, Omega1Side::Outside) == Region::Omega2);
    CHECK(classify(plane_x0(), v2(0.5, 0), 0, Omega1Side::PositiveHalf) == Region::Omega1);
    InterfaceShape ellipse(Ellipsoid{v2(0, 0), v2(0.2, 0.5)});
    CHECK(classify(ellipse, v2(0.2, 0), 0, Omega1Side::Inside) == Region::OnInterface);
}

TEST_CASE("interface samples lie on the shape")
{
    Mat p = sample_interface(circle_15(), 100, 0, 1);
    REQUIRE(p.cols() == 100);
    for (Eigen::Index j = 0; j < p.cols(); ++j)
        CHECK(std::abs((p.col(j) - v2(1.5, 1.5)).squaredNorm() - 1) < 1e-12);

    InterfaceShape sphere10(Sphere{Vec::Zero(10), 0.5});
    Mat q = sample_interface(sphere10, 200, 0, 2);
    REQUIRE(q.cols() == 200);
    for (Eigen::Index j = 0; j < q.cols(); ++j)
        CHECK(std::abs(q.col(j).norm() - 0.5) < 1e-12);
}

TEST_CASE("deforming star samples satisfy the moved implicit equation")
{
    PolarCurve star{{1.2, 1.2}, 1.0, 0.0, 5, Harmonic::Cos, 0.0};
    Vec vel = v2(0.8, 0.8);
    InterfaceShape shape(star, TranslateRotateDeform{vel, 2 * std::numbers::pi, -0.3}, 1.0);
    const double t = 0.5;
    Mat p = sample_interface(shape, 64, t, 9);
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        // Back to the body frame: untranslate, unrotate, compare radii.
        const double x = p(0, j) - 1.2 - 0.8 * t;
        const double y = p(1, j) - 1.2 - 0.8 * t;
        const double th = std::atan2(y, x) - 2 * std::numbers::pi * t;
        const double r = 1.0 - 0.3 * t * std::cos(5 * th);
        CHECK(std::abs(std::hypot(x, y) - r) < 1e-8);
    }
}

TEST_CASE("ellipsoid projection lands on the surface")
{
    Ellipsoid e{Vec::Zero(3), Vec(Eigen::Vector3d(0.7, 0.5, 0.3))};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 30; ++i) {
        Vec x = Eigen::Vector3d(u(rng), u(rng), u(rng));
        EllipsoidProjection pr = project_onto_ellipsoid(e, x);
        const double level = (pr.foot.array() / e.semi_axes.array()).square().sum();
        CHECK(std::abs(level - 1) < 1e-10);
        const double oracle = verify::ellipsoid3_distance(Eigen::Vector3d::Zero(),
                                                          Eigen::Vector3d(0.7, 0.5, 0.3), x);
        CHECK(std::abs(pr.distance - oracle) < 1e-6);
    }
}
