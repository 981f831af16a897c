#include "ddpinn/lattice.hpp"
#include "ddpinn/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ddpinn;

TEST_CASE("cell-centered grid in 1D")
{
    Mat g = cell_centered_grid(Vec::Zero(1), Vec::Ones(1), 2);
    REQUIRE(g.cols() == 2);
    CHECK(g(0, 0) == 0.25);
    CHECK(g(0, 1) == 0.75);
}

TEST_CASE("latin hypercube has one point per stratum")
{
    std::mt19937_64 rng(0);
    const std::size_t m = 2000;
    Mat p = latin_hypercube(Vec::Zero(10), Vec::Ones(10), m, rng);
    REQUIRE(p.cols() == static_cast<Eigen::Index>(m));
    for (int a = 0; a < 10; ++a) {
        std::vector<double> c;
        for (Eigen::Index j = 0; j < p.cols(); ++j)
            c.push_back(p(a, j));
        std::sort(c.begin(), c.end());
        for (std::size_t k = 0; k < m; ++k) {
            CHECK(c[k] >= static_cast<double>(k) / m);
            CHECK(c[k] < static_cast<double>(k + 1) / m);
        }
    }
}

TEST_CASE("grid interior split on the straight interface")
{
    const ProblemSpec& p = find_problem("line2d");
    auto [in1, in2] = sample_interior(p, 1600, SamplingStrategy::Grid, 0);
    CHECK(in1.cols() == 800);
    CHECK(in2.cols() == 800);
    CHECK((in1.row(0).array() > 0).all());
    CHECK((in2.row(0).array() < 0).all());
}

TEST_CASE("grid boundary samples on the square")
{
    const ProblemSpec& p = find_problem("line2d");
    PointSet b = sample_boundary(p, 160, SamplingStrategy::Grid, 0);
    REQUIRE(b.size() == 160);
    int faces[4] = {0, 0, 0, 0};
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        const double x = b.points(0, j), y = b.points(1, j);
        faces[0] += x == -1.0;
        faces[1] += x == 1.0;
        faces[2] += y == -1.0;
        faces[3] += y == 1.0;
        const auto k = static_cast<std::size_t>(j);
        if (x > 0)
            CHECK(b.regions[k] == Region::Omega1);
        if (x < 0)
            CHECK(b.regions[k] == Region::Omega2);
    }
    for (int f : faces)
        CHECK(f == 40);
}

TEST_CASE("space-time interface points follow the moving interface")
{
    const ProblemSpec& fixed = find_problem("fixed_circle");
    CollocationSet s = sample_spacetime(fixed, 200, 40, 100, 40, SamplingStrategy::LatinHypercube, 1);
    REQUIRE(s.interface.cols() == 100);
    for (Eigen::Index j = 0; j < s.interface.cols(); ++j) {
        const double dx = s.interface(0, j) - 1.5, dy = s.interface(1, j) - 1.5;
        CHECK(std::abs(dx * dx + dy * dy - 1) < 1e-12);
    }
    REQUIRE(s.initial.size() == 40);
    CHECK((s.initial.points.row(2).array() == 0.0).all());

    const ProblemSpec& moving = find_problem("moving_circle");
    Mat q = sample_interface_points(moving, 100, SamplingStrategy::LatinHypercube, 2);
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        const double t = q(2, j);
        const double dx = q(0, j) - 1.2 - t, dy = q(1, j) - 1.2 - t;
        CHECK(std::abs(dx * dx + dy * dy - 1) < 1e-12);
    }
}

TEST_CASE("sampling is deterministic in the seed")
{
    const ProblemSpec& p = find_problem("sunflower2d");
    CollocationCounts c{300, 40, 30, 0};
    CollocationSet a = sample_collocation(p, c, SamplingStrategy::LatinHypercube, 11);
    CollocationSet b = sample_collocation(p, c, SamplingStrategy::LatinHypercube, 11);
    CHECK(a.interior1 == b.interior1);
    CHECK(a.interior2 == b.interior2);
    CHECK(a.interface == b.interface);
    CHECK(a.boundary.points == b.boundary.points);
}

TEST_CASE("validation cloud size and routing")
{
    const ProblemSpec& p = find_problem("ellipse2d");
    PointSet v = validation_set(p, 100, SamplingStrategy::LatinHypercube, 0);
    CHECK(v.size() == 400);
    for (Eigen::Index j = 0; j < v.size(); ++j)
        CHECK(v.regions[static_cast<std::size_t>(j)] == region_of(p, v.points.col(j)));
}
