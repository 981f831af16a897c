#pragma once

//! Independent oracles (brute-force geometry, finite-difference stencils)
//! and the self-check suites behind `ddpinn check`.

#include "ddpinn/problems.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ddpinn::verify {

using ScalarField = std::function<double(const Vec&)>;
using PlaneCurve = std::function<Eigen::Vector2d(double)>;

//---------------------------------------------------------------------------//
// Finite-difference stencils
//---------------------------------------------------------------------------//

double central_first(const ScalarField& f, const Vec& x, int axis, double h);
double central_second(const ScalarField& f, const Vec& x, int axis, double h);

//! One Richardson step on the central stencils: (4 D(h/2) - D(h)) / 3.
double richardson_first(const ScalarField& f, const Vec& x, int axis, double h);
double richardson_second(const ScalarField& f, const Vec& x, int axis, double h);

//! Sum of richardson_second over the first `axes` coordinates.
double richardson_laplacian(const ScalarField& f, const Vec& x, int axes, double h);

//---------------------------------------------------------------------------//
// Brute-force distance oracles
//---------------------------------------------------------------------------//

/*!
 * Distance from x to a closed curve parametrized on [0, 2 pi): a dense
 * sweep of `samples` parameters followed by golden-section refinement of
 * every sampled local minimum that could still beat the best sample.
 */
double curve_distance(const PlaneCurve& curve, const Eigen::Vector2d& x, int samples = 200000);

//! Dense (theta, phi) sweep plus pattern-search refinement.
double ellipsoid3_distance(const Eigen::Vector3d& center, const Eigen::Vector3d& axes,
                           const Eigen::Vector3d& x, int samples = 1000);

/*!
 * Interface curve of a cataloged 2D problem at time t, written out from the
 * closed-form definitions independently of the geometry module.
 */
PlaneCurve catalog_curve(const std::string& problem, double t);

//---------------------------------------------------------------------------//
// Self-check suites
//---------------------------------------------------------------------------//

struct CheckResult
{
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

//! Jets of random networks against Richardson finite differences, and
//! loss gradients against per-parameter finite differences.
CheckResult check_derivatives(std::uint64_t seed, int networks = 50, int points = 20);

//! distance() for ellipse, sunflower, flower and star against curve_distance.
CheckResult check_geometry(std::uint64_t seed, int points = 100);

//! PDE residuals of the exact solutions and jump-data identities.
CheckResult check_manufactured(std::uint64_t seed, int points = 200);

std::vector<CheckResult> run_checks(std::uint64_t seed);

}  // namespace ddpinn::verify
