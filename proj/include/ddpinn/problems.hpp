#pragma once

#include "ddpinn/common.hpp"
#include "ddpinn/geometry.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ddpinn {

enum class SamplingStrategy { Grid, LatinHypercube };

//! How the requested interior count is divided between the two regions.
//! ByGeometry keeps whatever the candidates fall into; Balanced draws half
//! from each region (needed when one region is a vanishing volume fraction).
enum class InteriorSplit { ByGeometry, Balanced };

using ScalarField = std::function<double(const Vec& x, double t)>;

//! Closed-form exact solution on one region with its spatial derivatives.
struct ExactField
{
    ScalarField value;
    std::function<Vec(const Vec& x, double t)> gradient;
    ScalarField laplacian;
    ScalarField time_derivative;  //!< Zero for elliptic problems
};

//! Interior/boundary/interface collocation counts.
struct CountTriple
{
    std::size_t interior = 0;
    std::size_t boundary = 0;
    std::size_t interface = 0;
};

/*!
 * One manufactured interface problem:
 *
 *   -beta_i lap u_i = f_i            (elliptic)
 *   d_t u_i - beta_i lap u_i = f_i   (parabolic)
 *
 * with [u] = g1 and [beta grad u . n] = g2 on Gamma, n pointing from
 * Omega1 into Omega2.
 */
struct ProblemSpec
{
    std::string name;
    std::string description;
    int dim = 2;
    bool parabolic = false;
    double horizon = 0;
    Domain domain;
    InterfaceShape interface;
    Omega1Side omega1_side = Omega1Side::Inside;
    double beta1 = 1;
    double beta2 = 1;
    ExactField u1;
    ExactField u2;
    ScalarField f1;
    ScalarField f2;
    SamplingStrategy default_strategy = SamplingStrategy::LatinHypercube;
    InteriorSplit interior_split = InteriorSplit::ByGeometry;
    std::vector<CountTriple> reference_counts;

    //! Network input dimension: spatial dimension, plus one for time.
    int input_dim() const { return dim + (parabolic ? 1 : 0); }
    double beta(Region region) const;
    const ExactField& field(Region region) const;
};

//! All cataloged problems, in a fixed order.
const std::vector<ProblemSpec>& catalog();

//! Lookup by name; throws ConfigError listing the valid names.
const ProblemSpec& find_problem(const std::string& name);

std::vector<std::string> problem_names();

//! Region of a point at time t (throws for t outside a moving horizon).
Region region_of(const ProblemSpec& problem, const Vec& x, double t = 0);

//! Exact solution of `region` at x. Rejects points that classify into the
//! other region (points on Gamma are accepted for either).
double exact(const ProblemSpec& problem, Region region, const Vec& x, double t = 0);

//! Exact solution routed by the point's own region; points on Gamma use
//! Omega2.
double exact_routed(const ProblemSpec& problem, const Vec& x, double t = 0);

double source(const ProblemSpec& problem, Region region, const Vec& x, double t = 0);

//! Unit normal from Omega1 into Omega2 at p on Gamma(t).
Vec interface_normal(const ProblemSpec& problem, const Vec& p, double t = 0);

//! (g1, g2) at p on Gamma(t). Rejects points farther than the on-interface
//! tolerance.
std::pair<double, double> jump_data(const ProblemSpec& problem, const Vec& p, double t = 0);

//! Region whose network owns a boundary point (the region whose closure
//! contains it; ties go to Omega2).
Region boundary_region(const ProblemSpec& problem, const Vec& x, double t = 0);

//! Dirichlet data g_D: the owning region's exact solution.
double boundary_value(const ProblemSpec& problem, const Vec& x, double t = 0);

//! Initial data g0 at t = 0 (parabolic only).
double initial_value(const ProblemSpec& problem, const Vec& x);

//! Human-readable metadata block for one problem.
std::string describe(const ProblemSpec& problem);

}  // namespace ddpinn
