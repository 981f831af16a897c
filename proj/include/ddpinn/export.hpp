#pragma once

#include "ddpinn/checkpoint.hpp"
#include "ddpinn/problems.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace ddpinn {

//! Anything that can be evaluated per region, e.g. trained networks or the
//! exact solution.
class SolutionModel
{
  public:
    virtual ~SolutionModel() = default;
    virtual double value(Region region, const Vec& x, double t) const = 0;
};

class NetworkModel : public SolutionModel
{
  public:
    NetworkModel(const ProblemSpec& problem, const NetworkParams& net1, const NetworkParams& net2);
    double value(Region region, const Vec& x, double t) const override;

  private:
    const ProblemSpec& problem_;
    const NetworkParams& net1_;
    const NetworkParams& net2_;
};

class ExactModel : public SolutionModel
{
  public:
    explicit ExactModel(const ProblemSpec& problem) : problem_(problem) {}
    double value(Region region, const Vec& x, double t) const override;

  private:
    const ProblemSpec& problem_;
};

/*!
 * Plane sampled by export_grid. For d > 2 the two plane axes vary and the
 * other coordinates are taken from `anchor` (default: the domain center).
 */
struct GridSpec
{
    int resolution = 101;
    std::optional<double> t;
    int axis_u = 0;
    int axis_v = 1;
    std::optional<Vec> anchor;
};

/*!
 * CSV over a resolution x resolution node grid spanning the bounding box
 * of the plane. Columns: <u axis>,<v axis>[,t],region,u_exact,u_nn,abs_err.
 * Nodes within the on-interface tolerance of Gamma, or outside a curved
 * domain, are omitted. Returns the number of rows written.
 */
std::size_t export_grid(const ProblemSpec& problem, const SolutionModel& model,
                        const GridSpec& grid, std::ostream& os);

//! Checks that a checkpoint can evaluate the problem (throws ConfigError).
void check_compatible(const Checkpoint& ckpt, const ProblemSpec& problem);

std::string axis_name(int axis);

}  // namespace ddpinn
