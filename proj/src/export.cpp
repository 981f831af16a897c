#include "ddpinn/export.hpp"

#include "ddpinn/sampling.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace ddpinn {

NetworkModel::NetworkModel(const ProblemSpec& problem, const NetworkParams& net1,
                           const NetworkParams& net2)
    : problem_(problem), net1_(net1), net2_(net2)
{
}

double NetworkModel::value(Region region, const Vec& x, double t) const
{
    const NetworkParams& p = region == Region::Omega1 ? net1_ : net2_;
    return forward(p, x, t, problem_.interface);
}

double ExactModel::value(Region region, const Vec& x, double t) const
{
    return problem_.field(region).value(x, t);
}

std::string axis_name(int axis)
{
    static const char* names[] = {"x", "y", "z"};
    if (axis >= 0 && axis < 3)
        return names[axis];
    return "x" + std::to_string(axis + 1);
}

void check_compatible(const Checkpoint& ckpt, const ProblemSpec& problem)
{
    if (ckpt.net1.arch().d_in != problem.input_dim() || ckpt.net2.arch().d_in != problem.input_dim())
        throw ConfigError("checkpoint input dimension " + std::to_string(ckpt.net1.arch().d_in)
                          + " does not match problem '" + problem.name + "' ("
                          + std::to_string(problem.input_dim()) + ")");
    if (!ckpt.problem.empty() && ckpt.problem != problem.name)
        throw ConfigError("checkpoint was trained on '" + ckpt.problem + "', not '" + problem.name
                          + "'");
}

std::size_t export_grid(const ProblemSpec& problem, const SolutionModel& model,
                        const GridSpec& grid, std::ostream& os)
{
    const int dim = problem.dim;
    if (grid.resolution < 1)
        throw ConfigError("export resolution must be at least 1");
    if (grid.axis_u < 0 || grid.axis_u >= dim || grid.axis_v < 0 || grid.axis_v >= dim
        || grid.axis_u == grid.axis_v)
        throw ConfigError("slice axes must be two distinct axes below " + std::to_string(dim));
    double t = 0;
    if (problem.parabolic) {
        t = grid.t.value_or(problem.horizon);
        if (t < 0 || t > problem.horizon)
            throw ConfigError("export time outside [0, horizon]");
    }
    const auto& bb = problem.domain.bounding_box();
    Vec base = grid.anchor.value_or(Vec(0.5 * (bb.lower + bb.upper)));
    if (base.size() != dim)
        throw ConfigError("slice anchor has the wrong dimension");

    os << axis_name(grid.axis_u) << ',' << axis_name(grid.axis_v);
    if (problem.parabolic)
        os << ",t";
    os << ",region,u_exact,u_nn,abs_err\n";
    os << std::setprecision(17);

    ExactModel exact(problem);
    std::size_t rows = 0;
    const int n = grid.resolution;
    auto coord = [&](int axis, int i) {
        if (n == 1)
            return 0.5 * (bb.lower[axis] + bb.upper[axis]);
        return bb.lower[axis] + (bb.upper[axis] - bb.lower[axis]) * i / (n - 1);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Vec x = base;
            x[grid.axis_u] = coord(grid.axis_u, i);
            x[grid.axis_v] = coord(grid.axis_v, j);
            if (!problem.domain.is_box() && !problem.domain.contains(x, 0.0))
                continue;
            if (distance(problem.interface, x, t) <= kOnInterfaceTolerance)
                continue;
            Region r = region_of(problem, x, t);
            double ue = exact.value(r, x, t);
            double un = model.value(r, x, t);
            os << x[grid.axis_u] << ',' << x[grid.axis_v];
            if (problem.parabolic)
                os << ',' << t;
            os << ',' << region_name(r) << ',' << ue << ',' << un << ',' << std::abs(un - ue)
               << '\n';
            ++rows;
        }
    }
    return rows;
}

}  // namespace ddpinn
