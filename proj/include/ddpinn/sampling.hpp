#pragma once

#include "ddpinn/common.hpp"
#include "ddpinn/problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

namespace ddpinn {

//! Offset added to the sampling seed for validation clouds.
inline constexpr std::uint64_t kValidationSeedOffset = 1000000;
//! Validation clouds hold this many times the training interior count.
inline constexpr std::size_t kValidationMultiplier = 4;
//! Number of structured time slices t_k = k T / 10 for space-time data.
inline constexpr int kTimeSlices = 10;

//! Points as columns (input_dim rows: space, then time for parabolic
//! problems) with the region each point is routed to.
struct PointSet
{
    Mat points;
    std::vector<Region> regions;

    Eigen::Index size() const { return points.cols(); }
};

struct CollocationCounts
{
    std::size_t interior = 0;
    std::size_t boundary = 0;
    std::size_t interface = 0;
    std::size_t initial = 0;  //!< Parabolic only
};

struct CollocationSet
{
    Mat interior1;
    Mat interior2;
    PointSet boundary;
    Mat interface;
    PointSet initial;  //!< Empty for elliptic problems
    std::uint64_t seed = 0;
    SamplingStrategy strategy = SamplingStrategy::LatinHypercube;
};

//! Independent stream seed derived from a base seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

//! Interior points split into (Omega1, Omega2). For parabolic problems the
//! points carry a time row drawn from (0, T] and are classified at their
//! own time.
std::pair<Mat, Mat> sample_interior(const ProblemSpec& problem, std::size_t m_total,
                                    SamplingStrategy strategy, std::uint64_t seed);

//! Same as above with an explicit split policy.
std::pair<Mat, Mat> sample_interior(const ProblemSpec& problem, std::size_t m_total,
                                    SamplingStrategy strategy, std::uint64_t seed,
                                    InteriorSplit split);

PointSet sample_boundary(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                         std::uint64_t seed);

Mat sample_interface_points(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                            std::uint64_t seed);

//! Initial-time points (t = 0 exactly).
PointSet sample_initial(const ProblemSpec& problem, std::size_t m, SamplingStrategy strategy,
                        std::uint64_t seed);

CollocationSet sample_spacetime(const ProblemSpec& problem, std::size_t m_interior,
                                std::size_t m_boundary, std::size_t m_interface,
                                std::size_t m_initial, SamplingStrategy strategy,
                                std::uint64_t seed);

//! Dispatches on the problem type; elliptic problems ignore counts.initial.
CollocationSet sample_collocation(const ProblemSpec& problem, const CollocationCounts& counts,
                                  SamplingStrategy strategy, std::uint64_t seed);

//! Validation cloud: kValidationMultiplier x m_interior points drawn with
//! seed + kValidationSeedOffset, split by geometry.
PointSet validation_set(const ProblemSpec& problem, std::size_t m_interior,
                        SamplingStrategy strategy, std::uint64_t seed);

//! CSV with columns x1..xd[,t],set_tag,region.
void write_csv(const CollocationSet& set, const ProblemSpec& problem, std::ostream& os);

const char* region_name(Region region);
const char* strategy_name(SamplingStrategy strategy);
SamplingStrategy parse_strategy(const std::string& text);

}  // namespace ddpinn
