#pragma once

#include "ddpinn/autodiff.hpp"
#include "ddpinn/common.hpp"
#include "ddpinn/network.hpp"
#include "ddpinn/problems.hpp"
#include "ddpinn/sampling.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddpinn {

//! Whether omega(x) is a constant or is differentiated in input jets.
enum class OmegaMode { Frozen, Differentiated };

struct LossWeights
{
    double pde1 = 1;
    double pde2 = 1;
    double bc1 = 1;
    double bc2 = 1;
    double init = 1;
    double gamma1 = 1;  //!< Solution jump
    double gamma2 = 1;  //!< Flux jump

    void validate() const;
};

//! Unweighted mean-square loss terms.
struct LossComponents
{
    double pde1 = 0;
    double pde2 = 0;
    double bc1 = 0;
    double bc2 = 0;
    double ifc_jump = 0;
    double ifc_flux = 0;
    double init = 0;

    double bc() const { return bc1 + bc2; }
    double total(const LossWeights& w) const;
};

//! Per-point omega2 jets for a batch evaluated by network `region`.
WeightJet interface_weights(const ProblemSpec& problem, const Mat& inputs, Region region,
                            const JetSpec& spec, double rate, OmegaMode mode);

/*!
 * Composite training loss of one problem over a fixed collocation set.
 *
 * Boundary and initial terms route each point to the network of its region.
 * Elliptic boundary terms are normalized per region; parabolic boundary and
 * initial terms are single averages over all their points, split into the
 * two per-network parts.
 */
class ProblemLoss : public CompositeLoss
{
  public:
    ProblemLoss(const ProblemSpec& problem, const CollocationSet& colloc,
                const LossWeights& weights, const Architecture& arch, OmegaMode omega_mode);

    const std::vector<JetRequest>& requests() const override { return requests_; }
    double evaluate(const std::vector<JetBatch>& jets, std::vector<JetAdjoint>& adjoints) override;

    //! Components from the last evaluate().
    const LossComponents& components() const { return components_; }
    const LossWeights& weights() const { return weights_; }
    void set_weights(const LossWeights& w);

  private:
    enum Kind { kPde, kBoundary, kInterface, kInitial };
    struct Batch
    {
        Kind kind;
        int network;
        Mat inputs;
        WeightJet omega;
        Vec target;  // f, g_D or g0
        double norm = 1;
    };

    void add(Kind kind, int network, Mat inputs, Vec target, double norm, const JetSpec& spec);

    const ProblemSpec& problem_;
    LossWeights weights_;
    Architecture arch_;
    OmegaMode omega_mode_;
    std::vector<Batch> batches_;
    std::vector<JetRequest> requests_;
    Mat normals_;  // dim x M_Gamma
    Vec g1_;
    Vec g2_;
    int ifc_index_[2] = {-1, -1};
    LossComponents components_;
};

//! Relative L2 error of the two-network solution over fixed evaluation points.
class Validator
{
  public:
    Validator(const ProblemSpec& problem, const PointSet& points, const Architecture& arch);
    double relative_l2(const NetworkParams& p1, const NetworkParams& p2);

  private:
    Mat inputs_[2];
    WeightJet omega_[2];
    Vec exact_[2];
    double norm_ = 0;
    JetTape tape_;
    JetBatch out_;
};

double relative_l2(const NetworkParams& p1, const NetworkParams& p2, const ProblemSpec& problem,
                   const PointSet& eval_points);

struct AdamState
{
    Vec m;
    Vec v;
    long step = 0;
};

struct AdamSettings
{
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

//! One bias-corrected Adam update of theta.
void adam_step(AdamState& state, Vec& theta, const Vec& grad, const AdamSettings& settings);

struct TrainConfig
{
    std::string problem = "line2d";
    CollocationCounts counts{400, 80, 50, 0};
    std::optional<SamplingStrategy> strategy;  //!< Problem default when empty
    std::uint64_t sample_seed = 0;
    std::uint64_t init_seed = 0;
    std::uint64_t validation_seed = 0;
    std::vector<int> hidden{50, 50, 50};
    ActivationMode mode = ActivationMode::MultiActivation;
    //! Frozen weights train the wrong residual where a region has no outer
    //! Dirichlet data; see README.
    OmegaMode omega_mode = OmegaMode::Differentiated;
    double gauss_gamma = 1.0;
    double weight_rate = 10.0;
    //! Without it the net is even in its input on the interface.
    bool gauss_bias = true;
    bool normalize_inputs = true;
    LossWeights weights;
    long steps = 20000;
    AdamSettings adam;
    long log_every = 100;
    std::string output_dir = "out";

    //! Throws ConfigError when inconsistent with the problem catalog.
    void validate() const;
    //! Interior counts default M0 = m_interior / 4 for parabolic problems.
    CollocationCounts effective_counts() const;
    SamplingStrategy effective_strategy() const;
};

//! Network architecture implied by a config (input map from the domain box).
Architecture make_architecture(const TrainConfig& config, const ProblemSpec& problem);

struct LogRow
{
    long step = 0;
    LossComponents components;
    double total = 0;
    double val_rel_l2 = 0;
};

struct TrainRecord
{
    TrainConfig config;
    std::vector<LogRow> rows;
    NetworkParams net1;
    NetworkParams net2;
    double wall_clock_s = 0;
    std::size_t m_interior1 = 0;
    std::size_t m_interior2 = 0;
    std::size_t m_boundary = 0;
    std::size_t m_interface = 0;
    std::size_t m_initial = 0;
    std::size_t m_validation = 0;

    double final_val_rel_l2() const { return rows.empty() ? 0 : rows.back().val_rel_l2; }
};

using ProgressFn = std::function<void(const LogRow&)>;

//! Full-batch Adam on a fixed collocation set. Rows are logged at step 0,
//! every log_every steps and at the final step.
TrainRecord train(const TrainConfig& config, const ProgressFn& progress = {});

//! Header: step,total,pde1,pde2,bc,ifc_jump,ifc_flux,init,val_rel_l2
void write_metrics_csv(const TrainRecord& record, std::ostream& os);

//! key=value summary: final metrics, wall clock, counts and config echo.
void write_summary(const TrainRecord& record, std::ostream& os);

}  // namespace ddpinn
