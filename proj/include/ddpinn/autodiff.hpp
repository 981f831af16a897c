#pragma once

#include "ddpinn/common.hpp"
#include "ddpinn/network.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace ddpinn {

/*!
 * Which input derivatives a batch carries. Directions 0..first-1 get first
 * derivatives; directions 0..second-1 (a prefix, the spatial axes) also get
 * diagonal second derivatives. Inputs are ordered space first, then time.
 */
struct JetSpec
{
    int first = 0;
    int second = 0;

    int blocks() const { return 1 + first + second; }
};

/*!
 * Per-point omega2 weights with optional input derivatives.
 *
 * With frozen weights only omega2 is used. Differentiated weights also carry
 * d omega2 / d x_k (first x N) and d^2 omega2 / d x_k^2 (second x N).
 */
struct WeightJet
{
    RowVec omega2;
    Mat d_omega2;
    Mat dd_omega2;
    bool differentiated = false;
};

//! Network output and its input derivatives for a batch of N points.
struct JetBatch
{
    RowVec value;  //!< 1 x N
    Mat first;     //!< first x N
    Mat second;    //!< second x N, diagonal second derivatives

    RowVec laplacian() const;
};

//! Adjoints (dL/d output) with the same shapes as a JetBatch.
struct JetAdjoint
{
    RowVec value;
    Mat first;
    Mat second;

    void reset(const JetSpec& spec, Eigen::Index n);
};

/*!
 * Batched second-order forward jet propagation with a hand-written reverse
 * sweep. forward() records what backward() needs; buffers are reused across
 * calls of the same shape.
 */
class JetTape
{
  public:
    //! inputs: d_in x N raw coordinates.
    void forward(const NetworkParams& params, const Mat& inputs, const JetSpec& spec,
                 const WeightJet& weights, JetBatch& out);

    //! Accumulates dL/dtheta into grad (length params.size()).
    void backward(const NetworkParams& params, const JetAdjoint& adjoint, Eigen::Ref<Vec> grad);

  private:
    struct Layer
    {
        Mat input;   // m_prev x BN
        Mat zt;      // m x BN
        Mat zg;      // m x BN
        Mat t;       // tanh branch jets, m x BN
        Mat g;       // gauss branch jets, m x BN
        Mat dt[3];   // tanh' '' ''' at the value block, m x N
        Mat dg[3];   // gauss' '' '''
    };

    void activate(const Mat& z, const Mat* d, Mat& out) const;
    void activation_adjoint(const Mat& z, const Mat* d, const Mat& abar, Mat& zbar) const;

    std::vector<Layer> layers_;
    Mat top_;  // last hidden output, m x BN
    Mat hbar_;
    Mat tbar_;
    Mat gbar_;
    Mat ztbar_;
    Mat zgbar_;
    JetSpec spec_;
    Eigen::Index n_ = 0;
    const WeightJet* weights_ = nullptr;
    bool multi_ = true;
};

//! Single-point jet.
struct Jet
{
    double value = 0;
    Vec grad;  //!< Spatial gradient
    double lap = 0;
    std::optional<double> dt;
};

/*!
 * Jet of the network at spatial point x (and time t when the network has a
 * time input), with weight derivatives if `weights` is differentiated.
 * `omega` is the (omega1, omega2) pair at the point.
 */
Jet eval_jet(const NetworkParams& params, const Vec& x, std::optional<double> t,
             std::pair<double, double> omega);
Jet eval_jet(const NetworkParams& params, const Vec& x, std::optional<double> t,
             const WeightJet& weights);

//! One forward request of a composite loss.
struct JetRequest
{
    int network = 0;  //!< 0 or 1
    const Mat* inputs = nullptr;
    JetSpec spec;
    const WeightJet* weights = nullptr;
};

//! A scalar loss built from jets of the two networks.
class CompositeLoss
{
  public:
    virtual ~CompositeLoss() = default;
    virtual const std::vector<JetRequest>& requests() const = 0;
    //! Loss value from the jets; fills one adjoint per request.
    virtual double evaluate(const std::vector<JetBatch>& jets, std::vector<JetAdjoint>& adjoints) = 0;
};

struct LossGradient
{
    double value = 0;
    Vec grad1;
    Vec grad2;
};

//! Reusable engine: holds one tape per request.
class GradientEngine
{
  public:
    LossGradient run(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2);
    double value(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2);

    //! Jets from the last run/value call.
    const std::vector<JetBatch>& jets() const { return jets_; }

  private:
    void forward_all(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2);

    std::vector<JetTape> tapes_;
    std::vector<JetBatch> jets_;
    std::vector<JetAdjoint> adjoints_;
};

LossGradient loss_gradient(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2);

struct GradientCheckReport
{
    double max_rel_error = 0;
    std::size_t checked = 0;
    //! Offending entries as (network index 0/1, parameter index).
    std::vector<std::array<std::size_t, 2>> offending;
};

/*!
 * Entrywise comparison of an analytic gradient with a reference. Relative
 * error uses max(|a|, |r|, floor) in the denominator, with floor =
 * floor_fraction * max(1, max|r|). Entries far below the gradient scale sit
 * under the rounding noise of a finite-difference reference, which is why
 * the default floor is not zero.
 */
GradientCheckReport compare_gradients(const Vec& analytic1, const Vec& reference1,
                                      const Vec& analytic2, const Vec& reference2, double tol,
                                      double floor_fraction = 1e-3);

//! Fourth-order central finite differences of the loss, per parameter.
std::pair<Vec, Vec> finite_difference_gradient(CompositeLoss& loss, const NetworkParams& p1,
                                               const NetworkParams& p2, double h = 1e-5);

GradientCheckReport check_gradient(CompositeLoss& loss, const NetworkParams& p1,
                                   const NetworkParams& p2, double tol, double h = 1e-5);

//! Constant (frozen) weights for a batch.
WeightJet frozen_weights(RowVec omega2);

}  // namespace ddpinn
