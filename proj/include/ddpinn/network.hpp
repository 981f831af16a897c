#pragma once

#include "ddpinn/common.hpp"
#include "ddpinn/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ddpinn {

enum class ActivationMode { MultiActivation, TanhOnly };

/*!
 * Layer sizes and activation settings of one subdomain network.
 *
 * Inputs are mapped by z = (x - input_shift) * input_scale before the first
 * layer; the default is the identity.
 */
struct Architecture
{
    int d_in = 2;
    std::vector<int> hidden{50, 50, 50};
    ActivationMode mode = ActivationMode::MultiActivation;
    bool gauss_bias = false;
    double gauss_gamma = 1.0;
    double weight_rate = 10.0;
    Vec input_shift;
    Vec input_scale;

    //! Throws std::invalid_argument on inconsistent settings.
    void validate() const;

    std::size_t param_count() const;
    //! Hidden tanh-branch weights and biases plus the output layer.
    std::size_t tanh_param_count() const;
    //! Gaussian-branch weights (and biases when enabled).
    std::size_t gauss_param_count() const;
};

/*!
 * Flat parameter vector with per-layer views.
 *
 * Layout, layer by layer: W_tanh (row-major), b_tanh, W_gauss (row-major),
 * b_gauss (only with gauss_bias); then the output row w and scalar b.
 */
class NetworkParams
{
  public:
    using RowMajorMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using MatMap = Eigen::Map<RowMajorMat>;
    using ConstMatMap = Eigen::Map<const RowMajorMat>;
    using VecMap = Eigen::Map<Vec>;
    using ConstVecMap = Eigen::Map<const Vec>;

    NetworkParams() = default;
    //! Zero-initialized parameters.
    explicit NetworkParams(Architecture arch);

    const Architecture& arch() const { return arch_; }
    int layers() const { return static_cast<int>(arch_.hidden.size()); }
    int width(int layer) const { return arch_.hidden[static_cast<std::size_t>(layer)]; }
    int fan_in(int layer) const { return layer == 0 ? arch_.d_in : width(layer - 1); }

    Vec& theta() { return theta_; }
    const Vec& theta() const { return theta_; }
    std::size_t size() const { return static_cast<std::size_t>(theta_.size()); }

    MatMap w_tanh(int l) { return {ptr(l, kWt), width(l), fan_in(l)}; }
    ConstMatMap w_tanh(int l) const { return {ptr(l, kWt), width(l), fan_in(l)}; }
    VecMap b_tanh(int l) { return {ptr(l, kBt), width(l)}; }
    ConstVecMap b_tanh(int l) const { return {ptr(l, kBt), width(l)}; }
    MatMap w_gauss(int l) { return {ptr(l, kWg), width(l), fan_in(l)}; }
    ConstMatMap w_gauss(int l) const { return {ptr(l, kWg), width(l), fan_in(l)}; }
    VecMap b_gauss(int l) { return {ptr(l, kBg), arch_.gauss_bias ? width(l) : 0}; }
    ConstVecMap b_gauss(int l) const { return {ptr(l, kBg), arch_.gauss_bias ? width(l) : 0}; }
    Eigen::Map<RowVec> w_out() { return {theta_.data() + out_offset_, width(layers() - 1)}; }
    Eigen::Map<const RowVec> w_out() const
    {
        return {theta_.data() + out_offset_, width(layers() - 1)};
    }
    double& b_out() { return theta_[static_cast<Eigen::Index>(theta_.size() - 1)]; }
    double b_out() const { return theta_[static_cast<Eigen::Index>(theta_.size() - 1)]; }

    //! Offsets of each block in theta (for gradient views of the same layout).
    std::size_t offset_w_tanh(int l) const { return offsets_[idx(l, kWt)]; }
    std::size_t offset_b_tanh(int l) const { return offsets_[idx(l, kBt)]; }
    std::size_t offset_w_gauss(int l) const { return offsets_[idx(l, kWg)]; }
    std::size_t offset_b_gauss(int l) const { return offsets_[idx(l, kBg)]; }
    std::size_t offset_w_out() const { return out_offset_; }

    //! Mask with 1 on tanh-branch and output entries, 0 on Gaussian entries.
    std::vector<bool> tanh_mask() const;

  private:
    enum Part { kWt = 0, kBt = 1, kWg = 2, kBg = 3 };
    static std::size_t idx(int l, Part p) { return static_cast<std::size_t>(4 * l + p); }
    double* ptr(int l, Part p) { return theta_.data() + offsets_[idx(l, p)]; }
    const double* ptr(int l, Part p) const { return theta_.data() + offsets_[idx(l, p)]; }

    Architecture arch_;
    Vec theta_;
    std::vector<std::size_t> offsets_;
    std::size_t out_offset_ = 0;
};

//! (omega1, omega2) with omega2 = exp(-rate * distance), omega1 = 1 - omega2.
std::pair<double, double> weight_functions(double distance, double rate);
std::pair<double, double> weight_functions(const Vec& x, const InterfaceShape& shape, double t,
                                           double rate);

//! omega1 * tanh(z_tanh) + omega2 * exp(-z_gauss^2 / gamma), componentwise.
Vec blended_activation(const Vec& z_tanh, const Vec& z_gauss, double omega1, double omega2,
                       double gauss_gamma);

//! Glorot-uniform tanh branch and output layer, zero biases, Gaussian
//! branch Glorot-uniform scaled by 0.5. Deterministic in seed.
NetworkParams initialize(const Architecture& arch, std::uint64_t seed);

//! Network value at a spatial point x (time t appended when d_in = dim + 1),
//! with omega evaluated against Gamma(t).
double forward(const NetworkParams& params, const Vec& x, double t, const InterfaceShape& shape);

//! Forward pass with explicit omega2, for shape-free evaluation.
double forward_with_weight(const NetworkParams& params, const Vec& input, double omega2);

const char* mode_name(ActivationMode mode);
ActivationMode parse_mode(const std::string& text);

//! Faster tanh for doubles: 1 - 2 / (exp(2z) + 1).
template<class Derived>
auto fast_tanh(const Eigen::ArrayBase<Derived>& z)
{
    return 1.0 - 2.0 / ((2.0 * z).exp() + 1.0);
}

}  // namespace ddpinn
