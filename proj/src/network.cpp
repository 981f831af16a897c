#include "ddpinn/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ddpinn {

void Architecture::validate() const
{
    if (d_in < 1)
        throw std::invalid_argument("architecture: input dimension must be positive");
    if (hidden.empty())
        throw std::invalid_argument("architecture: at least one hidden layer is required");
    for (int w : hidden)
        if (w < 1)
            throw std::invalid_argument("architecture: hidden widths must be at least 1");
    if (!(gauss_gamma > 0) || !std::isfinite(gauss_gamma))
        throw std::invalid_argument("architecture: gauss_gamma must be positive");
    if (!(weight_rate > 0) || !std::isfinite(weight_rate))
        throw std::invalid_argument("architecture: weight_rate must be positive");
    if (input_shift.size() != 0 && input_shift.size() != d_in)
        throw std::invalid_argument("architecture: input_shift size mismatch");
    if (input_scale.size() != 0 && input_scale.size() != d_in)
        throw std::invalid_argument("architecture: input_scale size mismatch");
    if (input_scale.size() != 0 && !(input_scale.array() != 0).all())
        throw std::invalid_argument("architecture: input_scale entries must be nonzero");
}

std::size_t Architecture::tanh_param_count() const
{
    std::size_t n = 0;
    int prev = d_in;
    for (int w : hidden) {
        n += static_cast<std::size_t>(w) * static_cast<std::size_t>(prev + 1);
        prev = w;
    }
    return n + static_cast<std::size_t>(prev) + 1;
}

std::size_t Architecture::gauss_param_count() const
{
    std::size_t n = 0;
    int prev = d_in;
    for (int w : hidden) {
        n += static_cast<std::size_t>(w) * static_cast<std::size_t>(prev + (gauss_bias ? 1 : 0));
        prev = w;
    }
    return n;
}

std::size_t Architecture::param_count() const
{
    return tanh_param_count() + gauss_param_count();
}

NetworkParams::NetworkParams(Architecture arch) : arch_(std::move(arch))
{
    arch_.validate();
    if (arch_.input_shift.size() == 0)
        arch_.input_shift = Vec::Zero(arch_.d_in);
    if (arch_.input_scale.size() == 0)
        arch_.input_scale = Vec::Ones(arch_.d_in);
    std::size_t at = 0;
    offsets_.resize(4 * arch_.hidden.size());
    for (int l = 0; l < layers(); ++l) {
        auto w = static_cast<std::size_t>(width(l));
        auto f = static_cast<std::size_t>(fan_in(l));
        offsets_[idx(l, kWt)] = at;
        at += w * f;
        offsets_[idx(l, kBt)] = at;
        at += w;
        offsets_[idx(l, kWg)] = at;
        at += w * f;
        offsets_[idx(l, kBg)] = at;
        at += arch_.gauss_bias ? w : 0;
    }
    out_offset_ = at;
    at += static_cast<std::size_t>(width(layers() - 1)) + 1;
    theta_ = Vec::Zero(static_cast<Eigen::Index>(at));
}

std::vector<bool> NetworkParams::tanh_mask() const
{
    std::vector<bool> mask(size(), true);
    for (int l = 0; l < layers(); ++l) {
        std::size_t begin = offset_w_gauss(l);
        std::size_t end = begin + static_cast<std::size_t>(width(l) * fan_in(l))
                          + (arch_.gauss_bias ? static_cast<std::size_t>(width(l)) : 0);
        for (std::size_t i = begin; i < end; ++i)
            mask[i] = false;
    }
    return mask;
}

std::pair<double, double> weight_functions(double distance, double rate)
{
    if (!(rate > 0))
        throw std::invalid_argument("weight rate must be positive");
    double w2 = std::exp(-rate * distance);
    return {1.0 - w2, w2};
}

std::pair<double, double> weight_functions(const Vec& x, const InterfaceShape& shape, double t,
                                           double rate)
{
    return weight_functions(distance(shape, x, t), rate);
}

Vec blended_activation(const Vec& z_tanh, const Vec& z_gauss, double omega1, double omega2,
                       double gauss_gamma)
{
    if (z_tanh.size() != z_gauss.size())
        throw std::invalid_argument("blended_activation: branch sizes differ");
    return omega1 * z_tanh.array().tanh() + omega2 * (-z_gauss.array().square() / gauss_gamma).exp();
}

NetworkParams initialize(const Architecture& arch, std::uint64_t seed)
{
    NetworkParams p(arch);
    std::mt19937_64 rng(seed);
    auto glorot = [&](auto&& w, double factor) {
        const double bound = factor * std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j)
                w(i, j) = dist(rng);
    };
    for (int l = 0; l < p.layers(); ++l) {
        glorot(p.w_tanh(l), 1.0);
        glorot(p.w_gauss(l), 0.5);
    }
    glorot(p.w_out(), 1.0);
    return p;
}

double forward_with_weight(const NetworkParams& params, const Vec& input, double omega2)
{
    const auto& arch = params.arch();
    if (input.size() != arch.d_in)
        throw std::invalid_argument("forward: input has " + std::to_string(input.size())
                                    + " entries, network expects " + std::to_string(arch.d_in));
    const bool multi = arch.mode == ActivationMode::MultiActivation;
    const double omega1 = 1.0 - omega2;
    Vec h = ((input - arch.input_shift).array() * arch.input_scale.array()).matrix();
    for (int l = 0; l < params.layers(); ++l) {
        Vec zt = params.w_tanh(l) * h + params.b_tanh(l);
        Vec a = fast_tanh(zt.array());
        if (multi) {
            Vec zg = params.w_gauss(l) * h;
            if (arch.gauss_bias)
                zg += params.b_gauss(l);
            Vec g = (-zg.array().square() / arch.gauss_gamma).exp();
            h = omega1 * a + omega2 * g;
        } else {
            h = a;
        }
        if (!h.allFinite())
            throw NumericalError("non-finite activation in hidden layer " + std::to_string(l + 1));
    }
    double u = params.w_out().dot(h) + params.b_out();
    if (!std::isfinite(u))
        throw NumericalError("non-finite network output");
    return u;
}

double forward(const NetworkParams& params, const Vec& x, double t, const InterfaceShape& shape)
{
    const auto& arch = params.arch();
    if (x.size() != shape.dim())
        throw std::invalid_argument("forward: point dimension does not match the interface");
    Vec input = x;
    if (arch.d_in == shape.dim() + 1) {
        input.conservativeResize(x.size() + 1);
        input[x.size()] = t;
    }
    double omega2 = 0;
    if (arch.mode == ActivationMode::MultiActivation)
        omega2 = weight_functions(x, shape, t, arch.weight_rate).second;
    return forward_with_weight(params, input, omega2);
}

const char* mode_name(ActivationMode mode)
{
    return mode == ActivationMode::MultiActivation ? "MultiActivation" : "TanhOnly";
}

ActivationMode parse_mode(const std::string& text)
{
    if (text == "MultiActivation" || text == "multi" || text == "maf")
        return ActivationMode::MultiActivation;
    if (text == "TanhOnly" || text == "tanh")
        return ActivationMode::TanhOnly;
    throw ConfigError("unknown activation mode '" + text + "' (expected MultiActivation or TanhOnly)");
}

}  // namespace ddpinn
