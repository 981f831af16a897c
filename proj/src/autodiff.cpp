#include "ddpinn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ddpinn {

namespace {

using RowMajorMat = NetworkParams::RowMajorMat;

template<class M>
auto block(M& m, int b, Eigen::Index n)
{
    return m.middleCols(b * n, n);
}

//! Scale every column block of x by the per-point row vector w.
void scale_blocks(const Mat& x, const RowVec& w, int blocks, Eigen::Index n, Mat& out)
{
    out.resize(x.rows(), x.cols());
    for (int b = 0; b < blocks; ++b)
        block(out, b, n).array() = block(x, b, n).array().rowwise() * w.array();
}

}  // namespace

RowVec JetBatch::laplacian() const
{
    if (second.rows() == 0)
        return RowVec::Zero(value.size());
    return second.colwise().sum();
}

void JetAdjoint::reset(const JetSpec& spec, Eigen::Index n)
{
    value.setZero(n);
    first.setZero(spec.first, n);
    second.setZero(spec.second, n);
}

WeightJet frozen_weights(RowVec omega2)
{
    WeightJet w;
    w.omega2 = std::move(omega2);
    return w;
}

//---------------------------------------------------------------------------//
// JetTape
//---------------------------------------------------------------------------//

void JetTape::activate(const Mat& z, const Mat* d, Mat& out) const
{
    const auto n = n_;
    const int K = spec_.first;
    const int S = spec_.second;
    for (int k = 0; k < K; ++k)
        block(out, 1 + k, n).array() = d[0].array() * block(z, 1 + k, n).array();
    for (int s = 0; s < S; ++s)
        block(out, 1 + K + s, n).array() = d[1].array() * block(z, 1 + s, n).array().square()
                                           + d[0].array() * block(z, 1 + K + s, n).array();
}

void JetTape::activation_adjoint(const Mat& z, const Mat* d, const Mat& abar, Mat& zbar) const
{
    const auto n = n_;
    const int K = spec_.first;
    const int S = spec_.second;
    zbar.resize(abar.rows(), abar.cols());
    auto zv = block(zbar, 0, n);
    zv.array() = block(abar, 0, n).array() * d[0].array();
    for (int k = 0; k < K; ++k) {
        auto ak = block(abar, 1 + k, n).array();
        auto zk = block(z, 1 + k, n).array();
        zv.array() += ak * d[1].array() * zk;
        block(zbar, 1 + k, n).array() = ak * d[0].array();
    }
    for (int s = 0; s < S; ++s) {
        auto ass = block(abar, 1 + K + s, n).array();
        auto zs = block(z, 1 + s, n).array();
        auto zss = block(z, 1 + K + s, n).array();
        zv.array() += ass * (d[2].array() * zs.square() + d[1].array() * zss);
        block(zbar, 1 + s, n).array() += 2.0 * ass * d[1].array() * zs;
        block(zbar, 1 + K + s, n).array() = ass * d[0].array();
    }
}

void JetTape::forward(const NetworkParams& params, const Mat& inputs, const JetSpec& spec,
                      const WeightJet& weights, JetBatch& out)
{
    const auto& arch = params.arch();
    if (inputs.rows() != arch.d_in)
        throw std::invalid_argument("jet forward: inputs have " + std::to_string(inputs.rows())
                                    + " rows, network expects " + std::to_string(arch.d_in));
    if (spec.first < 0 || spec.first > arch.d_in || spec.second < 0 || spec.second > spec.first)
        throw std::invalid_argument("jet forward: invalid derivative spec");
    const Eigen::Index n = inputs.cols();
    multi_ = arch.mode == ActivationMode::MultiActivation;
    if (multi_) {
        if (weights.omega2.size() != n)
            throw std::invalid_argument("jet forward: weight count does not match batch");
        if (weights.differentiated
            && (weights.d_omega2.rows() < spec.first || weights.dd_omega2.rows() < spec.second
                || weights.d_omega2.cols() != n || weights.dd_omega2.cols() != n))
            throw std::invalid_argument("jet forward: weight derivatives do not match spec");
    }
    spec_ = spec;
    n_ = n;
    weights_ = &weights;
    const int B = spec.blocks();
    const int K = spec.first;
    const int S = spec.second;
    const int L = params.layers();
    layers_.resize(static_cast<std::size_t>(L));

    // Input jets: normalized value plus unit directions scaled by the map.
    Mat& in0 = layers_[0].input;
    in0.setZero(arch.d_in, B * n);
    block(in0, 0, n) = ((inputs.colwise() - arch.input_shift).array().colwise()
                        * arch.input_scale.array())
                           .matrix();
    for (int k = 0; k < K; ++k)
        block(in0, 1 + k, n).row(k).setConstant(arch.input_scale[k]);

    RowVec omega1;
    if (multi_)
        omega1 = 1.0 - weights.omega2.array();

    const double gamma = arch.gauss_gamma;
    for (int l = 0; l < L; ++l) {
        Layer& ly = layers_[static_cast<std::size_t>(l)];
        const Mat& P = ly.input;
        Mat& H = (l + 1 < L) ? layers_[static_cast<std::size_t>(l + 1)].input : top_;

        ly.zt.noalias() = params.w_tanh(l) * P;
        block(ly.zt, 0, n).colwise() += params.b_tanh(l);
        {
            auto z = block(ly.zt, 0, n).array();
            ly.t.resize(ly.zt.rows(), ly.zt.cols());
            auto a = block(ly.t, 0, n);
            a.array() = fast_tanh(z);
            ly.dt[0] = 1.0 - a.array().square();
            ly.dt[1] = -2.0 * a.array() * ly.dt[0].array();
            ly.dt[2] = -2.0 * (ly.dt[0].array().square() + a.array() * ly.dt[1].array());
        }
        activate(ly.zt, ly.dt, ly.t);

        if (!multi_) {
            H = ly.t;
            continue;
        }

        ly.zg.noalias() = params.w_gauss(l) * P;
        if (arch.gauss_bias)
            block(ly.zg, 0, n).colwise() += params.b_gauss(l);
        {
            auto z = block(ly.zg, 0, n).array();
            ly.g.resize(ly.zg.rows(), ly.zg.cols());
            auto g = block(ly.g, 0, n);
            g.array() = (-z.square() / gamma).exp();
            ly.dg[0] = (-2.0 / gamma) * z * g.array();
            ly.dg[1] = (4.0 / (gamma * gamma) * z.square() - 2.0 / gamma) * g.array();
            ly.dg[2] = (12.0 / (gamma * gamma) * z - 8.0 / (gamma * gamma * gamma) * z.cube())
                       * g.array();
        }
        activate(ly.zg, ly.dg, ly.g);

        H.resize(ly.t.rows(), ly.t.cols());
        for (int b = 0; b < B; ++b)
            block(H, b, n).array() = block(ly.t, b, n).array().rowwise() * omega1.array()
                                     + block(ly.g, b, n).array().rowwise() * weights.omega2.array();
        if (weights.differentiated) {
            // omega1 = 1 - omega2, so d(omega1 T + omega2 G) picks up
            // d omega2 * (G - T) terms.
            Mat dv = block(ly.g, 0, n) - block(ly.t, 0, n);
            for (int k = 0; k < K; ++k)
                block(H, 1 + k, n).array() += dv.array().rowwise() * weights.d_omega2.row(k).array();
            for (int s = 0; s < S; ++s) {
                Mat ds = block(ly.g, 1 + s, n) - block(ly.t, 1 + s, n);
                block(H, 1 + K + s, n).array()
                    += 2.0 * (ds.array().rowwise() * weights.d_omega2.row(s).array())
                       + dv.array().rowwise() * weights.dd_omega2.row(s).array();
            }
        }
    }

    RowVec row = params.w_out() * top_;
    out.value = block(row, 0, n).array() + params.b_out();
    out.first.resize(K, n);
    out.second.resize(S, n);
    for (int k = 0; k < K; ++k)
        out.first.row(k) = block(row, 1 + k, n);
    for (int s = 0; s < S; ++s)
        out.second.row(s) = block(row, 1 + K + s, n);

    if (!out.value.allFinite() || !out.first.allFinite() || !out.second.allFinite()) {
        for (int l = 0; l < L; ++l) {
            const Mat& H = (l + 1 < L) ? layers_[static_cast<std::size_t>(l + 1)].input : top_;
            if (!H.allFinite())
                throw NumericalError("non-finite value in hidden layer " + std::to_string(l + 1));
        }
        throw NumericalError("non-finite value in the output layer");
    }
}

void JetTape::backward(const NetworkParams& params, const JetAdjoint& adjoint, Eigen::Ref<Vec> grad)
{
    if (grad.size() != static_cast<Eigen::Index>(params.size()))
        throw std::invalid_argument("jet backward: gradient size mismatch");
    const Eigen::Index n = n_;
    const int K = spec_.first;
    const int S = spec_.second;
    const int B = spec_.blocks();
    const int L = params.layers();
    if (adjoint.value.size() != n || adjoint.first.rows() != K || adjoint.second.rows() != S)
        throw std::invalid_argument("jet backward: adjoint shape does not match the forward pass");

    RowVec ubar(B * n);
    block(ubar, 0, n) = adjoint.value;
    for (int k = 0; k < K; ++k)
        block(ubar, 1 + k, n) = adjoint.first.row(k);
    for (int s = 0; s < S; ++s)
        block(ubar, 1 + K + s, n) = adjoint.second.row(s);

    const int m_top = params.width(L - 1);
    Eigen::Map<RowVec>(grad.data() + params.offset_w_out(), m_top).noalias()
        += ubar * top_.transpose();
    grad[grad.size() - 1] += adjoint.value.sum();
    hbar_.noalias() = params.w_out().transpose() * ubar;

    const WeightJet& w = *weights_;
    RowVec omega1;
    if (multi_)
        omega1 = 1.0 - w.omega2.array();

    for (int l = L - 1; l >= 0; --l) {
        Layer& ly = layers_[static_cast<std::size_t>(l)];
        const int m = params.width(l);
        const int f = params.fan_in(l);

        if (multi_) {
            scale_blocks(hbar_, omega1, B, n, tbar_);
            scale_blocks(hbar_, w.omega2, B, n, gbar_);
            if (w.differentiated) {
                Mat dv = Mat::Zero(m, n);
                for (int k = 0; k < K; ++k)
                    dv.array() += block(hbar_, 1 + k, n).array().rowwise() * w.d_omega2.row(k).array();
                for (int s = 0; s < S; ++s) {
                    auto hss = block(hbar_, 1 + K + s, n).array();
                    dv.array() += hss.rowwise() * w.dd_omega2.row(s).array();
                    Mat ds = 2.0 * (hss.rowwise() * w.d_omega2.row(s).array()).matrix();
                    block(gbar_, 1 + s, n) += ds;
                    block(tbar_, 1 + s, n) -= ds;
                }
                block(gbar_, 0, n) += dv;
                block(tbar_, 0, n) -= dv;
            }
            activation_adjoint(ly.zt, ly.dt, tbar_, ztbar_);
            activation_adjoint(ly.zg, ly.dg, gbar_, zgbar_);
        } else {
            activation_adjoint(ly.zt, ly.dt, hbar_, ztbar_);
        }

        Eigen::Map<RowMajorMat>(grad.data() + params.offset_w_tanh(l), m, f).noalias()
            += ztbar_ * ly.input.transpose();
        Eigen::Map<Vec>(grad.data() + params.offset_b_tanh(l), m)
            += block(ztbar_, 0, n).rowwise().sum();
        if (multi_) {
            Eigen::Map<RowMajorMat>(grad.data() + params.offset_w_gauss(l), m, f).noalias()
                += zgbar_ * ly.input.transpose();
            if (params.arch().gauss_bias)
                Eigen::Map<Vec>(grad.data() + params.offset_b_gauss(l), m)
                    += block(zgbar_, 0, n).rowwise().sum();
        }
        if (l > 0) {
            hbar_.noalias() = params.w_tanh(l).transpose() * ztbar_;
            if (multi_)
                hbar_.noalias() += params.w_gauss(l).transpose() * zgbar_;
        }
    }
}

//---------------------------------------------------------------------------//
// Single-point jets
//---------------------------------------------------------------------------//

Jet eval_jet(const NetworkParams& params, const Vec& x, std::optional<double> t,
             std::pair<double, double> omega)
{
    return eval_jet(params, x, t, frozen_weights(RowVec::Constant(1, omega.second)));
}

Jet eval_jet(const NetworkParams& params, const Vec& x, std::optional<double> t,
             const WeightJet& weights)
{
    const int dim = static_cast<int>(x.size());
    Mat input(dim + (t ? 1 : 0), 1);
    input.col(0).head(dim) = x;
    if (t)
        input(dim, 0) = *t;
    JetSpec spec{static_cast<int>(input.rows()), dim};
    JetTape tape;
    JetBatch out;
    tape.forward(params, input, spec, weights, out);
    Jet jet;
    jet.value = out.value[0];
    jet.grad = out.first.col(0).head(dim);
    jet.lap = out.second.col(0).sum();
    if (t)
        jet.dt = out.first(dim, 0);
    return jet;
}

//---------------------------------------------------------------------------//
// Loss gradients
//---------------------------------------------------------------------------//

void GradientEngine::forward_all(CompositeLoss& loss, const NetworkParams& p1,
                                 const NetworkParams& p2)
{
    const auto& req = loss.requests();
    tapes_.resize(req.size());
    jets_.resize(req.size());
    for (std::size_t i = 0; i < req.size(); ++i) {
        const auto& r = req[i];
        if (r.network != 0 && r.network != 1)
            throw std::invalid_argument("loss request names an unknown network");
        const NetworkParams& p = r.network == 0 ? p1 : p2;
        tapes_[i].forward(p, *r.inputs, r.spec, *r.weights, jets_[i]);
    }
}

LossGradient GradientEngine::run(CompositeLoss& loss, const NetworkParams& p1,
                                 const NetworkParams& p2)
{
    forward_all(loss, p1, p2);
    const auto& req = loss.requests();
    adjoints_.resize(req.size());
    for (std::size_t i = 0; i < req.size(); ++i)
        adjoints_[i].reset(req[i].spec, req[i].inputs->cols());
    LossGradient out;
    out.value = loss.evaluate(jets_, adjoints_);
    if (!std::isfinite(out.value))
        throw NumericalError("non-finite loss value");
    out.grad1 = Vec::Zero(static_cast<Eigen::Index>(p1.size()));
    out.grad2 = Vec::Zero(static_cast<Eigen::Index>(p2.size()));
    for (std::size_t i = 0; i < req.size(); ++i) {
        const bool first = req[i].network == 0;
        tapes_[i].backward(first ? p1 : p2, adjoints_[i], first ? out.grad1 : out.grad2);
    }
    return out;
}

double GradientEngine::value(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2)
{
    forward_all(loss, p1, p2);
    const auto& req = loss.requests();
    adjoints_.resize(req.size());
    for (std::size_t i = 0; i < req.size(); ++i)
        adjoints_[i].reset(req[i].spec, req[i].inputs->cols());
    return loss.evaluate(jets_, adjoints_);
}

LossGradient loss_gradient(CompositeLoss& loss, const NetworkParams& p1, const NetworkParams& p2)
{
    GradientEngine engine;
    return engine.run(loss, p1, p2);
}

GradientCheckReport compare_gradients(const Vec& analytic1, const Vec& reference1,
                                      const Vec& analytic2, const Vec& reference2, double tol,
                                      double floor_fraction)
{
    if (analytic1.size() != reference1.size() || analytic2.size() != reference2.size())
        throw std::invalid_argument("compare_gradients: size mismatch");
    double scale = 1.0;
    if (reference1.size())
        scale = std::max(scale, reference1.cwiseAbs().maxCoeff());
    if (reference2.size())
        scale = std::max(scale, reference2.cwiseAbs().maxCoeff());
    const double floor = floor_fraction * scale;

    GradientCheckReport report;
    auto scan = [&](const Vec& a, const Vec& r, std::size_t net) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            double denom = std::max({std::abs(a[i]), std::abs(r[i]), floor});
            double err = std::abs(a[i] - r[i]) / denom;
            if (!std::isfinite(err))
                err = std::numeric_limits<double>::infinity();
            report.max_rel_error = std::max(report.max_rel_error, err);
            if (err > tol)
                report.offending.push_back({net, static_cast<std::size_t>(i)});
            ++report.checked;
        }
    };
    scan(analytic1, reference1, 0);
    scan(analytic2, reference2, 1);
    return report;
}

std::pair<Vec, Vec> finite_difference_gradient(CompositeLoss& loss, const NetworkParams& p1,
                                               const NetworkParams& p2, double h)
{
    GradientEngine engine;
    NetworkParams q1 = p1;
    NetworkParams q2 = p2;
    auto sweep = [&](NetworkParams& q) {
        Vec g(q.theta().size());
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            const double keep = q.theta()[i];
            auto at = [&](double off) {
                q.theta()[i] = keep + off;
                return engine.value(loss, q1, q2);
            };
            const double f1 = at(h), fm1 = at(-h), f2 = at(2 * h), fm2 = at(-2 * h);
            q.theta()[i] = keep;
            g[i] = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
        }
        return g;
    };
    Vec g1 = sweep(q1);
    Vec g2 = sweep(q2);
    return {g1, g2};
}

GradientCheckReport check_gradient(CompositeLoss& loss, const NetworkParams& p1,
                                   const NetworkParams& p2, double tol, double h)
{
    LossGradient analytic = loss_gradient(loss, p1, p2);
    auto [fd1, fd2] = finite_difference_gradient(loss, p1, p2, h);
    return compare_gradients(analytic.grad1, fd1, analytic.grad2, fd2, tol);
}

}  // namespace ddpinn
