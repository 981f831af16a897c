#include "ddpinn/training.hpp"

#include "ddpinn/config.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ddpinn {

namespace {

constexpr double kSpaceStep = 1e-4;
constexpr double kTimeStep = 1e-4;

double side_sign(const ProblemSpec& problem, Region region)
{
    // Sign s with s * signed_distance >= 0 inside Omega1.
    double s1 = 1;
    switch (problem.omega1_side) {
    case Omega1Side::Inside:
    case Omega1Side::NegativeHalf: s1 = -1; break;
    case Omega1Side::Outside:
    case Omega1Side::PositiveHalf: s1 = 1; break;
    }
    return region == Region::Omega1 ? s1 : -s1;
}

//! Spatial point and time of an input column.
std::pair<Vec, double> split_input(const ProblemSpec& problem, const Eigen::Ref<const Vec>& col)
{
    Vec x = col.head(problem.dim);
    double t = problem.parabolic ? col[problem.dim] : 0.0;
    return {x, t};
}

void check_finite(double v, const char* term)
{
    if (!std::isfinite(v))
        throw NumericalError(std::string("non-finite loss term: ") + term);
}

}  // namespace

void LossWeights::validate() const
{
    for (double w : {pde1, pde2, bc1, bc2, init, gamma1, gamma2})
        if (!(w >= 0) || !std::isfinite(w))
            throw ConfigError("loss weights must be finite and nonnegative");
}

double LossComponents::total(const LossWeights& w) const
{
    return w.pde1 * pde1 + w.pde2 * pde2 + w.bc1 * bc1 + w.bc2 * bc2 + w.gamma1 * ifc_jump
           + w.gamma2 * ifc_flux + w.init * init;
}

WeightJet interface_weights(const ProblemSpec& problem, const Mat& inputs, Region region,
                            const JetSpec& spec, double rate, OmegaMode mode)
{
    const Eigen::Index n = inputs.cols();
    WeightJet w;
    w.omega2.resize(n);
    if (mode == OmegaMode::Frozen) {
        for (Eigen::Index j = 0; j < n; ++j) {
            auto [x, t] = split_input(problem, inputs.col(j));
            w.omega2[j] = weight_functions(x, problem.interface, t, rate).second;
        }
        return w;
    }

    // psi = s * signed distance is the distance on this network's side and
    // extends smoothly across Gamma, so one-sided limits at interface points
    // come out of a plain central stencil.
    const double s = side_sign(problem, region);
    const double horizon = problem.horizon;
    auto psi = [&](const Vec& x, double t) {
        return s * signed_distance(problem.interface, x, t);
    };
    w.differentiated = true;
    w.d_omega2.setZero(spec.first, n);
    w.dd_omega2.setZero(spec.second, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        auto [x, t] = split_input(problem, inputs.col(j));
        const double p0 = psi(x, t);
        const double om = std::exp(-rate * p0);
        w.omega2[j] = om;
        for (int k = 0; k < spec.first; ++k) {
            double d1 = 0;
            double d2 = 0;
            if (k < problem.dim) {
                const double h = kSpaceStep;
                Vec y = x;
                auto at = [&](double off) {
                    y[k] = x[k] + off;
                    return psi(y, t);
                };
                double fp1 = at(h), fm1 = at(-h), fp2 = at(2 * h), fm2 = at(-2 * h);
                d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
                d2 = (-fp2 + 16 * fp1 - 30 * p0 + 16 * fm1 - fm2) / (12 * h * h);
            } else if (problem.interface.is_moving()) {
                const double h = kTimeStep;
                if (t - 2 * h >= 0 && t + 2 * h <= horizon)
                    d1 = (-psi(x, t + 2 * h) + 8 * psi(x, t + h) - 8 * psi(x, t - h)
                          + psi(x, t - 2 * h))
                         / (12 * h);
                else if (t - 2 * h < 0)
                    d1 = (-3 * p0 + 4 * psi(x, t + h) - psi(x, t + 2 * h)) / (2 * h);
                else
                    d1 = (3 * p0 - 4 * psi(x, t - h) + psi(x, t - 2 * h)) / (2 * h);
            }
            w.d_omega2(k, j) = -rate * om * d1;
            if (k < spec.second)
                w.dd_omega2(k, j) = om * (rate * rate * d1 * d1 - rate * d2);
        }
    }
    return w;
}

//---------------------------------------------------------------------------//
// ProblemLoss
//---------------------------------------------------------------------------//

ProblemLoss::ProblemLoss(const ProblemSpec& problem, const CollocationSet& colloc,
                         const LossWeights& weights, const Architecture& arch, OmegaMode omega_mode)
    : problem_(problem), weights_(weights), arch_(arch), omega_mode_(omega_mode)
{
    weights_.validate();
    const int dim = problem.dim;
    const int d_in = problem.input_dim();
    const JetSpec pde_spec{d_in, dim};
    const JetSpec value_spec{0, 0};
    const JetSpec flux_spec{dim, 0};

    auto targets = [&](const Mat& pts, auto&& fn) {
        Vec out(pts.cols());
        for (Eigen::Index j = 0; j < pts.cols(); ++j) {
            auto [x, t] = split_input(problem, pts.col(j));
            out[j] = fn(x, t);
        }
        return out;
    };
    auto routed = [&](const PointSet& set, Region r) {
        std::vector<Eigen::Index> idx;
        for (std::size_t j = 0; j < set.regions.size(); ++j)
            if (set.regions[j] == r)
                idx.push_back(static_cast<Eigen::Index>(j));
        Mat out(set.points.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k)
            out.col(static_cast<Eigen::Index>(k)) = set.points.col(idx[k]);
        return out;
    };

    batches_.reserve(8);
    add(kPde, 0, colloc.interior1, targets(colloc.interior1, problem.f1),
        static_cast<double>(colloc.interior1.cols()), pde_spec);
    add(kPde, 1, colloc.interior2, targets(colloc.interior2, problem.f2),
        static_cast<double>(colloc.interior2.cols()), pde_spec);

    for (int net = 0; net < 2; ++net) {
        Region r = net == 0 ? Region::Omega1 : Region::Omega2;
        Mat pts = routed(colloc.boundary, r);
        const double norm = problem.parabolic ? static_cast<double>(colloc.boundary.size())
                                              : static_cast<double>(pts.cols());
        Vec g = targets(pts, [&](const Vec& x, double t) { return problem.field(r).value(x, t); });
        add(kBoundary, net, std::move(pts), std::move(g), norm, value_spec);
    }

    const Eigen::Index m_ifc = colloc.interface.cols();
    normals_.resize(dim, m_ifc);
    g1_.resize(m_ifc);
    g2_.resize(m_ifc);
    for (Eigen::Index j = 0; j < m_ifc; ++j) {
        auto [p, t] = split_input(problem, colloc.interface.col(j));
        normals_.col(j) = interface_normal(problem, p, t);
        auto [a, b] = jump_data(problem, p, t);
        g1_[j] = a;
        g2_[j] = b;
    }
    for (int net = 0; net < 2; ++net)
        add(kInterface, net, colloc.interface, Vec(), static_cast<double>(m_ifc), flux_spec);

    if (problem.parabolic) {
        for (int net = 0; net < 2; ++net) {
            Region r = net == 0 ? Region::Omega1 : Region::Omega2;
            Mat pts = routed(colloc.initial, r);
            Vec g = targets(pts, [&](const Vec& x, double) { return problem.field(r).value(x, 0.0); });
            add(kInitial, net, std::move(pts), std::move(g),
                static_cast<double>(colloc.initial.size()), value_spec);
        }
    }

    for (std::size_t i = 0; i < batches_.size(); ++i) {
        Batch& b = batches_[i];
        requests_[i].inputs = &b.inputs;
        requests_[i].weights = &b.omega;
        if (b.kind == kInterface)
            ifc_index_[b.network] = static_cast<int>(i);
    }
}

void ProblemLoss::add(Kind kind, int network, Mat inputs, Vec target, double norm,
                      const JetSpec& spec)
{
    if (inputs.cols() == 0)
        return;
    if (batches_.size() == batches_.capacity())
        throw std::logic_error("loss batch capacity exceeded");
    Region r = network == 0 ? Region::Omega1 : Region::Omega2;
    Batch b{kind, network, std::move(inputs), {}, std::move(target), norm};
    if (arch_.mode == ActivationMode::MultiActivation)
        b.omega = interface_weights(problem_, b.inputs, r, spec, arch_.weight_rate, omega_mode_);
    else
        b.omega = frozen_weights(RowVec::Zero(b.inputs.cols()));
    batches_.push_back(std::move(b));
    requests_.push_back(JetRequest{network, nullptr, spec, nullptr});
}

void ProblemLoss::set_weights(const LossWeights& w)
{
    w.validate();
    weights_ = w;
}

double ProblemLoss::evaluate(const std::vector<JetBatch>& jets, std::vector<JetAdjoint>& adjoints)
{
    LossComponents c;
    const int dim = problem_.dim;
    for (std::size_t i = 0; i < batches_.size(); ++i) {
        const Batch& b = batches_[i];
        const JetBatch& jet = jets[i];
        JetAdjoint& adj = adjoints[i];
        const bool first = b.network == 0;
        switch (b.kind) {
        case kPde: {
            const double beta = first ? problem_.beta1 : problem_.beta2;
            const double w = first ? weights_.pde1 : weights_.pde2;
            RowVec r = -beta * jet.laplacian() - b.target.transpose();
            if (problem_.parabolic)
                r += jet.first.row(dim);
            double term = r.squaredNorm() / b.norm;
            (first ? c.pde1 : c.pde2) = term;
            RowVec rbar = (2 * w / b.norm) * r;
            adj.second.rowwise() = -beta * rbar;
            if (problem_.parabolic)
                adj.first.row(dim) = rbar;
            break;
        }
        case kBoundary:
        case kInitial: {
            const double w = b.kind == kInitial ? weights_.init
                                                : (first ? weights_.bc1 : weights_.bc2);
            RowVec r = jet.value - b.target.transpose();
            double term = r.squaredNorm() / b.norm;
            if (b.kind == kInitial)
                c.init += term;
            else
                (first ? c.bc1 : c.bc2) = term;
            adj.value = (2 * w / b.norm) * r;
            break;
        }
        case kInterface:
            break;
        }
    }

    if (ifc_index_[0] >= 0 && ifc_index_[1] >= 0) {
        const auto i0 = static_cast<std::size_t>(ifc_index_[0]);
        const auto i1 = static_cast<std::size_t>(ifc_index_[1]);
        const JetBatch& j1 = jets[i0];
        const JetBatch& j2 = jets[i1];
        const double m = batches_[i0].norm;
        RowVec r1 = j1.value - j2.value - g1_.transpose();
        RowVec flux1 = (j1.first.array() * normals_.array()).colwise().sum();
        RowVec flux2 = (j2.first.array() * normals_.array()).colwise().sum();
        RowVec r2 = problem_.beta1 * flux1 - problem_.beta2 * flux2 - g2_.transpose();
        c.ifc_jump = r1.squaredNorm() / m;
        c.ifc_flux = r2.squaredNorm() / m;
        RowVec jbar = (2 * weights_.gamma1 / m) * r1;
        RowVec fbar = (2 * weights_.gamma2 / m) * r2;
        adjoints[i0].value = jbar;
        adjoints[i1].value = -jbar;
        for (int k = 0; k < dim; ++k) {
            adjoints[i0].first.row(k) = problem_.beta1 * fbar.cwiseProduct(normals_.row(k));
            adjoints[i1].first.row(k) = -problem_.beta2 * fbar.cwiseProduct(normals_.row(k));
        }
    }

    check_finite(c.pde1, "pde1");
    check_finite(c.pde2, "pde2");
    check_finite(c.bc1, "bc1");
    check_finite(c.bc2, "bc2");
    check_finite(c.ifc_jump, "ifc_jump");
    check_finite(c.ifc_flux, "ifc_flux");
    check_finite(c.init, "init");
    components_ = c;
    return c.total(weights_);
}

//---------------------------------------------------------------------------//
// Validation
//---------------------------------------------------------------------------//

Validator::Validator(const ProblemSpec& problem, const PointSet& points, const Architecture& arch)
{
    if (points.size() == 0)
        throw std::invalid_argument("relative_l2: empty evaluation set");
    if (points.points.rows() != problem.input_dim())
        throw std::invalid_argument("relative_l2: evaluation points have the wrong dimension");
    for (int net = 0; net < 2; ++net) {
        Region r = net == 0 ? Region::Omega1 : Region::Omega2;
        std::vector<Eigen::Index> idx;
        for (std::size_t j = 0; j < points.regions.size(); ++j)
            if (points.regions[j] == r)
                idx.push_back(static_cast<Eigen::Index>(j));
        Mat& in = inputs_[net];
        in.resize(points.points.rows(), static_cast<Eigen::Index>(idx.size()));
        exact_[net].resize(static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto kk = static_cast<Eigen::Index>(k);
            in.col(kk) = points.points.col(idx[k]);
            auto [x, t] = split_input(problem, in.col(kk));
            exact_[net][kk] = problem.field(r).value(x, t);
        }
        norm_ += exact_[net].squaredNorm();
        omega_[net] = arch.mode == ActivationMode::MultiActivation
                          ? interface_weights(problem, in, r, JetSpec{}, arch.weight_rate,
                                              OmegaMode::Frozen)
                          : frozen_weights(RowVec::Zero(in.cols()));
    }
    norm_ = std::sqrt(norm_);
    if (!(norm_ > 0))
        throw std::invalid_argument("relative_l2: exact solution vanishes on the evaluation set");
}

double Validator::relative_l2(const NetworkParams& p1, const NetworkParams& p2)
{
    double err = 0;
    for (int net = 0; net < 2; ++net) {
        if (inputs_[net].cols() == 0)
            continue;
        tape_.forward(net == 0 ? p1 : p2, inputs_[net], JetSpec{}, omega_[net], out_);
        err += (out_.value.transpose() - exact_[net]).squaredNorm();
    }
    return std::sqrt(err) / norm_;
}

double relative_l2(const NetworkParams& p1, const NetworkParams& p2, const ProblemSpec& problem,
                   const PointSet& eval_points)
{
    Validator v(problem, eval_points, p1.arch());
    return v.relative_l2(p1, p2);
}

//---------------------------------------------------------------------------//
// Adam
//---------------------------------------------------------------------------//

void adam_step(AdamState& state, Vec& theta, const Vec& grad, const AdamSettings& s)
{
    if (grad.size() != theta.size())
        throw std::invalid_argument("adam_step: gradient size mismatch");
    if (state.m.size() != theta.size()) {
        state.m = Vec::Zero(theta.size());
        state.v = Vec::Zero(theta.size());
        state.step = 0;
    }
    ++state.step;
    state.m = s.beta1 * state.m + (1 - s.beta1) * grad;
    state.v = s.beta2 * state.v + (1 - s.beta2) * grad.cwiseAbs2();
    const double c1 = 1 - std::pow(s.beta1, static_cast<double>(state.step));
    const double c2 = 1 - std::pow(s.beta2, static_cast<double>(state.step));
    theta.array() -= s.lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + s.eps);
}

//---------------------------------------------------------------------------//
// Training
//---------------------------------------------------------------------------//

void TrainConfig::validate() const
{
    const ProblemSpec& p = find_problem(problem);
    if (counts.interior < 2)
        throw ConfigError("m_interior must be at least 2");
    if (counts.boundary < 1)
        throw ConfigError("m_boundary must be at least 1");
    if (counts.interface < 1)
        throw ConfigError("m_interface must be at least 1");
    if (p.parabolic && effective_counts().initial < 1)
        throw ConfigError("parabolic problems need m_initial >= 1");
    if (hidden.empty())
        throw ConfigError("at least one hidden layer is required");
    for (int w : hidden)
        if (w < 1)
            throw ConfigError("hidden widths must be at least 1");
    if (!(gauss_gamma > 0))
        throw ConfigError("gauss_gamma must be positive");
    if (!(weight_rate > 0))
        throw ConfigError("weight_rate must be positive");
    if (steps < 0)
        throw ConfigError("steps must be nonnegative");
    if (log_every < 1)
        throw ConfigError("log_every must be at least 1");
    if (!(adam.lr > 0) || !(adam.beta1 >= 0 && adam.beta1 < 1) || !(adam.beta2 >= 0 && adam.beta2 < 1)
        || !(adam.eps > 0))
        throw ConfigError("invalid Adam settings");
    weights.validate();
}

CollocationCounts TrainConfig::effective_counts() const
{
    CollocationCounts c = counts;
    const ProblemSpec& p = find_problem(problem);
    if (!p.parabolic)
        c.initial = 0;
    else if (c.initial == 0)
        c.initial = std::max<std::size_t>(1, c.interior / 4);
    return c;
}

SamplingStrategy TrainConfig::effective_strategy() const
{
    return strategy ? *strategy : find_problem(problem).default_strategy;
}

Architecture make_architecture(const TrainConfig& config, const ProblemSpec& problem)
{
    Architecture a;
    a.d_in = problem.input_dim();
    a.hidden = config.hidden;
    a.mode = config.mode;
    a.gauss_bias = config.gauss_bias;
    a.gauss_gamma = config.gauss_gamma;
    a.weight_rate = config.weight_rate;
    a.input_shift = Vec::Zero(a.d_in);
    a.input_scale = Vec::Ones(a.d_in);
    if (config.normalize_inputs) {
        const auto& bb = problem.domain.bounding_box();
        a.input_shift.head(problem.dim) = 0.5 * (bb.lower + bb.upper);
        a.input_scale.head(problem.dim) = (2.0 / (bb.upper - bb.lower).array()).matrix();
        if (problem.parabolic) {
            a.input_shift[problem.dim] = 0.5 * problem.horizon;
            a.input_scale[problem.dim] = 2.0 / problem.horizon;
        }
    }
    return a;
}

TrainRecord train(const TrainConfig& config, const ProgressFn& progress)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const ProblemSpec& problem = find_problem(config.problem);
    const CollocationCounts counts = config.effective_counts();
    const SamplingStrategy strategy = config.effective_strategy();

    CollocationSet colloc = sample_collocation(problem, counts, strategy, config.sample_seed);
    Architecture arch = make_architecture(config, problem);

    TrainRecord rec;
    rec.config = config;
    rec.net1 = initialize(arch, derive_seed(config.init_seed, 1));
    rec.net2 = initialize(arch, derive_seed(config.init_seed, 2));
    rec.m_interior1 = static_cast<std::size_t>(colloc.interior1.cols());
    rec.m_interior2 = static_cast<std::size_t>(colloc.interior2.cols());
    rec.m_boundary = static_cast<std::size_t>(colloc.boundary.size());
    rec.m_interface = static_cast<std::size_t>(colloc.interface.cols());
    rec.m_initial = static_cast<std::size_t>(colloc.initial.size());

    PointSet val = validation_set(problem, counts.interior, strategy, config.validation_seed);
    rec.m_validation = static_cast<std::size_t>(val.size());
    Validator validator(problem, val, arch);

    ProblemLoss loss(problem, colloc, config.weights, arch, config.omega_mode);
    GradientEngine engine;
    AdamState s1;
    AdamState s2;

    auto log = [&](long step) {
        LogRow row;
        row.step = step;
        row.components = loss.components();
        row.total = row.components.total(config.weights);
        row.val_rel_l2 = validator.relative_l2(rec.net1, rec.net2);
        rec.rows.push_back(row);
        if (progress)
            progress(row);
    };

    for (long step = 0; step < config.steps; ++step) {
        LossGradient lg = engine.run(loss, rec.net1, rec.net2);
        if (step % config.log_every == 0)
            log(step);
        adam_step(s1, rec.net1.theta(), lg.grad1, config.adam);
        adam_step(s2, rec.net2.theta(), lg.grad2, config.adam);
        if (!rec.net1.theta().allFinite() || !rec.net2.theta().allFinite())
            throw NumericalError("non-finite parameters after step " + std::to_string(step + 1));
    }
    engine.value(loss, rec.net1, rec.net2);
    log(config.steps);
    rec.wall_clock_s
        = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

void write_metrics_csv(const TrainRecord& record, std::ostream& os)
{
    os << "step,total,pde1,pde2,bc,ifc_jump,ifc_flux,init,val_rel_l2\n";
    os << std::setprecision(17);
    for (const auto& r : record.rows) {
        const auto& c = r.components;
        os << r.step << ',' << r.total << ',' << c.pde1 << ',' << c.pde2 << ',' << c.bc() << ','
           << c.ifc_jump << ',' << c.ifc_flux << ',' << c.init << ',' << r.val_rel_l2 << '\n';
    }
}

void write_summary(const TrainRecord& record, std::ostream& os)
{
    os << std::setprecision(17);
    const auto& cfg = record.config;
    os << "problem=" << cfg.problem << '\n'
       << "mode=" << mode_name(cfg.mode) << '\n'
       << "final_val_rel_l2=" << record.final_val_rel_l2() << '\n';
    if (!record.rows.empty()) {
        os << "initial_total=" << record.rows.front().total << '\n'
           << "final_total=" << record.rows.back().total << '\n'
           << "initial_val_rel_l2=" << record.rows.front().val_rel_l2 << '\n';
    }
    os << "steps=" << cfg.steps << '\n'
       << "wall_clock_s=" << record.wall_clock_s << '\n'
       << "sample_seed=" << cfg.sample_seed << '\n'
       << "init_seed=" << cfg.init_seed << '\n'
       << "validation_seed=" << cfg.validation_seed << '\n'
       << "m_interior1=" << record.m_interior1 << '\n'
       << "m_interior2=" << record.m_interior2 << '\n'
       << "m_boundary=" << record.m_boundary << '\n'
       << "m_interface=" << record.m_interface << '\n'
       << "m_initial=" << record.m_initial << '\n'
       << "m_validation=" << record.m_validation << '\n'
       << "params_per_network=" << record.net1.size() << '\n'
       << "tanh_params_per_network=" << record.net1.arch().tanh_param_count() << '\n'
       << "gauss_params_per_network=" << record.net1.arch().gauss_param_count() << '\n';
    std::istringstream echo(config_to_text(cfg));
    for (std::string line; std::getline(echo, line);)
        os << "config." << line << '\n';
}

}  // namespace ddpinn
