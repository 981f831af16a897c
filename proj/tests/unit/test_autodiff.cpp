#include "ddpinn/autodiff.hpp"
#include "ddpinn/training.hpp"

#include <doctest.h>

#include <random>

using namespace ddpinn;

namespace {

//! loss = value^power at one point of network 0.
class PointLoss : public CompositeLoss
{
  public:
    PointLoss(const Vec& x, int power) : x_(x), power_(power)
    {
        w_ = frozen_weights(RowVec::Constant(1, 0.4));
        req_.push_back({0, &x_, JetSpec{0, 0}, &w_});
    }
    const std::vector<JetRequest>& requests() const override { return req_; }
    double evaluate(const std::vector<JetBatch>& jets, std::vector<JetAdjoint>& adj) override
    {
        const double v = jets[0].value[0];
        adj[0].value[0] = power_ == 2 ? 2 * v : 1.0;
        return power_ == 2 ? v * v : v;
    }

  private:
    Mat x_;
    WeightJet w_;
    int power_;
    std::vector<JetRequest> req_;
};

Architecture small(int d_in, ActivationMode mode)
{
    Architecture a;
    a.d_in = d_in;
    a.hidden = {2};
    a.mode = mode;
    return a;
}

}  // namespace

TEST_CASE("quadratic probe follows the chain rule")
{
    NetworkParams p1 = initialize(small(2, ActivationMode::MultiActivation), 3);
    p1.b_out() = 0.25;
    NetworkParams p2 = initialize(small(2, ActivationMode::MultiActivation), 4);
    Vec x(2);
    x << 0.3, -0.6;
    PointLoss value(x, 1), square(x, 2);
    LossGradient gv = loss_gradient(value, p1, p2);
    LossGradient gs = loss_gradient(square, p1, p2);
    CHECK(gs.value == doctest::Approx(gv.value * gv.value));
    CHECK((gs.grad1 - 2 * gv.value * gv.grad1).norm() < 1e-14);
    CHECK(gs.grad2.isZero());
    CHECK(check_gradient(square, p1, p2, 1e-4).max_rel_error <= 1e-4);
}

TEST_CASE("random 2-2-1 network gradient against finite differences")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    for (ActivationMode mode : {ActivationMode::MultiActivation, ActivationMode::TanhOnly}) {
        NetworkParams p1(small(2, mode)), p2(small(2, mode));
        for (auto& v : p1.theta())
            v = n(rng);
        Vec x(2);
        x << n(rng), n(rng);
        PointLoss loss(x, 2);
        GradientCheckReport r = check_gradient(loss, p1, p2, 1e-4);
        CHECK(r.max_rel_error <= 1e-4);
        CHECK(r.offending.empty());
    }
}

TEST_CASE("gradient comparison flags corrupted entries")
{
    Vec a = Vec::LinSpaced(6, 1, 6);
    Vec b = Vec::LinSpaced(4, -2, 2);
    GradientCheckReport same = compare_gradients(a, a, b, b, 1e-10);
    CHECK(same.max_rel_error <= 1e-10);
    CHECK(same.offending.empty());

    Vec bad = b;
    bad[3] *= 2;
    GradientCheckReport r = compare_gradients(a, a, bad, b, 1e-6);
    REQUIRE(r.offending.size() == 1);
    CHECK(r.offending[0][0] == 1);
    CHECK(r.offending[0][1] == 3);
}

TEST_CASE("line2d loss gradient on ten points")
{
    const ProblemSpec& problem = find_problem("line2d");
    TrainConfig cfg;
    cfg.hidden = {6, 6};
    Architecture arch = make_architecture(cfg, problem);
    CollocationSet colloc = sample_collocation(problem, {10, 10, 10, 0},
                                               SamplingStrategy::LatinHypercube, 5);
    NetworkParams p1 = initialize(arch, 1), p2 = initialize(arch, 2);
    for (OmegaMode m : {OmegaMode::Frozen, OmegaMode::Differentiated}) {
        ProblemLoss loss(problem, colloc, cfg.weights, arch, m);
        CHECK(check_gradient(loss, p1, p2, 1e-4).max_rel_error <= 1e-4);
    }
}

TEST_CASE("loss that ignores the second network has zero second gradient")
{
    const ProblemSpec& problem = find_problem("ellipse2d");
    TrainConfig cfg;
    cfg.hidden = {5};
    Architecture arch = make_architecture(cfg, problem);
    CollocationSet colloc = sample_collocation(problem, {200, 20, 10, 0},
                                               SamplingStrategy::LatinHypercube, 1);
    LossWeights w;
    w.gamma1 = w.gamma2 = 0;
    w.pde2 = w.bc2 = 0;
    ProblemLoss loss(problem, colloc, w, arch, OmegaMode::Differentiated);
    LossGradient g = loss_gradient(loss, initialize(arch, 1), initialize(arch, 2));
    CHECK(g.grad2.isZero());
    CHECK(!g.grad1.isZero());
}

TEST_CASE("batched jets agree with single-point jets")
{
    Architecture a;
    a.d_in = 3;
    a.hidden = {7, 5};
    a.gauss_bias = true;
    NetworkParams p = initialize(a, 9);
    Mat x = Mat::Random(3, 4);
    RowVec w2(4);
    w2 << 0.1, 0.5, 0.9, 1.0;
    WeightJet w = frozen_weights(w2);
    JetTape tape;
    JetBatch out;
    tape.forward(p, x, JetSpec{3, 2}, w, out);
    for (Eigen::Index j = 0; j < 4; ++j) {
        Jet s = eval_jet(p, x.col(j).head(2), x(2, j), {1 - w2[j], w2[j]});
        CHECK(out.value[j] == doctest::Approx(s.value).epsilon(1e-13));
        CHECK(out.first(0, j) == doctest::Approx(s.grad[0]).epsilon(1e-13));
        CHECK(out.first(2, j) == doctest::Approx(*s.dt).epsilon(1e-13));
        CHECK(out.laplacian()[j] == doctest::Approx(s.lap).epsilon(1e-13));
    }
}
