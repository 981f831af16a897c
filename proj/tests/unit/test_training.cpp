#include "ddpinn/training.hpp"

#include <doctest.h>

#include <sstream>

using namespace ddpinn;

namespace {

struct Line2dFixture
{
    const ProblemSpec& problem = find_problem("line2d");
    TrainConfig cfg;
    Architecture arch;
    CollocationSet colloc;

    Line2dFixture()
    {
        cfg.hidden = {4, 4};
        arch = make_architecture(cfg, problem);
        colloc = sample_collocation(problem, {40, 16, 12, 0}, SamplingStrategy::LatinHypercube, 0);
    }
};

}  // namespace

TEST_CASE("interface terms of constant networks")
{
    Line2dFixture f;
    NetworkParams zero1(f.arch), zero2(f.arch);
    ProblemLoss loss(f.problem, f.colloc, f.cfg.weights, f.arch, OmegaMode::Differentiated);
    GradientEngine engine;
    engine.value(loss, zero1, zero2);
    // residual u1 - u2 - g1 = 0 - 0 + 2 at every interface point
    CHECK(loss.components().ifc_jump == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(loss.components().ifc_flux == 0.0);

    NetworkParams one = zero1;
    one.b_out() = 1.0;
    engine.value(loss, one, zero2);
    CHECK(loss.components().ifc_jump == doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("total is the weighted sum of the components")
{
    Line2dFixture f;
    f.cfg.weights = {1.5, 0.7, 2.0, 0.3, 1.0, 4.0, 0.25};
    NetworkParams p1 = initialize(f.arch, 1), p2 = initialize(f.arch, 2);
    ProblemLoss loss(f.problem, f.colloc, f.cfg.weights, f.arch, OmegaMode::Differentiated);
    GradientEngine engine;
    const double total = engine.value(loss, p1, p2);
    const LossComponents& c = loss.components();
    const LossWeights& w = f.cfg.weights;
    const double sum = w.pde1 * c.pde1 + w.pde2 * c.pde2 + w.bc1 * c.bc1 + w.bc2 * c.bc2
                       + w.gamma1 * c.ifc_jump + w.gamma2 * c.ifc_flux + w.init * c.init;
    CHECK(total == doctest::Approx(sum).epsilon(1e-15));
    CHECK(c.total(w) == doctest::Approx(total).epsilon(1e-15));

    LossWeights heavier = w;
    heavier.gamma1 *= 2;
    loss.set_weights(heavier);
    CHECK(engine.value(loss, p1, p2) > total);
}

TEST_CASE("relative L2 of the zero network is one")
{
    Line2dFixture f;
    PointSet v = validation_set(f.problem, 50, SamplingStrategy::LatinHypercube, 0);
    NetworkParams z(f.arch);
    CHECK(relative_l2(z, z, f.problem, v) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adam first step")
{
    AdamState s;
    Vec theta = Vec::Zero(3);
    adam_step(s, theta, Vec::Constant(3, 2.0), AdamSettings{});
    for (int i = 0; i < 3; ++i)
        CHECK(theta[i] == doctest::Approx(-9.99999995e-4).epsilon(1e-12));

    AdamState s0;
    Vec still = Vec::LinSpaced(3, -1, 1);
    const Vec before = still;
    adam_step(s0, still, Vec::Zero(3), AdamSettings{});
    CHECK(still == before);
}

TEST_CASE("zero steps records the initial loss only")
{
    TrainConfig c;
    c.hidden = {6};
    c.counts = {40, 16, 12, 0};
    c.steps = 0;
    TrainRecord r = train(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].step == 0);
    CHECK(r.rows[0].total > 0);
}

TEST_CASE("training is deterministic and logs on schedule")
{
    TrainConfig c;
    c.problem = "fixed_circle";
    c.hidden = {6, 6};
    c.counts = {40, 12, 10, 10};
    c.steps = 25;
    c.log_every = 10;
    TrainRecord a = train(c);
    TrainRecord b = train(c);
    REQUIRE(a.rows.size() == 4);  // 0, 10, 20, 25
    CHECK(a.rows.back().step == 25);
    CHECK(a.net1.theta() == b.net1.theta());
    CHECK(a.net2.theta() == b.net2.theta());
    std::ostringstream ca, cb;
    write_metrics_csv(a, ca);
    write_metrics_csv(b, cb);
    CHECK(ca.str() == cb.str());
    CHECK(ca.str().rfind("step,total,pde1,pde2,bc,ifc_jump,ifc_flux,init,val_rel_l2\n", 0) == 0);
    CHECK(a.rows.back().total < a.rows.front().total);
}

TEST_CASE("configs reject problems outside the catalog")
{
    TrainConfig c;
    c.problem = "nope";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}
