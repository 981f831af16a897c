#include "ddpinn/autodiff.hpp"
#include "ddpinn/network.hpp"

#include <doctest.h>

#include <cmath>

using namespace ddpinn;

namespace {

Architecture tiny(int d_in, std::vector<int> hidden, ActivationMode mode)
{
    Architecture a;
    a.d_in = d_in;
    a.hidden = std::move(hidden);
    a.mode = mode;
    return a;
}

}  // namespace

TEST_CASE("parameter counts of the 50-50-50 network")
{
    Architecture a = tiny(2, {50, 50, 50}, ActivationMode::MultiActivation);
    // hidden tanh weights and biases, then the 50 -> 1 output layer
    const std::size_t tanh = (2 * 50 + 50) + (50 * 50 + 50) + (50 * 50 + 50) + (50 + 1);
    const std::size_t gauss = 2 * 50 + 50 * 50 + 50 * 50;
    CHECK(tanh == 5301);
    CHECK(gauss == 5100);
    CHECK(a.tanh_param_count() == tanh);
    CHECK(a.gauss_param_count() == gauss);
    CHECK(a.param_count() == tanh + gauss);
    CHECK(NetworkParams(a).size() == tanh + gauss);

    a.gauss_bias = true;
    CHECK(a.gauss_param_count() == gauss + 150);

    // TanhOnly keeps the (unused) Gaussian block so both modes share a layout
    a.mode = ActivationMode::TanhOnly;
    a.gauss_bias = false;
    CHECK(a.param_count() == tanh + gauss);
    CHECK(a.tanh_param_count() == tanh);
}

TEST_CASE("weight functions")
{
    auto [w1, w2] = weight_functions(0.0, 10.0);
    CHECK(w1 == 0.0);
    CHECK(w2 == 1.0);
    std::tie(w1, w2) = weight_functions(0.1, 10.0);
    CHECK(w2 == doctest::Approx(0.3678794412).epsilon(1e-10));
    CHECK(w1 == doctest::Approx(0.6321205588).epsilon(1e-10));
    std::tie(w1, w2) = weight_functions(3.0, 10.0);
    CHECK(std::abs(w1 - 1) < 1e-12);
    CHECK(w2 < 1e-12);
}

TEST_CASE("blended activation")
{
    Vec zt(3), zg(3);
    zt << -0.7, 0.0, 1.3;
    zg << 0.0, 0.0, 0.4;
    Vec pure = blended_activation(zt, zg, 1, 0, 1);
    for (int j = 0; j < 3; ++j)
        CHECK(pure[j] == doctest::Approx(std::tanh(zt[j])));
    Vec gauss = blended_activation(zt, zg, 0, 1, 1);
    CHECK(gauss[0] == 1.0);
    Vec half = blended_activation(zt, zg, 0.5, 0.5, 1);
    CHECK(half[1] == doctest::Approx(0.5));
}

TEST_CASE("forward pass on hand-set networks")
{
    InterfaceShape plane(Hyperplane{0, 0.0, -Vec::Ones(2), Vec::Ones(2)});
    NetworkParams zero(tiny(2, {4, 3}, ActivationMode::MultiActivation));
    Vec x(2);
    x << 0.3, -0.2;
    CHECK(forward(zero, x, 0, plane) == 0.0);

    NetworkParams one(tiny(1, {1}, ActivationMode::TanhOnly));
    one.theta().setOnes();
    one.b_tanh(0).setZero();
    InterfaceShape point(Hyperplane{0, 0.0, -Vec::Ones(1), Vec::Ones(1)});
    CHECK(forward(one, Vec::Zero(1), 0, point) == one.b_out());
}

TEST_CASE("on the interface only the Gaussian branch contributes")
{
    InterfaceShape plane(Hyperplane{0, 0.0, -Vec::Ones(2), Vec::Ones(2)});
    Architecture a = tiny(2, {5, 4}, ActivationMode::MultiActivation);
    NetworkParams p = initialize(a, 7);
    Vec x(2);
    x << 0.0, 0.35;
    const double base = forward(p, x, 0, plane);
    CHECK(base == forward_with_weight(p, x, 1.0));
    for (int l = 0; l < p.layers(); ++l) {
        p.w_tanh(l).array() += 0.3;
        p.b_tanh(l).array() -= 0.2;
    }
    CHECK(forward(p, x, 0, plane) == base);
}

TEST_CASE("initialization")
{
    Architecture a = tiny(3, {20, 10}, ActivationMode::MultiActivation);
    NetworkParams p = initialize(a, 42);
    NetworkParams q = initialize(a, 42);
    CHECK(p.theta() == q.theta());
    CHECK(initialize(a, 43).theta() != p.theta());
    for (int l = 0; l < p.layers(); ++l) {
        const double bound = std::sqrt(6.0 / (p.fan_in(l) + p.width(l)));
        CHECK(p.w_tanh(l).cwiseAbs().maxCoeff() <= bound);
        CHECK(p.w_gauss(l).cwiseAbs().maxCoeff() <= 0.5 * bound);
        CHECK(p.b_tanh(l).isZero());
    }
    CHECK(p.w_out().cwiseAbs().maxCoeff() <= std::sqrt(6.0 / (10 + 1)));
}

TEST_CASE("jets of single neurons")
{
    NetworkParams t(tiny(1, {1}, ActivationMode::TanhOnly));
    t.w_tanh(0)(0, 0) = 1;
    t.w_out()(0) = 1;
    Jet j = eval_jet(t, Vec::Zero(1), std::nullopt, {1.0, 0.0});
    CHECK(j.value == 0.0);
    CHECK(j.grad[0] == doctest::Approx(1.0));
    CHECK(j.lap == doctest::Approx(0.0));

    NetworkParams g(tiny(1, {1}, ActivationMode::MultiActivation));
    g.w_gauss(0)(0, 0) = 1;
    g.w_out()(0) = 1;
    j = eval_jet(g, Vec::Zero(1), std::nullopt, {0.0, 1.0});
    CHECK(j.value == doctest::Approx(1.0));
    CHECK(j.grad[0] == doctest::Approx(0.0));
    CHECK(j.lap == doctest::Approx(-2.0));

    NetworkParams z(tiny(3, {6, 6}, ActivationMode::MultiActivation));
    z.theta().setRandom();
    z.w_out().setZero();
    z.b_out() = 0;
    Vec x = Vec::Constant(2, 0.2);
    j = eval_jet(z, x, 0.5, {0.4, 0.6});
    CHECK(j.value == 0.0);
    CHECK(j.grad.isZero());
    CHECK(j.lap == 0.0);
    REQUIRE(j.dt);
    CHECK(*j.dt == 0.0);
}
