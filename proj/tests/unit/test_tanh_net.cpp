#include <cmath>
#include <random>

#include "doctest.h"
#include "rfl/tanh_net.hpp"

using namespace rfl;
using doctest::Approx;

namespace {

// Central differences of the loss in every coordinate.
VecX numeric_gradient(TanhNetwork net, const MatX& xs, const VecX& ys, double step) {
  VecX theta = net.flatten();
  VecX grad(theta.size());
  TanhNetwork scratch = net;
  for (Index i = 0; i < theta.size(); ++i) {
    VecX p = theta, q = theta;
    p(i) += step;
    q(i) -= step;
    net.assign(p);
    const double up = loss_and_gradient(net, xs, ys, scratch);
    net.assign(q);
    const double down = loss_and_gradient(net, xs, ys, scratch);
    grad(i) = (up - down) / (2 * step);
  }
  return grad;
}

}  // namespace

TEST_CASE("forward pass") {
  TanhNetwork net = init_network(3, 4, 5, 1);
  net.a.setZero();
  CHECK(forward(net, VecX::Constant(3, 0.7)) == 0.0);
  TanhNetwork z = TanhNetwork::zeros(3, 4, 5);
  z.a.setOnes();
  CHECK(forward(z, VecX::Constant(3, 0.2)) == 0.0);
  TanhNetwork unit = TanhNetwork::zeros(1, 1, 1);
  unit.W1(0, 0) = 1;
  unit.W2(0, 0) = 1;
  unit.a(0) = 1;
  CHECK(forward(unit, VecX::Constant(1, 0.5)) == Approx(std::tanh(std::tanh(0.5))));
  CHECK(forward(unit, VecX::Constant(1, 0.5)) == Approx(0.431808).epsilon(1e-6));
  unit.b1(0) = 0.25;
  CHECK(forward(unit, VecX::Constant(1, 0.5)) == Approx(std::tanh(std::tanh(0.25))));
  CHECK_THROWS_AS(forward(unit, VecX::Zero(2)), ArgumentError);
}

TEST_CASE("initialisation") {
  const TanhNetwork a = init_network(4, 6, 3, 9), b = init_network(4, 6, 3, 9);
  CHECK(a == b);
  CHECK(a.b1.isZero(0.0));
  CHECK(a.b2.isZero(0.0));
  CHECK_FALSE(a == init_network(4, 6, 3, 10));
  CHECK_THROWS_AS(init_network(4, 0, 3, 1), ArgumentError);
  CHECK_THROWS_AS(init_network(4, 3, 0, 1), ArgumentError);
  CHECK(a.param_count() == 4 * 6 + 6 + 6 * 3 + 3 + 3);
}

TEST_CASE("flatten and assign round trip") {
  TanhNetwork a = init_network(3, 2, 4, 2);
  const VecX theta = a.flatten();
  CHECK(theta(0) == a.W1(0, 0));
  CHECK(theta(1) == a.W1(1, 0));
  TanhNetwork b = TanhNetwork::zeros(3, 2, 4);
  b.assign(theta);
  CHECK(a == b);
  CHECK(network_from_json(to_json(a)) == a);
}

TEST_CASE("backprop matches central differences") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Index dim = 2 + trial, w1 = 3 + trial, w2 = 2 + 2 * trial;
    TanhNetwork net = init_network(dim, w1, w2, 100 + trial);
    for (Index i = 0; i < net.b1.size(); ++i) net.b1(i) = 0.3 * n(rng);
    for (Index i = 0; i < net.b2.size(); ++i) net.b2(i) = 0.3 * n(rng);
    MatX xs(dim, 7);
    VecX ys(7);
    for (Index i = 0; i < xs.size(); ++i) xs(i) = n(rng);
    for (Index i = 0; i < ys.size(); ++i) ys(i) = n(rng);
    TanhNetwork grad;
    loss_and_gradient(net, xs, ys, grad);
    const VecX analytic = grad.flatten();
    const VecX numeric = numeric_gradient(net, xs, ys, 1e-5);
    for (Index i = 0; i < analytic.size(); ++i) {
      CHECK(std::abs(analytic(i) - numeric(i)) <= 1e-6 * std::max(1.0, std::abs(numeric(i))));
    }
  }
}

TEST_CASE("gradient edge cases") {
  TanhNetwork net = init_network(3, 4, 4, 5);
  MatX xs(3, 4);
  xs.setRandom();
  const VecX exact = forward_batch(net, xs);
  TanhNetwork grad;
  CHECK(loss_and_gradient(net, xs, exact, grad) < 1e-30);
  CHECK(grad.flatten().cwiseAbs().maxCoeff() < 1e-15);
  VecX ys(4);
  ys << 0.1, -0.4, 0.3, 0.9;
  TanhNetwork g1, g2;
  const double l1 = loss_and_gradient(net, xs, ys, g1);
  MatX xs2(3, 8);
  xs2 << xs, xs;
  VecX ys2(8);
  ys2 << ys, ys;
  const double l2 = loss_and_gradient(net, xs2, ys2, g2);
  CHECK(l1 == Approx(l2).epsilon(1e-15));
  CHECK((g1.flatten() - g2.flatten()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("training") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dataset d;
  d.x_train.resize(3, 1000);
  d.x_test.resize(3, 50);
  for (Index i = 0; i < d.x_train.size(); ++i) d.x_train(i) = u(rng);
  for (Index i = 0; i < d.x_test.size(); ++i) d.x_test(i) = u(rng);
  d.y_train = VecX::Constant(1000, 0.37);
  d.y_test = VecX::Constant(50, 0.37);
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.batch_size = 8;
  cfg.learning_rate = 3e-3;
  cfg.schedule = "cosine";
  TanhNetwork net = init_network(3, 8, 8, 1);
  const TrainReport r = train(net, d, cfg);
  CHECK(r.heldout_mean_abs <= 1e-3);
  CHECK(r.heldout_sup_error >= r.heldout_mean_abs);
  CHECK(r.loss_curve.size() == 201);
  for (double l : r.loss_curve) CHECK(std::isfinite(l));

  cfg.epochs = 0;
  TanhNetwork fresh = init_network(3, 8, 8, 1);
  const VecX before = forward_batch(fresh, d.x_test);
  const TrainReport z = train(fresh, d, cfg);
  CHECK(z.loss_curve.size() == 1);
  CHECK(z.final_train_mse == z.initial_train_mse);
  CHECK(z.heldout_mean_abs == Approx((before.array() - 0.37).abs().mean()));

  cfg.epochs = 5;
  TanhNetwork n1 = init_network(3, 8, 8, 2), n2 = init_network(3, 8, 8, 2);
  const TrainReport a = train(n1, d, cfg), b = train(n2, d, cfg);
  CHECK(n1 == n2);
  CHECK(a.loss_curve == b.loss_curve);
}

TEST_CASE("theoretical widths") {
  const TheoreticalWidths one = theoretical_widths(1, 10);
  CHECK(one.w1 == 9);
  CHECK(one.w2 == 60);
  const TheoreticalWidths two = theoretical_widths(2, 25);
  CHECK(two.w1 == 48);
  CHECK(two.w2 == 93750);
  const TheoreticalWidths three = theoretical_widths(3, 46);
  CHECK(three.w1 == 135);
  CHECK(three.hypothesis_holds);
  CHECK_FALSE(theoretical_widths(3, 45).hypothesis_holds);
  CHECK(theoretical_widths(200, 1000).overflow);
}
