#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rfl/functionals.hpp"
#include "rfl/spectral.hpp"

using namespace rfl;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
VecX pt(double x) { return VecX::Constant(1, x); }
const Kernel g1 = Kernel::gaussian(1.0);
RkhsFunction bump() { return kernel_section(g1, pt(0.5)); }
RkhsFunction zero_fn() { return RkhsFunction(g1, MatX::Constant(1, 1, 0.5), VecX::Zero(1)); }
}  // namespace

TEST_CASE("simpson rule") {
  const QuadratureResult cubic = simpson([](double t) { return t * t * t; }, 0.0, 1.0, 3);
  CHECK(cubic.value == Approx(0.25).epsilon(1e-15));
  const QuadratureResult s = simpson([](double t) { return std::sin(t); }, 0.0, pi, 129);
  CHECK(s.value == Approx(2.0).epsilon(1e-8));
  CHECK(s.error_estimate < 1e-8);
  CHECK_THROWS_AS(simpson([](double) { return 1.0; }, 0.0, 1.0, 4), ArgumentError);
}

TEST_CASE("linear integral against the error-function closed form") {
  const double want = std::sqrt(pi / 2) * (std::erf(0.5 / std::sqrt(2.0)) - std::erf(-0.5 / std::sqrt(2.0)));
  CHECK(linear_integral(bump(), Weight("one")) == Approx(want).epsilon(1e-9));
  CHECK(want == Approx(0.959850).epsilon(1e-6));
  CHECK(linear_integral(bump(), Weight("zero")) == 0.0);
  const RkhsFunction f = sample_unit_ball(g1, 6, 0.8, 3), b = sample_unit_ball(g1, 6, 0.5, 4);
  CHECK(linear_integral(f, Weight(b)) == Approx(linear_integral(b, Weight(f))).epsilon(1e-14));
  CHECK_THROWS_AS(linear_integral(kernel_section(Kernel::gaussian(1.0, 2), VecX::Zero(2)), Weight("one")),
                  UnsupportedConfiguration);
}

TEST_CASE("weights") {
  CHECK(Weight("one")(0.3) == 1.0);
  CHECK(Weight("sin2pi")(0.25) == Approx(1.0));
  CHECK(Weight("sin2pi").l2_norm() == Approx(1 / std::sqrt(2.0)));
  CHECK(Weight("zero").l2_norm() == 0.0);
  CHECK_THROWS_AS(Weight("cos"), ArgumentError);
}

TEST_CASE("generalized FLM map") {
  const RkhsFunction f = sample_unit_ball(g1, 6, 0.9, 12);
  CHECK(gflm_map(f, Weight("sin2pi"), Link::identity) == linear_integral(f, Weight("sin2pi")));
  // scale the bump so its integral is exactly 0.5
  const RkhsFunction half = bump() * (0.5 / linear_integral(bump(), Weight("one")));
  CHECK(gflm_map(half, Weight("one"), Link::tanh) == Approx(std::tanh(0.5)).epsilon(1e-12));
  CHECK(std::tanh(0.5) == Approx(0.46212).epsilon(1e-5));
  TargetFunctional t;
  t.kind = FunctionalKind::gflm;
  t.beta = "one";
  t.link = "tanh";
  CHECK(t.holder_constant(g1) == Approx(1.0));
  t.link = "logistic";
  CHECK(t.holder_constant(g1) == Approx(0.25));
  CHECK(link_lipschitz(Link::sin) == 1.0);
  CHECK(apply_link(Link::logistic, 0.0) == 0.5);
}

TEST_CASE("ODE solution map") {
  OdeSpec ode;
  CHECK(ode_solution_map(bump(), ode).value == Approx(linear_integral(bump(), Weight("one"))).epsilon(1e-8));
  ode.rhs = "h";
  ode.h0 = 1.0;
  CHECK(ode_solution_map(bump(), ode).value == Approx(std::exp(1.0)).epsilon(1e-8));
  ode.rhs = "u";
  ode.h0 = 0.0;
  CHECK(ode_solution_map(zero_fn(), ode).value == 0.0);
  ode.steps = 8;
  CHECK_THROWS_AS(ode_solution_map(bump(), ode), ArgumentError);
  ode.steps = 128;
  ode.rhs = "u*u";
  CHECK_THROWS_AS(ode_solution_map(bump(), ode), ArgumentError);
}

TEST_CASE("l2 energy") {
  CHECK(l2_energy(zero_fn()) == 0.0);
  const double want = std::sqrt(pi) * std::erf(0.5);
  CHECK(l2_energy(bump()) == Approx(want).epsilon(1e-9));
  CHECK(want == Approx(0.922562).epsilon(1e-6));
  const RkhsFunction f = sample_unit_ball(g1, 8, 0.6, 5);
  CHECK(l2_energy(f * 2.0) == Approx(4 * l2_energy(f)).epsilon(1e-10));
}

TEST_CASE("empirical hoelder ratios stay under the analytic constants") {
  TargetFunctional lin;
  lin.kind = FunctionalKind::gflm;
  lin.beta = "one";
  lin.link = "identity";
  CHECK(empirical_holder(lin, g1, 200, 1) <= lin.holder_constant(g1) * (1 + 1e-6));
  TargetFunctional energy;
  energy.kind = FunctionalKind::l2_energy;
  CHECK(empirical_holder(energy, g1, 200, 2) <= 2.0 * (1 + 1e-6));
  TargetFunctional constant;
  constant.kind = FunctionalKind::constant;
  constant.value = 3.0;
  CHECK(empirical_holder(constant, g1, 50, 3) == 0.0);
  TargetFunctional tanh_flm = lin;
  tanh_flm.link = "tanh";
  tanh_flm.beta = "sin2pi";
  CHECK(empirical_holder(tanh_flm, g1, 200, 4) <= tanh_flm.holder_constant(g1) * (1 + 1e-6));
  TargetFunctional ode;
  ode.kind = FunctionalKind::ode_map;
  ode.ode.rhs = "u-h";
  CHECK(empirical_holder(ode, g1, 200, 5) <= ode.holder_constant(g1) * (1 + 1e-6));
}

TEST_CASE("finite-dimensional map obeys its hoelder constant") {
  TargetFunctional lin;
  lin.kind = FunctionalKind::linear_integral;
  const PointSet nodes = uniform_grid(4, 1);
  const auto sys = build_gram<double>(g1, nodes);
  const double cg = holder_constant_G(g1, nodes, 1.0, lin.holder_constant(g1)).value;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const VecX x = sample_unit_ball(g1, 8, 1.0 - u(rng), rng()).values(nodes);
    const VecX y = sample_unit_ball(g1, 8, 1.0 - u(rng), rng()).values(nodes);
    const double num = std::abs(lin(project(sys, x)) - lin(project(sys, y)));
    worst = std::max(worst, num / (x - y).cwiseAbs().maxCoeff());
  }
  CHECK(worst <= cg);
}

TEST_CASE("functional json and validation") {
  TargetFunctional f;
  f.kind = FunctionalKind::ode_map;
  f.ode.rhs = "sin(u)*h";
  f.ode.h0 = 0.5;
  const TargetFunctional back = functional_from_json(to_json(f));
  CHECK(back.kind == f.kind);
  CHECK(back.ode.rhs == f.ode.rhs);
  CHECK(back.ode.h0 == f.ode.h0);
  CHECK_THROWS_AS(functional_from_json(Json{{"kind", "gflm"}, {"weight", "one"}}), ArgumentError);
  TargetFunctional bad;
  bad.quadrature_points = 64;
  CHECK_THROWS_AS(bad.validate(g1), ArgumentError);
  TargetFunctional c;
  c.kind = FunctionalKind::constant;
  CHECK_NOTHROW(c.validate(Kernel::gaussian(1.0, 2)));
  CHECK(c.holder_constant(g1) == 0.0);
}
