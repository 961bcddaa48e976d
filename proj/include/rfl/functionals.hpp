#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "rfl/errors.hpp"
#include "rfl/io.hpp"
#include "rfl/rkhs.hpp"

namespace rfl {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |S_n - S_{2n-1}| / 15
};

/// Composite Simpson on [a, b] with an odd number of nodes, plus a Richardson
/// estimate from the rule with twice as many intervals.
QuadratureResult simpson(const std::function<double(double)>& g, double a, double b, int points);

/// Weight beta(t) on [0,1]: a named closed form ("one", "sin2pi", "zero") or
/// an RKHS function.
class Weight {
 public:
  explicit Weight(std::string name = "one");
  explicit Weight(RkhsFunction f);

  double operator()(double t) const;
  double l2_norm() const;
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::optional<RkhsFunction> function_;
};

enum class Link { identity, tanh, logistic, sin };
Link link_from_string(const std::string& name);
std::string_view to_string(Link link);
double apply_link(Link link, double x);
double link_lipschitz(Link link);

/// int_0^1 f(t) beta(t) dt.
QuadratureResult linear_integral_checked(const RkhsFunction& f, const Weight& beta, int quadrature_points = 129);
double linear_integral(const RkhsFunction& f, const Weight& beta, int quadrature_points = 129);

/// g(int_0^1 f beta).
double gflm_map(const RkhsFunction& f, const Weight& beta, Link link, int quadrature_points = 129);

/// int_0^1 f(t)^2 dt.
double l2_energy(const RkhsFunction& f, int quadrature_points = 129);

/// Right-hand sides h' = rhs(x, u = f(x), h): "u", "h", "u-h", "sin(u)*h".
struct OdeSpec {
  std::string rhs = "u";
  double a = 0.0;
  double b = 1.0;
  double h0 = 0.0;
  int steps = 128;
};

struct OdeResult {
  double value = 0.0;
  double error_estimate = 0.0;  // Richardson estimate from the half step
};

/// h(b) by classical RK4 with `steps` uniform steps.
OdeResult ode_solution_map(const RkhsFunction& f, const OdeSpec& ode);

enum class FunctionalKind { linear_integral, gflm, ode_map, l2_energy, constant };
FunctionalKind functional_kind_from_string(const std::string& name);
std::string_view to_string(FunctionalKind kind);

/// A Hoelder functional F on the unit ball with exponent s = 1.
struct TargetFunctional {
  FunctionalKind kind = FunctionalKind::gflm;
  std::string beta = "one";
  std::string link = "identity";
  OdeSpec ode;
  int quadrature_points = 129;
  double value = 0.0;  // constant kind only

  double operator()(const RkhsFunction& f) const;
  double exponent() const { return 1.0; }
  /// C_F with respect to the sup norm on the unit ball of H_K.
  double holder_constant(const Kernel& kernel) const;
  void validate(const Kernel& kernel) const;
  std::string describe() const;
};

Json to_json(const TargetFunctional& f);
TargetFunctional functional_from_json(const Json& j);

/// Largest |F(f) - F(g)| / |f - g|_inf^s over random unit-ball pairs; the sup
/// norm is taken on `eval_points` uniform nodes.
double empirical_holder(const TargetFunctional& functional, const Kernel& kernel, int n_pairs, std::uint64_t seed,
                        int eval_points = 1025);

}  // namespace rfl
