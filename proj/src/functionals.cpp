#include "rfl/functionals.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rfl {

namespace {

double simpson_sum(const std::function<double(double)>& g, double a, double b, int points) {
  const int intervals = points - 1;
  const double h = (b - a) / intervals;
  double acc = g(a) + g(b);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return acc * h / 3.0;
}

void require_univariate(const Kernel& k, const char* who) {
  if (k.dim != 1) throw UnsupportedConfiguration(std::string(who) + " requires d = 1");
}

}  // namespace

QuadratureResult simpson(const std::function<double(double)>& g, double a, double b, int points) {
  if (points < 3 || points % 2 == 0) throw ArgumentError("simpson: number of points must be odd and >= 3");
  QuadratureResult r;
  r.value = simpson_sum(g, a, b, points);
  r.error_estimate = std::abs(simpson_sum(g, a, b, 2 * points - 1) - r.value) / 15.0;
  return r;
}

Weight::Weight(std::string name) : name_(std::move(name)) {
  if (name_ != "one" && name_ != "sin2pi" && name_ != "zero") {
    throw ArgumentError("unknown beta '" + name_ + "' (one, sin2pi, zero)");
  }
}

Weight::Weight(RkhsFunction f) : name_("rkhs"), function_(std::move(f)) {
  require_univariate(function_->kernel(), "Weight");
}

double Weight::operator()(double t) const {
  if (function_) return (*function_)(t);
  if (name_ == "one") return 1.0;
  if (name_ == "sin2pi") return std::sin(2.0 * std::numbers::pi * t);
  return 0.0;
}

double Weight::l2_norm() const {
  if (name_ == "one") return 1.0;
  if (name_ == "sin2pi") return 1.0 / std::numbers::sqrt2;
  if (name_ == "zero") return 0.0;
  return std::sqrt(simpson([this](double t) { return (*this)(t) * (*this)(t); }, 0.0, 1.0, 1025).value);
}

Link link_from_string(const std::string& name) {
  if (name == "identity") return Link::identity;
  if (name == "tanh") return Link::tanh;
  if (name == "logistic") return Link::logistic;
  if (name == "sin") return Link::sin;
  throw ArgumentError("unknown link '" + name + "' (identity, tanh, logistic, sin)");
}

std::string_view to_string(Link link) {
  switch (link) {
    case Link::identity:
      return "identity";
    case Link::tanh:
      return "tanh";
    case Link::logistic:
      return "logistic";
    case Link::sin:
      return "sin";
  }
  return "identity";
}

double apply_link(Link link, double x) {
  switch (link) {
    case Link::identity:
      return x;
    case Link::tanh:
      return std::tanh(x);
    case Link::logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case Link::sin:
      return std::sin(x);
  }
  return x;
}

double link_lipschitz(Link link) { return link == Link::logistic ? 0.25 : 1.0; }

QuadratureResult linear_integral_checked(const RkhsFunction& f, const Weight& beta, int quadrature_points) {
  require_univariate(f.kernel(), "linear_integral");
  if (quadrature_points < 33 || quadrature_points % 2 == 0) {
    throw ArgumentError("quadrature_points must be odd and >= 33");
  }
  return simpson([&](double t) { return f(t) * beta(t); }, 0.0, 1.0, quadrature_points);
}

double linear_integral(const RkhsFunction& f, const Weight& beta, int quadrature_points) {
  return linear_integral_checked(f, beta, quadrature_points).value;
}

double gflm_map(const RkhsFunction& f, const Weight& beta, Link link, int quadrature_points) {
  return apply_link(link, linear_integral(f, beta, quadrature_points));
}

double l2_energy(const RkhsFunction& f, int quadrature_points) {
  require_univariate(f.kernel(), "l2_energy");
  if (quadrature_points < 33 || quadrature_points % 2 == 0) {
    throw ArgumentError("quadrature_points must be odd and >= 33");
  }
  return simpson(
             [&](double t) {
               const double v = f(t);
               return v * v;
             },
             0.0, 1.0, quadrature_points)
      .value;
}

namespace {

std::function<double(double, double, double)> ode_rhs(const std::string& name) {
  if (name == "u") return [](double, double u, double) { return u; };
  if (name == "h") return [](double, double, double h) { return h; };
  if (name == "u-h") return [](double, double u, double h) { return u - h; };
  if (name == "sin(u)*h") return [](double, double u, double h) { return std::sin(u) * h; };
  throw ArgumentError("unknown ODE right-hand side '" + name + "' (u, h, u-h, sin(u)*h)");
}

double rk4(const RkhsFunction& f, const std::function<double(double, double, double)>& rhs, const OdeSpec& ode,
           int steps) {
  const double dx = (ode.b - ode.a) / steps;
  double h = ode.h0;
  double x = ode.a;
  double u0 = f(x);
  for (int i = 0; i < steps; ++i) {
    const double um = f(x + 0.5 * dx);
    const double u1 = f(x + dx);
    const double k1 = rhs(x, u0, h);
    const double k2 = rhs(x + 0.5 * dx, um, h + 0.5 * dx * k1);
    const double k3 = rhs(x + 0.5 * dx, um, h + 0.5 * dx * k2);
    const double k4 = rhs(x + dx, u1, h + dx * k3);
    h += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(h)) {
      throw DivergenceError("ODE state became non-finite at x = " + format_double(x + dx));
    }
    x = ode.a + (i + 1) * dx;
    u0 = u1;
  }
  return h;
}

}  // namespace

OdeResult ode_solution_map(const RkhsFunction& f, const OdeSpec& ode) {
  require_univariate(f.kernel(), "ode_solution_map");
  if (ode.steps < 16) throw ArgumentError("ode steps must be >= 16");
  if (!(ode.a >= 0.0 && ode.a < ode.b && ode.b <= 1.0)) throw ArgumentError("ode interval must satisfy 0 <= a < b <= 1");
  const auto rhs = ode_rhs(ode.rhs);
  OdeResult r;
  r.value = rk4(f, rhs, ode, ode.steps);
  r.error_estimate = std::abs(rk4(f, rhs, ode, 2 * ode.steps) - r.value) / 15.0;
  return r;
}

FunctionalKind functional_kind_from_string(const std::string& name) {
  if (name == "linear_integral") return FunctionalKind::linear_integral;
  if (name == "gflm") return FunctionalKind::gflm;
  if (name == "ode_map") return FunctionalKind::ode_map;
  if (name == "l2_energy") return FunctionalKind::l2_energy;
  if (name == "constant") return FunctionalKind::constant;
  throw ArgumentError("unknown functional kind '" + name + "'");
}

std::string_view to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::linear_integral:
      return "linear_integral";
    case FunctionalKind::gflm:
      return "gflm";
    case FunctionalKind::ode_map:
      return "ode_map";
    case FunctionalKind::l2_energy:
      return "l2_energy";
    case FunctionalKind::constant:
      return "constant";
  }
  return "gflm";
}

double TargetFunctional::operator()(const RkhsFunction& f) const {
  switch (kind) {
    case FunctionalKind::linear_integral:
      return linear_integral(f, Weight(beta), quadrature_points);
    case FunctionalKind::gflm:
      return gflm_map(f, Weight(beta), link_from_string(link), quadrature_points);
    case FunctionalKind::ode_map:
      return ode_solution_map(f, ode).value;
    case FunctionalKind::l2_energy:
      return l2_energy(f, quadrature_points);
    case FunctionalKind::constant:
      return value;
  }
  return 0.0;
}

double TargetFunctional::holder_constant(const Kernel& kernel) const {
  const double kappa = std::sqrt(kernel_diagonal<double>(kernel));
  switch (kind) {
    case FunctionalKind::linear_integral:
      return Weight(beta).l2_norm() * kappa;
    case FunctionalKind::gflm:
      return link_lipschitz(link_from_string(link)) * Weight(beta).l2_norm() * kappa;
    case FunctionalKind::l2_energy:
      return 2.0 * kappa;
    case FunctionalKind::constant:
      return 0.0;
    case FunctionalKind::ode_map: {
      const double len = ode.b - ode.a;
      if (ode.rhs == "u") return len;
      if (ode.rhs == "h") return 0.0;
      if (ode.rhs == "u-h") return 1.0 - std::exp(-len);
      if (ode.rhs == "sin(u)*h") return std::abs(ode.h0) * len * std::exp(len);
      ode_rhs(ode.rhs);
    }
  }
  return 0.0;
}

void TargetFunctional::validate(const Kernel& kernel) const {
  if (kind != FunctionalKind::constant) require_univariate(kernel, std::string(to_string(kind)).c_str());
  if (kind == FunctionalKind::linear_integral || kind == FunctionalKind::gflm) Weight{beta};
  if (kind == FunctionalKind::gflm) link_from_string(link);
  if (kind == FunctionalKind::ode_map) {
    ode_rhs(ode.rhs);
    if (ode.steps < 16) throw ArgumentError("ode steps must be >= 16");
    if (!(ode.a >= 0.0 && ode.a < ode.b && ode.b <= 1.0)) throw ArgumentError("ode interval must satisfy 0 <= a < b <= 1");
  }
  if (quadrature_points < 33 || quadrature_points % 2 == 0) throw ArgumentError("quadrature_points must be odd and >= 33");
}

std::string TargetFunctional::describe() const {
  switch (kind) {
    case FunctionalKind::linear_integral:
      return "linear_integral(beta=" + beta + ")";
    case FunctionalKind::gflm:
      return "gflm(beta=" + beta + ",link=" + link + ")";
    case FunctionalKind::ode_map:
      return "ode_map(rhs=" + ode.rhs + ")";
    case FunctionalKind::l2_energy:
      return "l2_energy";
    case FunctionalKind::constant:
      return "constant(" + format_double(value) + ")";
  }
  return "";
}

Json to_json(const TargetFunctional& f) {
  Json j;
  j["kind"] = std::string(to_string(f.kind));
  j["beta"] = f.beta;
  j["link"] = f.link;
  j["ode"] = Json{{"rhs", f.ode.rhs}, {"a", f.ode.a}, {"b", f.ode.b}, {"h0", f.ode.h0}, {"steps", f.ode.steps}};
  j["quadrature_points"] = f.quadrature_points;
  if (f.kind == FunctionalKind::constant) j["value"] = f.value;
  return j;
}

TargetFunctional functional_from_json(const Json& j) {
  if (!j.is_object()) throw ArgumentError("functional JSON must be an object");
  TargetFunctional f;
  for (const auto& [key, v] : j.items()) {
    if (key == "kind") {
      f.kind = functional_kind_from_string(v.get<std::string>());
    } else if (key == "beta") {
      f.beta = v.get<std::string>();
    } else if (key == "link") {
      f.link = v.get<std::string>();
    } else if (key == "quadrature_points") {
      f.quadrature_points = v.get<int>();
    } else if (key == "value") {
      f.value = v.get<double>();
    } else if (key == "ode") {
      for (const auto& [ok, ov] : v.items()) {
        if (ok == "rhs") f.ode.rhs = ov.get<std::string>();
        else if (ok == "a") f.ode.a = ov.get<double>();
        else if (ok == "b") f.ode.b = ov.get<double>();
        else if (ok == "h0") f.ode.h0 = ov.get<double>();
        else if (ok == "steps") f.ode.steps = ov.get<int>();
        else throw ArgumentError("functional JSON: unknown ode key '" + ok + "'");
      }
    } else {
      throw ArgumentError("functional JSON: unknown key '" + key + "'");
    }
  }
  return f;
}

double empirical_holder(const TargetFunctional& functional, const Kernel& kernel, int n_pairs, std::uint64_t seed,
                        int eval_points) {
  if (n_pairs < 1) throw ArgumentError("empirical_holder: n_pairs must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const PointSet eval = uniform_grid(eval_points - 1, kernel.dim, std::numeric_limits<Index>::max());
  double best = 0.0;
  for (int p = 0; p < n_pairs; ++p) {
    const RkhsFunction f = sample_unit_ball(kernel, 8, 1.0 - unit(rng), rng());
    const RkhsFunction g = sample_unit_ball(kernel, 8, 1.0 - unit(rng), rng());
    const double dist = sup_error(f, g, eval);
    if (dist == 0.0) continue;
    best = std::max(best, std::abs(functional(f) - functional(g)) / std::pow(dist, functional.exponent()));
  }
  return best;
}

}  // namespace rfl
