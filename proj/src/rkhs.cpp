#include "rfl/rkhs.hpp"

#include <random>

namespace rfl {

template class GramSystem<double>;
template class GramSystem<Extended>;
template class GramSystem<HighPrecision>;

RkhsFunction::RkhsFunction(Kernel kernel, MatX centers, VecX coeffs)
    : kernel_(std::move(kernel)), centers_(std::move(centers)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 1) throw ArgumentError("RkhsFunction: needs at least one center");
  if (centers_.cols() != coeffs_.size()) throw ArgumentError("RkhsFunction: centers/coeffs length mismatch");
  if (centers_.rows() != kernel_.dim) throw ArgumentError("RkhsFunction: center dimension mismatch");
}

double RkhsFunction::operator()(double x) const {
  Eigen::Matrix<double, 1, 1> p;
  p(0) = x;
  return value<double>(p);
}

VecX RkhsFunction::values(const PointSet& points) const {
  VecX out(points.size());
  for (Index i = 0; i < points.size(); ++i) out(i) = (*this)(points.point(i));
  return out;
}

RkhsFunction RkhsFunction::operator*(double s) const { return RkhsFunction(kernel_, centers_, coeffs_ * s); }

RkhsFunction RkhsFunction::operator-(const RkhsFunction& g) const {
  if (!(kernel_ == g.kernel_)) throw ArgumentError("RkhsFunction: kernel mismatch");
  MatX centers(kernel_.dim, size() + g.size());
  centers << centers_, g.centers_;
  VecX coeffs(size() + g.size());
  coeffs << coeffs_, -g.coeffs_;
  return RkhsFunction(kernel_, std::move(centers), std::move(coeffs));
}

RkhsFunction kernel_section(const Kernel& k, const VecX& x) {
  return RkhsFunction(k, MatX(x), VecX::Ones(1));
}

PointSet default_eval_set(const PointSet& nodes, int multiplier) {
  if (nodes.grid_m()) {
    const int m = *nodes.grid_m() * multiplier;
    return uniform_grid(m, nodes.dim(), std::numeric_limits<Index>::max());
  }
  return default_probe(nodes.dim());
}

double rkhs_inner(const RkhsFunction& f, const RkhsFunction& g) {
  if (!(f.kernel() == g.kernel())) throw ArgumentError("rkhs_inner: kernel mismatch");
  return f.coeffs().dot(kernel_matrix<double>(f.kernel(), f.centers(), g.centers()) * g.coeffs());
}

double rkhs_norm(const RkhsFunction& f) { return std::sqrt(std::max(0.0, rkhs_inner(f, f))); }

RkhsFunction sample_unit_ball(const Kernel& kernel, int n_centers, double norm_target, std::uint64_t seed) {
  if (n_centers < 1) throw ArgumentError("sample_unit_ball: n_centers must be >= 1");
  if (!(norm_target > 0) || norm_target > 1) throw ArgumentError("sample_unit_ball: norm_target must be in (0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    MatX centers(kernel.dim, n_centers);
    VecX coeffs(n_centers);
    for (Index j = 0; j < n_centers; ++j) {
      for (Index c = 0; c < kernel.dim; ++c) centers(c, j) = unit(rng);
      coeffs(j) = normal(rng);
    }
    RkhsFunction f(kernel, std::move(centers), std::move(coeffs));
    const double norm = rkhs_norm(f);
    if (norm > 1e-150 && std::isfinite(norm)) return f * (norm_target / norm);
  }
  throw NumericalError("sample_unit_ball: degenerate draws after 8 attempts");
}

double sup_error(const RkhsFunction& f, const RkhsFunction& g, const PointSet& eval_set) {
  if (!(f.kernel() == g.kernel())) throw ArgumentError("sup_error: kernel mismatch");
  double worst = 0.0;
  for (Index p = 0; p < eval_set.size(); ++p) {
    worst = std::max(worst, std::abs(f(eval_set.point(p)) - g(eval_set.point(p))));
  }
  return worst;
}

Table evaluation_trace(const RkhsFunction& f, const RkhsFunction& pf, const GramSystem<double>& system,
                       const PointSet& eval_set) {
  std::vector<std::string> cols;
  for (int c = 0; c < eval_set.dim(); ++c) cols.push_back(eval_set.dim() == 1 ? "x" : "x" + std::to_string(c));
  for (const char* name : {"f", "Pf", "power"}) cols.emplace_back(name);
  Table t(std::move(cols));
  for (Index p = 0; p < eval_set.size(); ++p) {
    auto row = t.row();
    for (int c = 0; c < eval_set.dim(); ++c) row << eval_set.points()(c, p);
    row << f(eval_set.point(p)) << pf(eval_set.point(p)) << power_function(system, eval_set.point(p));
  }
  return t;
}

Json to_json(const RkhsFunction& f) {
  Json centers = Json::array();
  for (Index j = 0; j < f.size(); ++j) centers.push_back(to_json(VecX(f.centers().col(j))));
  return Json{{"kernel", to_json(f.kernel())}, {"centers", centers}, {"coeffs", to_json(f.coeffs())}};
}

RkhsFunction rkhs_function_from_json(const Json& j) {
  Kernel k = kernel_from_json(j.at("kernel"));
  const Json& cs = j.at("centers");
  MatX centers(k.dim, static_cast<Index>(cs.size()));
  for (std::size_t i = 0; i < cs.size(); ++i) {
    VecX p = vector_from_json(cs[i]);
    if (p.size() != k.dim) throw ArgumentError("RkhsFunction JSON: center dimension mismatch");
    centers.col(static_cast<Index>(i)) = p;
  }
  return RkhsFunction(k, std::move(centers), vector_from_json(j.at("coeffs")));
}

}  // namespace rfl
