#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "rfl/errors.hpp"
#include "rfl/geometry.hpp"
#include "rfl/io.hpp"
#include "rfl/kernels.hpp"
#include "rfl/types.hpp"

namespace rfl {

/// K[x̄, ȳ] with x̄, ȳ stored one point per column.
template <typename Scalar = double, typename DerivedX, typename DerivedY>
Matrix<Scalar> kernel_matrix(const Kernel& k, const Eigen::MatrixBase<DerivedX>& x,
                             const Eigen::MatrixBase<DerivedY>& y) {
  Matrix<Scalar> out(x.cols(), y.cols());
  for (Index j = 0; j < y.cols(); ++j) {
    for (Index i = 0; i < x.cols(); ++i) out(i, j) = eval<Scalar>(k, x.col(i), y.col(j));
  }
  return out;
}

/// Gram matrix K[t̄] over a point set, in Scalar arithmetic on exact lattice
/// coordinates.
template <typename Scalar = double>
Matrix<Scalar> gram_matrix(const Kernel& k, const PointSet& points) {
  if (points.dim() != k.dim) throw ArgumentError("gram_matrix: point dimension does not match kernel");
  const Index n = points.size();
  std::vector<Vector<Scalar>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pts.push_back(points.point_as<Scalar>(i));
  Matrix<Scalar> g(n, n);
  const Scalar diag = kernel_diagonal<Scalar>(k);
  for (Index j = 0; j < n; ++j) {
    g(j, j) = diag;
    for (Index i = j + 1; i < n; ++i) {
      g(i, j) = eval<Scalar>(k, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
      g(j, i) = g(i, j);
    }
  }
  return g;
}

/// Gram matrix of a node set together with its (possibly jittered) Cholesky
/// factor.
template <typename Scalar = double>
class GramSystem {
 public:
  GramSystem(Kernel kernel, PointSet points, Matrix<Scalar> gram, Matrix<Scalar> factor,
             double jitter, double condition)
      : kernel_(std::move(kernel)),
        points_(std::move(points)),
        gram_(std::move(gram)),
        factor_(std::move(factor)),
        jitter_used_(jitter),
        condition_estimate_(condition) {
    nodes_.reserve(static_cast<std::size_t>(points_.size()));
    for (Index i = 0; i < points_.size(); ++i) nodes_.push_back(points_.point_as<Scalar>(i));
  }

  const Kernel& kernel() const { return kernel_; }
  const PointSet& points() const { return points_; }
  const Matrix<Scalar>& gram() const { return gram_; }
  const Matrix<Scalar>& factor() const { return factor_; }
  double jitter_used() const { return jitter_used_; }
  double condition_estimate() const { return condition_estimate_; }
  Index size() const { return gram_.rows(); }

  /// k_x = (K(t_1, x), ..., K(t_N, x)).
  template <typename Derived>
  Vector<Scalar> kernel_vector(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != kernel_.dim) throw ArgumentError("kernel_vector: point dimension mismatch");
    Vector<Scalar> xs(x.size());
    for (Index c = 0; c < x.size(); ++c) xs(c) = Scalar(x(c));
    Vector<Scalar> out(size());
    for (Index i = 0; i < size(); ++i) out(i) = eval<Scalar>(kernel_, nodes_[static_cast<std::size_t>(i)], xs);
    return out;
  }

  /// (L L^T)^{-1} rhs.
  Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
    Vector<Scalar> y = factor_.template triangularView<Eigen::Lower>().solve(rhs);
    return factor_.transpose().template triangularView<Eigen::Upper>().solve(y);
  }

  /// L^{-1} rhs.
  Vector<Scalar> half_solve(const Vector<Scalar>& rhs) const {
    return factor_.template triangularView<Eigen::Lower>().solve(rhs);
  }

 private:
  Kernel kernel_;
  PointSet points_;
  Matrix<Scalar> gram_;
  Matrix<Scalar> factor_;
  double jitter_used_ = 0.0;
  double condition_estimate_ = 1.0;
  std::vector<Vector<Scalar>> nodes_;
};

namespace detail {

template <typename Scalar>
bool try_cholesky(const Matrix<Scalar>& a, Matrix<Scalar>& factor) {
  Eigen::LLT<Matrix<Scalar>> llt(a);
  if (llt.info() != Eigen::Success) return false;
  factor = llt.matrixL();
  for (Index i = 0; i < factor.rows(); ++i) {
    const double d = to_double(factor(i, i));
    if (!(d > 0) || !std::isfinite(d)) return false;
  }
  return true;
}

}  // namespace detail

/// Factorizes K[t̄], adding diagonal jitter 1e-12 trace/N, doubling up to
/// 1e-6 trace/N, when the plain factorization fails.
template <typename Scalar = double>
GramSystem<Scalar> build_gram(const Kernel& kernel, const PointSet& points,
                              Index max_points = kDefaultMaxGridPoints) {
  kernel.validate();
  if (points.size() == 0) throw ArgumentError("build_gram: empty point set");
  if (points.size() > max_points) throw ResourceLimitError("build_gram: too many points");
  Matrix<Scalar> gram = gram_matrix<Scalar>(kernel, points);
  const Index n = gram.rows();
  const double scale = to_double(Scalar(gram.trace())) / static_cast<double>(n);
  Matrix<Scalar> factor;
  double jitter = 0.0;
  bool ok = detail::try_cholesky<Scalar>(gram, factor);
  for (double j = 1e-12 * scale; !ok && j <= 1e-6 * scale * (1 + 1e-9); j *= 2) {
    Matrix<Scalar> shifted = gram;
    shifted.diagonal().array() += Scalar(j);
    ok = detail::try_cholesky<Scalar>(shifted, factor);
    jitter = j;
  }
  if (!ok) {
    throw SingularGramError("Cholesky failed at maximal jitter for " + kernel.describe() + " with N=" +
                            std::to_string(n));
  }
  const auto d = factor.diagonal();
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double v = to_double(Scalar(d(i) * d(i)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return GramSystem<Scalar>(kernel, points, std::move(gram), std::move(factor), jitter, hi / lo);
}

/// f = sum_j a_j K(., x_j).
class RkhsFunction {
 public:
  RkhsFunction(Kernel kernel, MatX centers, VecX coeffs);

  const Kernel& kernel() const { return kernel_; }
  const MatX& centers() const { return centers_; }
  const VecX& coeffs() const { return coeffs_; }
  Index size() const { return coeffs_.size(); }

  template <typename Scalar = double, typename Derived>
  Scalar value(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != kernel_.dim) throw ArgumentError("RkhsFunction: point dimension mismatch");
    Scalar acc = 0;
    for (Index j = 0; j < size(); ++j) acc += Scalar(coeffs_(j)) * eval<Scalar>(kernel_, centers_.col(j), x);
    return acc;
  }

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& x) const {
    return value<double>(x);
  }
  double operator()(double x) const;

  /// Values at every point of the set.
  VecX values(const PointSet& points) const;

  RkhsFunction operator*(double s) const;
  /// Concatenated expansion of f - g.
  RkhsFunction operator-(const RkhsFunction& g) const;

 private:
  Kernel kernel_;
  MatX centers_;
  VecX coeffs_;
};

/// Single kernel section K(., x).
RkhsFunction kernel_section(const Kernel& k, const VecX& x);

/// psi_i(x).
template <typename Scalar, typename Derived>
Scalar nodal_eval(const GramSystem<Scalar>& system, Index i, const Eigen::MatrixBase<Derived>& x) {
  if (i < 0 || i >= system.size()) throw ArgumentError("nodal_eval: index out of range");
  return system.solve(system.kernel_vector(x))(i);
}

/// Pf = sum_i f(t_i) psi_i, returned as a combination of K(., t_i).
template <typename Scalar>
RkhsFunction project(const GramSystem<Scalar>& system, const VecX& node_values) {
  if (node_values.size() != system.size()) {
    throw ArgumentError("project: expected " + std::to_string(system.size()) + " node values, got " +
                        std::to_string(node_values.size()));
  }
  const Vector<Scalar> c = system.solve(node_values.template cast<Scalar>());
  VecX coeffs(c.size());
  for (Index i = 0; i < c.size(); ++i) coeffs(i) = to_double(c(i));
  return RkhsFunction(system.kernel(), system.points().points(), std::move(coeffs));
}

/// sqrt(max(0, K(x,x) - |L^{-1} k_x|^2)).
template <typename Scalar, typename Derived>
Scalar power_function(const GramSystem<Scalar>& system, const Eigen::MatrixBase<Derived>& x) {
  using std::sqrt;
  const Vector<Scalar> w = system.half_solve(system.kernel_vector(x));
  const Scalar p2 = kernel_diagonal<Scalar>(system.kernel()) - w.squaredNorm();
  return p2 > 0 ? Scalar(sqrt(p2)) : Scalar(0);
}

struct PowerSup {
  double value = 0.0;
  Index argmax = 0;
  double resolution = 0.0;  // fill distance of the evaluation set
  Index eval_points = 0;
};

/// Evaluation set used for sup norms: lattice of 16m cells per axis for grids,
/// the default probe otherwise.
PointSet default_eval_set(const PointSet& nodes, int multiplier = 16);

template <typename Scalar>
PowerSup power_function_sup(const GramSystem<Scalar>& system, const PointSet& eval_set) {
  if (eval_set.dim() != system.kernel().dim) throw ArgumentError("power_function_sup: dimension mismatch");
  PowerSup out;
  out.eval_points = eval_set.size();
  out.resolution = fill_distance(eval_set).value;
  for (Index p = 0; p < eval_set.size(); ++p) {
    const double v = to_double(power_function(system, eval_set.point(p)));
    if (v > out.value) {
      out.value = v;
      out.argmax = p;
    }
  }
  return out;
}

template <typename Scalar>
PowerSup power_function_sup(const GramSystem<Scalar>& system) {
  return power_function_sup(system, default_eval_set(system.points()));
}

/// <f, g>_H = a^T K[x̄, ȳ] b.
double rkhs_inner(const RkhsFunction& f, const RkhsFunction& g);
double rkhs_norm(const RkhsFunction& f);

/// Random element of the unit ball: uniform centers, standard normal
/// coefficients, rescaled to the exact norm `norm_target`.
RkhsFunction sample_unit_ball(const Kernel& kernel, int n_centers, double norm_target, std::uint64_t seed);

/// max over eval_set of |f - g|.
double sup_error(const RkhsFunction& f, const RkhsFunction& g, const PointSet& eval_set);

/// Rows (x..., f, Pf, power) over eval_set.
Table evaluation_trace(const RkhsFunction& f, const RkhsFunction& pf, const GramSystem<double>& system,
                       const PointSet& eval_set);

Json to_json(const RkhsFunction& f);
RkhsFunction rkhs_function_from_json(const Json& j);

extern template class GramSystem<double>;
extern template class GramSystem<Extended>;
extern template class GramSystem<HighPrecision>;

}  // namespace rfl
