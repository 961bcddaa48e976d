#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "rfl/errors.hpp"
#include "rfl/io.hpp"
#include "rfl/rkhs.hpp"

namespace rfl {

template <typename Scalar>
struct EigenDecomposition {
  Vector<Scalar> values;
  Matrix<Scalar> vectors;  // column j pairs with values(j)
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix, row-by-row sweep order.
/// Runs until the off-diagonal Frobenius norm drops below tol * |A|_F, then
/// two polishing sweeps.
template <typename Scalar>
EigenDecomposition<Scalar> jacobi_eigen(const Matrix<Scalar>& a, double tol = 1e-12, int max_sweeps = 60) {
  using std::abs;
  using std::sqrt;
  if (a.rows() != a.cols()) throw ArgumentError("jacobi_eigen: matrix must be square");
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (a(i, j) != a(j, i)) throw ArgumentError("jacobi_eigen: matrix is not symmetric");
    }
  }
  Matrix<Scalar> m = a;
  Matrix<Scalar> v = Matrix<Scalar>::Identity(n, n);
  const Scalar norm = m.norm();
  const Scalar target = norm * Scalar(tol);
  auto off = [&] {
    Scalar s = 0;
    for (Index j = 0; j < n; ++j)
      for (Index i = j + 1; i < n; ++i) s += 2 * m(i, j) * m(i, j);
    return sqrt(s);
  };
  EigenDecomposition<Scalar> out;
  auto sweep = [&] {
    ++out.sweeps;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = m(p, q);
        if (apq == 0) continue;
        const Scalar theta = (m(q, q) - m(p, p)) / (2 * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        const Scalar c = 1 / sqrt(t * t + 1);
        const Scalar s = t * c;
        for (Index k = 0; k < n; ++k) {
          const Scalar mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0;
        m(q, p) = 0;
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  };
  while (out.sweeps < max_sweeps && off() > target) sweep();
  for (int extra = 0; extra < 2 && off() > 0; ++extra) sweep();
  out.values = m.diagonal();
  out.vectors = std::move(v);
  return out;
}

/// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi, in double.
double smallest_eigenvalue(const MatX& gram);

template <typename Scalar>
struct InverseIteration {
  Scalar lambda = 0;
  Vector<Scalar> vector;
  Scalar residual = 0;  // |A v - lambda v| with |v| = 1
  int iterations = 0;
  bool factorized = false;
};

/// Smallest eigenpair of a symmetric positive definite matrix by inverse
/// iteration on its Cholesky factor, from a seeded random start vector.
/// Stops once |A v - lambda v| <= tol * |A|_F, or when the residual is small
/// and has stopped improving.
template <typename Scalar>
InverseIteration<Scalar> inverse_iteration(const Matrix<Scalar>& a, double tol = 1e-14, int max_iter = 20000,
                                           std::uint64_t seed = 1) {
  const Index n = a.rows();
  InverseIteration<Scalar> out;
  Eigen::LLT<Matrix<Scalar>> llt(a);
  if (llt.info() != Eigen::Success) return out;
  out.factorized = true;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v(i) = Scalar(unit(rng));
  v /= v.norm();
  const Scalar target = Scalar(tol) * a.norm();
  const Scalar floor = Scalar(1e-6) * a.norm();
  Scalar best = std::numeric_limits<Scalar>::infinity();
  int stagnant = 0;
  for (out.iterations = 1; out.iterations <= max_iter; ++out.iterations) {
    v = llt.solve(v);
    v /= v.norm();
    const Vector<Scalar> av = a * v;
    out.lambda = v.dot(av);
    out.residual = (av - out.lambda * v).norm();
    if (out.residual <= target) break;
    if (out.residual < best * Scalar(0.999)) {
      best = out.residual;
      stagnant = 0;
    } else if (out.residual < floor && ++stagnant >= 500) {
      break;
    }
  }
  out.vector = v;
  return out;
}

/// Smallest Gram eigenvalue with automatic precision: double Jacobi first,
/// 100-digit Cholesky plus inverse iteration when the value falls below
/// 1e-9 |K|_F.
struct SmallestEigenvalue {
  double lambda = 0.0;
  double log10_lambda = 0.0;
  double independent_lambda = 0.0;  // inverse iteration estimate
  double relative_residual = 0.0;   // |K v - lambda v| / |K|_F
  std::string precision;
  std::string method;
};

SmallestEigenvalue smallest_gram_eigenvalue(const Kernel& kernel, const PointSet& points);

struct SpectralReport {
  Kernel kernel;
  int m = 0;
  int d = 0;
  double lambda_min = 0.0;
  double log10_lambda_min = 0.0;
  double inv_op_norm = 0.0;
  double independent_inv_op_norm = 0.0;
  double bound_m_gamma = 0.0;  // may underflow to 0; see log10
  double log10_bound_m_gamma = 0.0;
  double log10_bound_m_pow_d_gamma = 0.0;
  bool bound_satisfied = false;
  bool bound_pow_d_satisfied = false;
  double relative_residual = 0.0;
  std::string precision;
  std::string method;
};

/// lambda_N of uniform_grid(m, d) against m * Gamma_m and m^d * Gamma_m.
SpectralReport check_eigen_lower_bound(const Kernel& kernel, int m, int d);

Json to_json(const SpectralReport& r);
Table spectral_table(const std::vector<SpectralReport>& reports);

struct HolderConstantG {
  double value = 0.0;
  double log10_value = 0.0;
  double inv_op_norm = 0.0;
  double fill_distance = 0.0;
  double log10_fourier_value = std::numeric_limits<double>::quiet_NaN();  // with 1/(m Gamma_m)
};

/// C_F (1 + |K^{-1}|_op sqrt(N) C_K h^alpha)^s using the computed operator
/// norm; the Fourier variant is filled in for lattices of gaussian/sobolev
/// kernels.
HolderConstantG holder_constant_G(const Kernel& kernel, const PointSet& points, double s, double c_f);

template <typename Scalar>
HolderConstantG holder_constant_G(const GramSystem<Scalar>& system, double s, double c_f) {
  return holder_constant_G(system.kernel(), system.points(), s, c_f);
}

}  // namespace rfl
