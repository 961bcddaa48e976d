#include "rfl/spectral.hpp"

#include <numbers>

namespace rfl {

double smallest_eigenvalue(const MatX& gram) {
  if (gram.rows() == 0) throw ArgumentError("smallest_eigenvalue: empty matrix");
  return jacobi_eigen<double>(gram).values.minCoeff();
}

SmallestEigenvalue smallest_gram_eigenvalue(const Kernel& kernel, const PointSet& points) {
  SmallestEigenvalue out;
  const MatX gram = gram_matrix<double>(kernel, points);
  const double norm = gram.norm();
  const auto jac = jacobi_eigen<double>(gram);
  Index k = 0;
  const double lambda = jac.values.minCoeff(&k);
  if (lambda > 1e-9 * norm) {
    const VecX v = jac.vectors.col(k);
    out.lambda = lambda;
    out.log10_lambda = std::log10(lambda);
    out.relative_residual = (gram * v - lambda * v).norm() / norm;
    out.precision = "double";
    out.method = "jacobi";
    const auto inv = inverse_iteration<double>(gram, 1e-15, 20000, 2);
    out.independent_lambda = inv.factorized ? inv.lambda : std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const Matrix<HighPrecision> hp = gram_matrix<HighPrecision>(kernel, points);
  const auto inv = inverse_iteration<HighPrecision>(hp, 1e-75);
  if (!inv.factorized || !(inv.lambda > 0)) {
    throw SingularGramError("smallest_gram_eigenvalue: Gram matrix is not numerically positive definite for " +
                            kernel.describe());
  }
  using boost::multiprecision::log10;
  out.lambda = to_double(inv.lambda);
  out.log10_lambda = to_double(log10(inv.lambda));
  out.relative_residual = to_double(inv.residual) / norm;
  out.precision = "high";
  out.method = "cholesky+inverse_iteration";
  const auto second = inverse_iteration<HighPrecision>(hp, 1e-75, 20000, 2);
  out.independent_lambda = to_double(second.lambda);
  return out;
}

namespace {

constexpr double kLn10 = std::numbers::ln10;

// log10(1 + 10^x) without overflow.
double log10_one_plus_pow10(double x) {
  if (x > 15) return x;
  return std::log10(1.0 + std::pow(10.0, x));
}

}  // namespace

SpectralReport check_eigen_lower_bound(const Kernel& kernel, int m, int d) {
  if (m < 1) throw ArgumentError("check_eigen_lower_bound: m must be >= 1");
  Kernel k = kernel;
  k.dim = d;
  k.validate();
  SpectralReport r;
  r.kernel = k;
  r.m = m;
  r.d = d;
  const double log10_gamma = log_gamma_m(k, m) / kLn10;
  const PointSet grid = uniform_grid(m, d);
  const SmallestEigenvalue ev = smallest_gram_eigenvalue(k, grid);
  r.lambda_min = ev.lambda;
  r.log10_lambda_min = ev.log10_lambda;
  r.inv_op_norm = 1.0 / ev.lambda;
  r.independent_inv_op_norm = 1.0 / ev.independent_lambda;
  r.log10_bound_m_gamma = std::log10(static_cast<double>(m)) + log10_gamma;
  r.log10_bound_m_pow_d_gamma = d * std::log10(static_cast<double>(m)) + log10_gamma;
  r.bound_m_gamma = std::pow(10.0, r.log10_bound_m_gamma);
  const double slack = std::log10(1.0 - 1e-6);
  r.bound_satisfied = r.log10_lambda_min >= r.log10_bound_m_gamma + slack;
  r.bound_pow_d_satisfied = r.log10_lambda_min >= r.log10_bound_m_pow_d_gamma + slack;
  r.relative_residual = ev.relative_residual;
  r.precision = ev.precision;
  r.method = ev.method;
  return r;
}

Json to_json(const SpectralReport& r) {
  return Json{{"kernel", to_json(r.kernel)},
              {"m", r.m},
              {"d", r.d},
              {"lambda_min", r.lambda_min},
              {"log10_lambda_min", r.log10_lambda_min},
              {"inv_op_norm", r.inv_op_norm},
              {"independent_inv_op_norm", r.independent_inv_op_norm},
              {"bound_m_gamma", r.bound_m_gamma},
              {"log10_bound_m_gamma", r.log10_bound_m_gamma},
              {"log10_bound_m_pow_d_gamma", r.log10_bound_m_pow_d_gamma},
              {"bound_satisfied", r.bound_satisfied},
              {"bound_pow_d_satisfied", r.bound_pow_d_satisfied},
              {"relative_residual", r.relative_residual},
              {"precision", r.precision},
              {"method", r.method}};
}

Table spectral_table(const std::vector<SpectralReport>& reports) {
  Table t({"kernel", "m", "M", "seed", "d", "lambda_min", "log10_lambda_min", "m_gamma", "log10_m_gamma",
           "m_pow_d_gamma", "log10_m_pow_d_gamma", "satisfied", "satisfied_pow_d", "precision"});
  for (const auto& r : reports) {
    t.row() << r.kernel.describe() << r.m << 0 << 0 << r.d << r.lambda_min << r.log10_lambda_min
            << r.bound_m_gamma << r.log10_bound_m_gamma << std::pow(10.0, r.log10_bound_m_pow_d_gamma)
            << r.log10_bound_m_pow_d_gamma << r.bound_satisfied << r.bound_pow_d_satisfied << r.precision;
  }
  return t;
}

HolderConstantG holder_constant_G(const Kernel& kernel, const PointSet& points, double s, double c_f) {
  if (!(s > 0) || s > 1) throw ArgumentError("holder_constant_G: s must be in (0,1]");
  if (c_f < 0) throw ArgumentError("holder_constant_G: C_F must be >= 0");
  HolderConstantG out;
  const HolderData hd = holder_data(kernel);
  out.fill_distance = fill_distance(points).value;
  const double n = static_cast<double>(points.size());
  const double log10_tail = std::log10(std::sqrt(n) * hd.constant) + hd.alpha * std::log10(out.fill_distance);
  const SmallestEigenvalue ev = smallest_gram_eigenvalue(kernel, points);
  out.inv_op_norm = 1.0 / ev.lambda;
  const double log10_cf = c_f > 0 ? std::log10(c_f) : -std::numeric_limits<double>::infinity();
  out.log10_value = log10_cf + s * log10_one_plus_pow10(log10_tail - ev.log10_lambda);
  out.value = c_f > 0 ? std::pow(10.0, out.log10_value) : 0.0;
  if (points.grid_m() && kernel.family != KernelFamily::inverse_multiquadric) {
    const int m = *points.grid_m();
    const double log10_bound = std::log10(static_cast<double>(m)) + log_gamma_m(kernel, m) / kLn10;
    out.log10_fourier_value = log10_cf + s * log10_one_plus_pow10(log10_tail - log10_bound);
  }
  return out;
}

}  // namespace rfl
