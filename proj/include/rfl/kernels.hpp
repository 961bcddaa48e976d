#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rfl/errors.hpp"
#include "rfl/types.hpp"

namespace rfl {

enum class KernelFamily { gaussian, inverse_multiquadric, sobolev };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Translation-invariant Mercer kernel K(u, v) = phi(u - v) on [0,1]^dim.
///
/// gaussian:              exp(-|u-v|^2 / (2 sigma^2))
/// inverse_multiquadric:  (sigma^2 + |u-v|^2)^(-beta)
/// sobolev:               inverse Fourier transform of (1 + |xi|^2)^(-r), i.e. a
///                        Matern kernel of smoothness nu = r - dim/2
///
/// Fourier convention: phi(x) = int phihat(xi) exp(2 pi i xi.x) dxi.
struct Kernel {
  KernelFamily family = KernelFamily::gaussian;
  double sigma = 1.0;
  double beta = 1.0;  // inverse multiquadric exponent
  double r = 1.0;     // Sobolev order
  int dim = 1;

  static Kernel gaussian(double sigma, int dim = 1);
  static Kernel inverse_multiquadric(double sigma, double beta, int dim = 1);
  static Kernel sobolev(double r, int dim = 1);

  /// Throws ArgumentError when the parameters violate the family's constraints.
  void validate() const;

  /// Matern smoothness r - dim/2 (sobolev only).
  double smoothness() const { return r - 0.5 * dim; }

  std::string describe() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

namespace detail {

inline bool is_half_integer(double nu) {
  const double twice = 2.0 * nu;
  const double rounded = std::round(twice);
  return std::abs(twice - rounded) < 1e-12 && static_cast<long>(rounded) % 2 == 1;
}

// phi(0) for the Sobolev kernel: pi^(d/2) Gamma(nu) / Gamma(r).
template <typename Scalar>
Scalar sobolev_diagonal(const Kernel& k) {
  using boost::math::tgamma;
  using std::pow;
  const Scalar pi = boost::math::constants::pi<Scalar>();
  const Scalar nu = Scalar(k.r) - Scalar(k.dim) / 2;
  return pow(pi, Scalar(k.dim) / 2) * tgamma(nu) / tgamma(Scalar(k.r));
}

// Sobolev profile as a function of the distance rho = |u - v|:
//   phi(rho) = 2 pi^r / Gamma(r) * rho^nu * K_nu(2 pi rho).
// For half-integer nu = n + 1/2 the Bessel function is elementary and the
// profile collapses to a degree-n polynomial in z = 2 pi rho times exp(-z).
template <typename Scalar>
Scalar sobolev_profile(const Kernel& k, const Scalar& rho) {
  using boost::math::tgamma;
  using std::exp;
  using std::pow;
  using std::sqrt;
  if (rho == 0) return sobolev_diagonal<Scalar>(k);
  const Scalar pi = boost::math::constants::pi<Scalar>();
  const Scalar two_pi = 2 * pi;
  const Scalar rr = Scalar(k.r);
  const Scalar nu = rr - Scalar(k.dim) / 2;
  const Scalar z = two_pi * rho;
  const Scalar lead = 2 * pow(pi, rr) / tgamma(rr);
  const double nu_d = k.smoothness();
  if (is_half_integer(nu_d)) {
    const int n = static_cast<int>(std::lround(nu_d - 0.5));
    // sum_{j=0}^{n} (n+j)! / (j! (n-j)!) 2^-j z^(n-j)
    Scalar poly = 0;
    for (int j = 0; j <= n; ++j) {
      Scalar coef = 1;
      for (int t = n - j + 1; t <= n + j; ++t) coef *= t;
      for (int t = 2; t <= j; ++t) coef /= t;
      coef /= pow(Scalar(2), j);
      poly += coef * pow(z, n - j);
    }
    return lead * pow(two_pi, -nu) * sqrt(pi / 2) * exp(-z) * poly;
  }
  return lead * pow(rho, nu) * boost::math::cyl_bessel_k(nu, z);
}

}  // namespace detail

/// phi as a function of the squared distance |u - v|^2.
template <typename Scalar = double>
Scalar kernel_profile(const Kernel& k, const Scalar& squared_distance) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  switch (k.family) {
    case KernelFamily::gaussian: {
      const Scalar s = Scalar(k.sigma);
      return exp(-squared_distance / (2 * s * s));
    }
    case KernelFamily::inverse_multiquadric: {
      const Scalar s = Scalar(k.sigma);
      return pow(s * s + squared_distance, -Scalar(k.beta));
    }
    case KernelFamily::sobolev:
      return detail::sobolev_profile<Scalar>(k, sqrt(squared_distance));
  }
  return Scalar(0);
}

/// K(u, v). Coordinates are promoted to Scalar before differencing, so the
/// result is bit-symmetric in (u, v).
template <typename Scalar = double, typename DerivedU, typename DerivedV>
Scalar eval(const Kernel& k, const Eigen::MatrixBase<DerivedU>& u,
            const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != k.dim || v.size() != k.dim) {
    throw ArgumentError("kernel eval: point dimension does not match kernel dim " +
                        std::to_string(k.dim));
  }
  Scalar d2 = 0;
  for (Index i = 0; i < u.size(); ++i) {
    const Scalar diff = Scalar(u(i)) - Scalar(v(i));
    d2 += diff * diff;
  }
  return kernel_profile<Scalar>(k, d2);
}

/// K(u, u), identical for every u.
template <typename Scalar = double>
Scalar kernel_diagonal(const Kernel& k) {
  return kernel_profile<Scalar>(k, Scalar(0));
}

/// phihat(xi). Gaussian and Sobolev only.
double fourier_transform(const Kernel& k, const VecX& xi);
double fourier_transform_radial(const Kernel& k, double squared_norm);

struct HolderData {
  double alpha = 1.0;
  double constant = 0.0;
  bool estimated = false;  // true when the constant is an empirical estimate
};

/// Hoelder exponent and constant of v -> K(u, v), uniformly in u.
HolderData holder_data(const Kernel& k);

/// Largest |K(u,v) - K(u,w)| / |v - w|^alpha over random triples in the cube
/// plus a radial scan of the profile. A lower estimate of the true constant.
double estimate_holder_constant(const Kernel& k, double alpha, int n_triples, std::uint64_t seed);

/// min of phihat over [-m/2, m/2]^d, attained at a corner.
double gamma_m(const Kernel& k, int m);
/// Natural log of gamma_m; finite even when gamma_m underflows.
double log_gamma_m(const Kernel& k, int m);

/// 12 pi Gamma((d+2)/2)^2 / 9.
double m_d_constant(int d);
/// Whether m_d_constant(d) <= 6.38 d, the bound quoted alongside the constant.
bool m_d_within_linear_bound(int d);

}  // namespace rfl
