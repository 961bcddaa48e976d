#include "rfl/kernels.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>

namespace rfl {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::inverse_multiquadric:
      return "inverse_multiquadric";
    case KernelFamily::sobolev:
      return "sobolev";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "inverse_multiquadric" || name == "multiquadric") {
    return KernelFamily::inverse_multiquadric;
  }
  if (name == "sobolev") return KernelFamily::sobolev;
  throw ArgumentError("unknown kernel family '" + std::string(name) + "'");
}

Kernel Kernel::gaussian(double sigma, int dim) {
  Kernel k{KernelFamily::gaussian, sigma, 1.0, 1.0, dim};
  k.validate();
  return k;
}

Kernel Kernel::inverse_multiquadric(double sigma, double beta, int dim) {
  Kernel k{KernelFamily::inverse_multiquadric, sigma, beta, 1.0, dim};
  k.validate();
  return k;
}

Kernel Kernel::sobolev(double r, int dim) {
  Kernel k{KernelFamily::sobolev, 1.0, 1.0, r, dim};
  k.validate();
  return k;
}

void Kernel::validate() const {
  if (dim < 1) throw ArgumentError("kernel dim must be >= 1");
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ArgumentError("kernel sigma must be > 0");
  if (family == KernelFamily::inverse_multiquadric && !(beta > 0)) {
    throw ArgumentError("inverse multiquadric beta must be > 0");
  }
  if (family == KernelFamily::sobolev) {
    const double nu = smoothness();
    if (!(nu > 0)) throw ArgumentError("sobolev kernel requires r > dim/2");
  }
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os << to_string(family);
  switch (family) {
    case KernelFamily::gaussian:
      os << "(sigma=" << sigma;
      break;
    case KernelFamily::inverse_multiquadric:
      os << "(sigma=" << sigma << ",beta=" << beta;
      break;
    case KernelFamily::sobolev:
      os << "(r=" << r;
      break;
  }
  os << ",d=" << dim << ")";
  return os.str();
}

double fourier_transform_radial(const Kernel& k, double squared_norm) {
  constexpr double pi = std::numbers::pi;
  switch (k.family) {
    case KernelFamily::gaussian: {
      const double s2 = k.sigma * k.sigma;
      return std::pow(2.0 * s2 * pi, 0.5 * k.dim) * std::exp(-2.0 * s2 * pi * pi * squared_norm);
    }
    case KernelFamily::sobolev:
      return std::pow(1.0 + squared_norm, -k.r);
    case KernelFamily::inverse_multiquadric:
      break;
  }
  throw UnsupportedConfiguration(
      "Fourier transform of the inverse multiquadric kernel is not implemented");
}

double fourier_transform(const Kernel& k, const VecX& xi) {
  if (xi.size() != k.dim) throw ArgumentError("fourier_transform: dimension mismatch");
  return fourier_transform_radial(k, xi.squaredNorm());
}

double log_gamma_m(const Kernel& k, int m) {
  if (m < 0) throw ArgumentError("gamma_m: m must be >= 0");
  constexpr double pi = std::numbers::pi;
  const double corner = 0.25 * k.dim * static_cast<double>(m) * m;  // |xi|^2 at the cube corner
  switch (k.family) {
    case KernelFamily::gaussian: {
      const double s2 = k.sigma * k.sigma;
      return 0.5 * k.dim * std::log(2.0 * s2 * pi) - 2.0 * s2 * pi * pi * corner;
    }
    case KernelFamily::sobolev:
      return -k.r * std::log1p(corner);
    case KernelFamily::inverse_multiquadric:
      break;
  }
  throw UnsupportedConfiguration("gamma_m requires a Fourier transform (gaussian or sobolev)");
}

double gamma_m(const Kernel& k, int m) { return std::exp(log_gamma_m(k, m)); }

double m_d_constant(int d) {
  if (d < 1) throw ArgumentError("m_d_constant: d must be >= 1");
  const double g = std::tgamma(0.5 * (d + 2));
  return 12.0 * std::numbers::pi * g * g / 9.0;
}

bool m_d_within_linear_bound(int d) { return m_d_constant(d) <= 6.38 * d; }

double estimate_holder_constant(const Kernel& k, double alpha, int n_triples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  VecX u(k.dim), v(k.dim), w(k.dim);
  double best = 0.0;
  for (int t = 0; t < n_triples; ++t) {
    for (int i = 0; i < k.dim; ++i) {
      u(i) = unit(rng);
      v(i) = unit(rng);
      w(i) = unit(rng);
    }
    const double dist = (v - w).norm();
    if (dist == 0.0) continue;
    const double ratio = std::abs(eval(k, u, v) - eval(k, u, w)) / std::pow(dist, alpha);
    best = std::max(best, ratio);
  }
  // Radial scan: pairs of radii (a, b) realised by u = 0, v = a e1, w = b e1.
  const double reach = std::sqrt(static_cast<double>(k.dim));
  constexpr int kScan = 4096;
  auto phi = [&](double rho) { return kernel_profile<double>(k, rho * rho); };
  const double phi0 = phi(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double rho = reach * std::pow(1e-6, 1.0 - static_cast<double>(i) / kScan);
    best = std::max(best, std::abs(phi0 - phi(rho)) / std::pow(rho, alpha));
    const double a = reach * (i - 1) / kScan;
    const double b = reach * i / kScan;
    best = std::max(best, std::abs(phi(a) - phi(b)) / std::pow(b - a, alpha));
  }
  return best;
}

namespace {

double cached_sobolev_constant(const Kernel& k, double alpha) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, double> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_pair(k.r, k.dim);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double value = estimate_holder_constant(k, alpha, 100000, 0x5eed5eedULL);
  cache.emplace(key, value);
  return value;
}

}  // namespace

HolderData holder_data(const Kernel& k) {
  const double sqrt_d = std::sqrt(static_cast<double>(k.dim));
  switch (k.family) {
    case KernelFamily::inverse_multiquadric:
      return {1.0, 2.0 * sqrt_d * k.beta * std::pow(k.sigma, -2.0 * k.beta - 2.0), false};
    case KernelFamily::gaussian:
      return {1.0, sqrt_d / (k.sigma * k.sigma), false};
    case KernelFamily::sobolev: {
      const double alpha = std::min(1.0, k.smoothness());
      return {alpha, cached_sobolev_constant(k, alpha), true};
    }
  }
  return {};
}

}  // namespace rfl
