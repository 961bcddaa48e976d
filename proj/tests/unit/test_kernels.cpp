#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "doctest.h"
#include "rfl/kernels.hpp"

using namespace rfl;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
VecX pt(double x) { return VecX::Constant(1, x); }
}  // namespace

TEST_CASE("kernel values at zero distance and simple offsets") {
  const Kernel g = Kernel::gaussian(1.0);
  CHECK(eval(g, pt(0.3), pt(0.3)) == 1.0);
  CHECK(eval(Kernel::inverse_multiquadric(1.0, 1.0), pt(0.7), pt(0.7)) == 1.0);
  CHECK(eval(g, pt(0.0), pt(1.0)) == Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(eval(Kernel::sobolev(1.0), pt(0.0), pt(1.0)) == Approx(pi * std::exp(-2 * pi)).epsilon(1e-12));
  const double z = 2 * pi * 0.3;
  CHECK(eval(Kernel::sobolev(2.0), pt(0.0), pt(0.3)) == Approx(0.5 * pi * (1 + z) * std::exp(-z)).epsilon(1e-12));
}

TEST_CASE("non half-integer Matern branch agrees with neighbouring orders") {
  // r = 1.2 takes the Bessel branch; at fixed distance the normalised profile grows with r.
  const double at = 0.2;
  const double lo = eval(Kernel::sobolev(1.0), pt(0.0), pt(at)) / kernel_diagonal(Kernel::sobolev(1.0));
  const double mid = eval(Kernel::sobolev(1.2), pt(0.0), pt(at)) / kernel_diagonal(Kernel::sobolev(1.2));
  const double hi = eval(Kernel::sobolev(2.0), pt(0.0), pt(at)) / kernel_diagonal(Kernel::sobolev(2.0));
  CHECK(lo < mid);
  CHECK(mid < hi);
}

TEST_CASE("kernel evaluation is bit symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Kernel ks[] = {Kernel::gaussian(0.5, 2), Kernel::inverse_multiquadric(1.0, 1.0, 2), Kernel::sobolev(1.5, 2)};
  for (const Kernel& k : ks) {
    for (int i = 0; i < 1000; ++i) {
      VecX a(2), b(2);
      a << u(rng), u(rng);
      b << u(rng), u(rng);
      REQUIRE(eval(k, a, b) == eval(k, b, a));
    }
  }
}

TEST_CASE("fourier transform closed forms") {
  CHECK(fourier_transform(Kernel::gaussian(1.0), pt(0.0)) == Approx(std::sqrt(2 * pi)));
  CHECK(fourier_transform(Kernel::sobolev(1.0), pt(0.0)) == Approx(1.0));
  VecX xi(2);
  xi << 1.0, std::sqrt(2.0);
  CHECK(fourier_transform(Kernel::sobolev(2.0, 2), xi) == Approx(1.0 / 16));
  CHECK_THROWS_AS(fourier_transform(Kernel::inverse_multiquadric(1.0, 1.0), pt(0.0)), UnsupportedConfiguration);
}

TEST_CASE("inverse fourier quadrature reproduces the kernel") {
  boost::math::quadrature::ooura_fourier_cos<double> cosine;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (const Kernel& k : {Kernel::gaussian(1.0), Kernel::sobolev(1.0), Kernel::sobolev(2.0), Kernel::sobolev(1.5),
                         Kernel::sobolev(1.2)}) {
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng);
      const auto [integral, err] =
          cosine.integrate([&](double xi) { return fourier_transform_radial(k, xi * xi); }, 2 * pi * x);
      CHECK(2 * integral == Approx(eval(k, pt(0.0), pt(x))).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("gram matrices of random point sets are positive semidefinite") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Kernel& k : {Kernel::gaussian(1.0), Kernel::inverse_multiquadric(1.0, 1.0), Kernel::sobolev(1.0)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + trial % 11;
      MatX pts(1, n);
      for (int i = 0; i < n; ++i) pts(0, i) = u(rng);
      MatX g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = eval(k, pts.col(i), pts.col(j));
      const Eigen::SelfAdjointEigenSolver<MatX> es(g);
      CHECK(es.eigenvalues().minCoeff() >= -1e-10 * g.trace());
    }
  }
}

TEST_CASE("hoelder data") {
  const HolderData g = holder_data(Kernel::gaussian(1.0));
  CHECK(g.alpha == 1.0);
  CHECK(g.constant == Approx(1.0));
  CHECK(holder_data(Kernel::gaussian(0.5)).constant == Approx(4.0));
  CHECK(holder_data(Kernel::inverse_multiquadric(1.0, 1.0, 4)).constant == Approx(4.0));
  const HolderData s = holder_data(Kernel::sobolev(1.0));
  CHECK(s.alpha == Approx(0.5));
  CHECK(s.estimated);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Kernel& k : {Kernel::gaussian(1.0), Kernel::inverse_multiquadric(1.0, 1.0), Kernel::sobolev(2.0)}) {
    const HolderData h = holder_data(k);
    for (int i = 0; i < 10000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      REQUIRE(std::abs(eval(k, pt(a), pt(b)) - eval(k, pt(a), pt(c))) <=
              h.constant * std::pow(std::abs(b - c), h.alpha) * (1 + 1e-12));
    }
  }
}

TEST_CASE("gamma_m") {
  CHECK(gamma_m(Kernel::sobolev(1.0), 2) == Approx(0.5));
  CHECK(gamma_m(Kernel::gaussian(1.0), 0) == Approx(std::sqrt(2 * pi)));
  CHECK(gamma_m(Kernel::gaussian(1.0), 2) == Approx(std::sqrt(2 * pi) * std::exp(-2 * pi * pi)).epsilon(1e-12));
  CHECK(gamma_m(Kernel::gaussian(1.0), 2) == Approx(6.65e-9).epsilon(0.01));
  // brute-force minimum over the cube
  const Kernel g = Kernel::gaussian(1.0);
  double lo = INFINITY;
  for (int i = 0; i <= 2000; ++i) lo = std::min(lo, fourier_transform(g, pt(-1.0 + i * 1e-3)));
  CHECK(gamma_m(g, 2) == Approx(lo).epsilon(1e-12));
  for (const Kernel& k : {Kernel::gaussian(1.0), Kernel::sobolev(2.0), Kernel::sobolev(1.5, 2)}) {
    for (int m = 1; m < 12; ++m) CHECK(log_gamma_m(k, m + 1) <= log_gamma_m(k, m));
  }
  CHECK(std::isfinite(log_gamma_m(Kernel::gaussian(1.0), 200)));
}

TEST_CASE("M_d constant") {
  CHECK(m_d_constant(1) == Approx(pi * pi / 3));
  CHECK(m_d_constant(2) == Approx(4 * pi / 3));
  CHECK(m_d_constant(1) <= 6.38);
  CHECK(m_d_within_linear_bound(1));
  CHECK(m_d_within_linear_bound(4));
  CHECK_FALSE(m_d_within_linear_bound(5));
}

TEST_CASE("kernel parameter validation") {
  CHECK_THROWS_AS(Kernel::gaussian(0.0).validate(), ArgumentError);
  CHECK_THROWS_AS(Kernel::sobolev(0.5, 1).validate(), ArgumentError);
  CHECK_THROWS_AS(Kernel::sobolev(1.0, 2).validate(), ArgumentError);
  CHECK_NOTHROW(Kernel::sobolev(1.5, 2).validate());
  CHECK_NOTHROW(Kernel::sobolev(2.0, 2).validate());
  CHECK(kernel_family_from_string("multiquadric") == KernelFamily::inverse_multiquadric);
  CHECK_THROWS_AS(kernel_family_from_string("laplace"), ArgumentError);
}
