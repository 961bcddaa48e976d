#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace rfl {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VecX = Vector<double>;
using MatX = Matrix<double>;

// 50 significant decimal digits; enough to resolve power functions down to ~1e-20.
using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

// 100 digits; used for Gram spectra that sit far below double resolution.
using HighPrecision = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                                    boost::multiprecision::et_off>;

template <typename Scalar>
inline double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

}  // namespace rfl
