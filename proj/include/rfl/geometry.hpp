#pragma once

#include <optional>
#include <string>

#include "rfl/errors.hpp"
#include "rfl/types.hpp"

namespace rfl {

inline constexpr Index kDefaultMaxGridPoints = 4096;

/// Ordered point set in [0,1]^dim, stored one point per column.
///
/// Sets built by uniform_grid remember m, which lets callers recover lattice
/// coordinates k/m exactly in any scalar type.
class PointSet {
 public:
  PointSet() = default;
  /// Validates coordinates in [0,1] and distinctness.
  PointSet(int dim, MatX points);

  int dim() const { return dim_; }
  Index size() const { return points_.cols(); }
  const MatX& points() const { return points_; }
  auto point(Index i) const { return points_.col(i); }
  const std::optional<int>& grid_m() const { return grid_m_; }

  /// Coordinate c of point i in Scalar precision; exact k/m for lattices.
  template <typename Scalar>
  Scalar coordinate(Index i, int c) const {
    if (grid_m_) {
      Index rest = i;
      Index digit = 0;
      for (int k = dim_ - 1; k >= c; --k) {
        digit = rest % (*grid_m_ + 1);
        rest /= (*grid_m_ + 1);
      }
      return Scalar(static_cast<long>(digit)) / Scalar(*grid_m_);
    }
    return Scalar(points_(c, i));
  }

  template <typename Scalar>
  Vector<Scalar> point_as(Index i) const {
    Vector<Scalar> p(dim_);
    for (int c = 0; c < dim_; ++c) p(c) = coordinate<Scalar>(i, c);
    return p;
  }

  friend PointSet uniform_grid(int m, int d, Index max_points);

 private:
  int dim_ = 0;
  MatX points_;
  std::optional<int> grid_m_;
};

/// {0, 1/m, ..., 1}^d in row-major order (last coordinate fastest).
PointSet uniform_grid(int m, int d, Index max_points = kDefaultMaxGridPoints);

/// Fill distance together with the probe's own covering radius.
struct FillDistance {
  double value = 0.0;
  double resolution = 0.0;  // 0 when computed analytically
};

/// Exact sqrt(d)/(2m) for lattices; otherwise the max over `probe` of the
/// distance to the nearest point. The default probe is a lattice of about
/// 2048 points.
FillDistance fill_distance(const PointSet& points, const PointSet* probe = nullptr);

/// Half of the minimal pairwise distance.
double separation_radius(const PointSet& points);

/// Cell midpoints {(i + 1/2)/n}^d; never coincides with a lattice node k/m
/// when n is a multiple of m.
PointSet midpoint_grid(int n, int d, Index max_points = 1 << 20);

/// Lattice with roughly `target` points used as a default probe.
PointSet default_probe(int d, Index target = 2048);

std::string to_csv(const PointSet& points);

}  // namespace rfl
