#include "rfl/geometry.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rfl/io.hpp"

namespace rfl {

PointSet::PointSet(int dim, MatX points) : dim_(dim), points_(std::move(points)) {
  if (dim < 1) throw ArgumentError("PointSet: dim must be >= 1");
  if (points_.rows() != dim) throw ArgumentError("PointSet: point rows must equal dim");
  if ((points_.array() < 0.0).any() || (points_.array() > 1.0).any() || !points_.allFinite()) {
    throw ArgumentError("PointSet: coordinates must lie in [0,1]");
  }
  for (Index i = 0; i < size(); ++i) {
    for (Index j = i + 1; j < size(); ++j) {
      if ((points_.col(i) - points_.col(j)).squaredNorm() == 0.0) {
        throw ArgumentError("PointSet: duplicate points");
      }
    }
  }
}

PointSet uniform_grid(int m, int d, Index max_points) {
  if (m < 1) throw ArgumentError("uniform_grid: m must be >= 1");
  if (d < 1) throw ArgumentError("uniform_grid: d must be >= 1");
  double count = std::pow(static_cast<double>(m + 1), d);
  if (count > static_cast<double>(max_points)) {
    throw ResourceLimitError("uniform_grid: (m+1)^d = " + std::to_string(count) +
                             " exceeds the limit " + std::to_string(max_points));
  }
  const Index n = static_cast<Index>(count);
  PointSet set;
  set.dim_ = d;
  set.grid_m_ = m;
  set.points_.resize(d, n);
  for (Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) set.points_(c, i) = set.coordinate<double>(i, c);
  }
  return set;
}

PointSet midpoint_grid(int n, int d, Index max_points) {
  if (n < 1 || d < 1) throw ArgumentError("midpoint_grid: n and d must be >= 1");
  const double count = std::pow(static_cast<double>(n), d);
  if (count > static_cast<double>(max_points)) {
    throw ResourceLimitError("midpoint_grid: too many points");
  }
  const Index total = static_cast<Index>(count);
  MatX pts(d, total);
  for (Index i = 0; i < total; ++i) {
    Index rest = i;
    for (int c = d - 1; c >= 0; --c) {
      pts(c, i) = (static_cast<double>(rest % n) + 0.5) / n;
      rest /= n;
    }
  }
  return PointSet(d, std::move(pts));
}

PointSet default_probe(int d, Index target) {
  const int m = std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(target), 1.0 / d))) - 1);
  return uniform_grid(m, d, std::numeric_limits<Index>::max());
}

FillDistance fill_distance(const PointSet& points, const PointSet* probe) {
  if (points.size() == 0) throw ArgumentError("fill_distance: empty point set");
  const double sqrt_d = std::sqrt(static_cast<double>(points.dim()));
  if (points.grid_m()) return {sqrt_d / (2.0 * *points.grid_m()), 0.0};
  PointSet fallback;
  if (probe == nullptr) {
    fallback = default_probe(points.dim());
    probe = &fallback;
  }
  if (probe->dim() != points.dim()) throw ArgumentError("fill_distance: probe dimension mismatch");
  double worst = 0.0;
  for (Index p = 0; p < probe->size(); ++p) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < points.size(); ++i) {
      nearest = std::min(nearest, (probe->point(p) - points.point(i)).squaredNorm());
    }
    worst = std::max(worst, nearest);
  }
  double resolution = fill_distance(*probe).value;
  return {std::sqrt(worst), resolution};
}

double separation_radius(const PointSet& points) {
  if (points.size() < 2) throw ArgumentError("separation_radius: need at least two points");
  if (points.grid_m()) return 1.0 / (2.0 * *points.grid_m());
  double closest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < points.size(); ++i) {
    for (Index j = i + 1; j < points.size(); ++j) {
      closest = std::min(closest, (points.point(i) - points.point(j)).squaredNorm());
    }
  }
  return 0.5 * std::sqrt(closest);
}

std::string to_csv(const PointSet& points) {
  std::ostringstream os;
  for (int c = 0; c < points.dim(); ++c) os << (c ? "," : "") << "x" << c;
  os << "\n";
  for (Index i = 0; i < points.size(); ++i) {
    for (int c = 0; c < points.dim(); ++c) os << (c ? "," : "") << format_double(points.points()(c, i));
    os << "\n";
  }
  return os.str();
}

}  // namespace rfl
