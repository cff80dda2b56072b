#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace curvetrace {

/// A point of R^n. Dynamic size; n is small (2..8) throughout.
using Point = Eigen::VectorXd;

/// Axis-aligned box with positive width in every coordinate.
class Box {
 public:
  Box(Point lower, Point upper);

  static Box from_bounds(std::span<const std::pair<double, double>> bounds);

  std::size_t dim() const { return static_cast<std::size_t>(lower_.size()); }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }
  Point center() const { return 0.5 * (lower_ + upper_); }
  Point half_widths() const { return 0.5 * (upper_ - lower_); }
  double half_diagonal() const { return half_widths().norm(); }

  bool contains(const Point& p, double tol = 0.0) const;

  /// Smallest distance from p to any face plane; negative when p is outside.
  double boundary_distance(const Point& p) const;

  /// Each side moves inward by `fraction` of that coordinate's width.
  Box shrunk(double fraction) const;
  Box inflated(double amount) const;

  /// Clamps p coordinate-wise into the box.
  Point clamp(const Point& p) const;

 private:
  Point lower_;
  Point upper_;
};

/// Distance from p to the closed segment [a, b].
double point_segment_distance(const Point& p, const Point& a, const Point& b);

/// Removes later points lying within `radius` of an earlier kept point.
std::vector<Point> greedy_dedup(const std::vector<Point>& points, double radius);

/// Lexicographic order on coordinates; used to canonicalise result lists.
bool lex_less(const Point& a, const Point& b);

}  // namespace curvetrace
