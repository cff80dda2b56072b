#include "curvetrace/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <stdexcept>

namespace curvetrace {

Box::Box(Point lower, Point upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw std::invalid_argument("box: lower and upper corners must have the same positive dimension");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(upper_[i] > lower_[i])) {
      throw std::invalid_argument("box: zero or negative width in coordinate " + std::to_string(i));
    }
  }
}

Box Box::from_bounds(std::span<const std::pair<double, double>> bounds) {
  Point lo(static_cast<Eigen::Index>(bounds.size()));
  Point hi(static_cast<Eigen::Index>(bounds.size()));
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    lo[static_cast<Eigen::Index>(i)] = bounds[i].first;
    hi[static_cast<Eigen::Index>(i)] = bounds[i].second;
  }
  return Box(std::move(lo), std::move(hi));
}

bool Box::contains(const Point& p, double tol) const {
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (p[i] < lower_[i] - tol || p[i] > upper_[i] + tol) return false;
  }
  return true;
}

double Box::boundary_distance(const Point& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    d = std::min({d, p[i] - lower_[i], upper_[i] - p[i]});
  }
  return d;
}

Box Box::shrunk(double fraction) const {
  const Point w = upper_ - lower_;
  return Box(lower_ + fraction * w, upper_ - fraction * w);
}

Box Box::inflated(double amount) const {
  return Box(lower_.array() - amount, upper_.array() + amount);
}

Point Box::clamp(const Point& p) const { return p.cwiseMax(lower_).cwiseMin(upper_); }

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

std::vector<Point> greedy_dedup(const std::vector<Point>& points, double radius) {
  std::vector<Point> kept;
  for (const auto& p : points) {
    const bool near = std::any_of(kept.begin(), kept.end(),
                                  [&](const Point& k) { return (k - p).norm() <= radius; });
    if (!near) kept.push_back(p);
  }
  return kept;
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace curvetrace
