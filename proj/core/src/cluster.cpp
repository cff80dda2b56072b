#include "curvetrace/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace curvetrace {

namespace {

bool try_radius(const std::vector<Point>& pts, const std::vector<std::size_t>& order, double r,
                std::vector<Cluster>& out) {
  out.clear();
  std::vector<int> owner(pts.size(), -1);
  for (std::size_t i : order) {
    if (owner[i] >= 0) continue;
    Cluster c;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (owner[j] < 0 && (pts[j] - pts[i]).norm() <= r) idx.push_back(j);
    }
    c.center = Point::Zero(pts[i].size());
    for (std::size_t j : idx) {
      owner[j] = static_cast<int>(out.size());
      c.members.push_back(pts[j]);
      c.center += pts[j];
    }
    c.center /= static_cast<double>(idx.size());
    c.radius = r;
    out.push_back(std::move(c));
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = (pts[j] - out[k].center).norm();
      if (owner[j] == static_cast<int>(k) ? d > r : d <= 3.0 * r) return false;
    }
    for (std::size_t l = 0; l < k; ++l) {
      if ((out[k].center - out[l].center).norm() < 3.0 * r) return false;
    }
  }
  return true;
}

}  // namespace

ClusterResult natural_clusters(const std::vector<Point>& points, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("natural_clusters: r0 must be positive");
  ClusterResult res;
  res.delta = r0;
  if (points.empty()) return res;

  std::vector<double> nn(points.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i != j) nn[i] = std::min(nn[i], (points[i] - points[j]).norm());
    }
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (nn[a] != nn[b]) return nn[a] < nn[b];
    return lex_less(points[a], points[b]);
  });

  double r = r0;
  while (!try_radius(points, order, r, res.clusters)) {
    r *= 0.5;
    ++res.rounds;
    if (r == 0.0) throw std::runtime_error("natural_clusters: coincident points");
  }
  res.delta = r;
  return res;
}

}  // namespace curvetrace
