#pragma once

#include <vector>

#include "curvetrace/geometry.hpp"

namespace curvetrace {

struct Cluster {
  Point center;
  std::vector<Point> members;
  double radius = 0.0;
};

struct ClusterResult {
  std::vector<Cluster> clusters;
  double delta = 0.0;
  int rounds = 0;  // radius halvings performed
};

/// Groups points into clusters whose disks D(c, r) and D(c, 3r) hold the same
/// points, halving r from r0 until every cluster qualifies and the centers
/// are at least 3r apart. Centers are member means.
ClusterResult natural_clusters(const std::vector<Point>& points, double r0);

}  // namespace curvetrace
