#pragma once

#include <string>
#include <vector>

#include "curvetrace/geometry.hpp"

namespace curvetrace {

/// Start, target or front object of the tracer.
struct TracePoint {
  Point q;
  Eigen::VectorXd v;  // unit direction
  double s = 0.0;     // smallest singular value of J_F(q)
  int c = 0;          // visit counter
  int cluster = -1;   // owning cluster for fencing points
  bool grazing = false;
};

enum class ChainEnd { fencing, boundary, front, closure, stalled };

const char* to_string(ChainEnd k);

struct Chain {
  std::vector<Point> vertices;
  bool closed = false;
  ChainEnd start_kind = ChainEnd::stalled;
  ChainEnd end_kind = ChainEnd::stalled;
};

}  // namespace curvetrace
