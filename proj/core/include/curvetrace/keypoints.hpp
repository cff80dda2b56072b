#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvetrace/curve_system.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/solver.hpp"
#include "curvetrace/trace_point.hpp"

namespace curvetrace {

struct KeyPointOptions {
  SolverOptions solver;
  /// Scaled residual accepted for singular and pseudo-singular points.
  double verify_tol = 1e-8;
  /// Singular candidates closer than this are merged.
  double singular_merge = 1e-6;
  /// Relative imaginary part tolerated for endpoints of paths that end on a
  /// multiple root, before refinement.
  double loose_imag = 1e-2;
};

/// Collects path statistics and notes across the key-point solves.
struct KeyPointLog {
  PathStats stats;
  std::vector<std::string> notes;
};

enum class SingularMode { exact, pseudo };

struct KeyPointReport {
  std::vector<Point> singular;
  std::vector<TracePoint> fencing;
  std::vector<TracePoint> boundary;
  std::vector<Point> witness;
  SingularMode mode = SingularMode::exact;
};

/// Mixes a run seed with a stage tag into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Real points of the box where F and every minor vanish.
std::vector<Point> singular_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                   const KeyPointOptions& opts = {}, KeyPointLog* log = nullptr);

/// Critical points of the other equations together with the minors at
/// which the remaining equation is at most eps in absolute value.
std::vector<Point> pseudo_singular_points(const CurveSystem& sys, const Box& box, double eps, std::uint64_t seed,
                                          const KeyPointOptions& opts = {}, KeyPointLog* log = nullptr);

/// Lagrange points of F with multiplier condition J^T lambda = a for a
/// seeded random unit a. Retries once with a fresh a when nothing is found.
std::vector<Point> witness_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                  const KeyPointOptions& opts = {}, KeyPointLog* log = nullptr);

/// Same with an explicit direction a.
std::vector<Point> witness_points_along(const CurveSystem& sys, const Box& box, const Eigen::VectorXd& a,
                                        std::uint64_t seed, const KeyPointOptions& opts = {},
                                        KeyPointLog* log = nullptr);

/// Curve points on the sphere |x - center| = radius, v pointing away from
/// center. Sorted by angle in 2-D, lexicographically otherwise.
std::vector<TracePoint> fencing_points(const CurveSystem& sys, const Point& center, double radius,
                                       std::uint64_t seed, const KeyPointOptions& opts = {},
                                       KeyPointLog* log = nullptr);

/// Curve points on the faces of the box with v the tangent turned inward.
std::vector<TracePoint> boundary_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                        const KeyPointOptions& opts = {}, KeyPointLog* log = nullptr);

}  // namespace curvetrace
