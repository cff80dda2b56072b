#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvetrace/geometry.hpp"
#include "curvetrace/polynomial.hpp"

namespace curvetrace {

/// Square polynomial system with an optional box filter.
struct ZeroDimSystem {
  std::vector<Polynomial> polys;
  std::optional<Box> box;
};

class DegreeCapExceeded : public std::runtime_error {
 public:
  DegreeCapExceeded(std::size_t degree, std::size_t cap);
  std::size_t degree;
  std::size_t cap;
};

struct SolverOptions {
  double tol = 1e-10;            // residual bound for returned points (scaled, see refine_root)
  double imag_tol = 1e-8;        // times 1 + ||Re x||
  double dedup_radius = 1e-8;    // times 1 + ||x||
  double box_tol = 1e-9;
  std::size_t degree_cap = 20000;
  double dt_start = 0.05;
  double dt_min = 1e-8;
  double dt_max = 0.1;
  double divergence_norm = 1e8;
  unsigned threads = 0;          // 0: CURVETRACE_THREADS or hardware concurrency
  bool retrack_duplicates = true;
};

/// singular: reached t = 1 but the final Newton polish did not converge while
/// the residual is small, typical of a multiple root.
enum class PathStatus { converged, singular, diverged, failed };

/// Raw end of one homotopy path.
struct Endpoint {
  Eigen::VectorXcd x;
  double t = 0.0;       // parameter value reached
  PathStatus status = PathStatus::failed;
  double residual = 0.0;  // ||F(x)||_inf at the endpoint
};

struct PathStats {
  std::size_t total_degree = 0;
  std::size_t tracked = 0;
  std::size_t converged = 0;
  std::size_t singular = 0;
  std::size_t diverged = 0;
  std::size_t failed = 0;
  std::size_t retracked = 0;
  std::size_t steps = 0;
  std::size_t real = 0;
  std::size_t in_box = 0;

  PathStats& operator+=(const PathStats& o);
};

struct SolutionSet {
  std::vector<Point> points;
  std::vector<double> residuals;
  PathStats stats;
  std::vector<Endpoint> endpoints;
  std::vector<std::string> warnings;
};

std::size_t total_degree(const std::vector<Polynomial>& polys);

/// Total-degree homotopy with start system x_i^{d_i} - 1 and a random gamma
/// drawn from seed. Real solutions are Newton-polished, filtered to the box
/// and deduplicated; raw endpoints are kept for callers that need to look
/// at paths ending on singular roots.
SolutionSet solve_zero_dim(const ZeroDimSystem& sys, std::uint64_t seed, const SolverOptions& opts = {});

/// Tracks every path and returns the raw endpoints in start-point order.
std::vector<Endpoint> track_paths(const std::vector<Polynomial>& polys, std::uint64_t seed,
                                  const SolverOptions& opts, PathStats& stats);

/// Plain Newton, at most 30 iterations. Residuals are measured per equation
/// relative to max(1, sum of |term| at x). Fails on divergence, on a Jacobian
/// with condition estimate above 1e12, or if the residual stays above tol.
std::optional<Point> refine_root(const ZeroDimSystem& sys, const Point& q, double tol = 1e-10);

/// Largest scaled residual of the system at x (see refine_root).
double scaled_residual(const std::vector<Polynomial>& polys, const Point& x);

/// Greedy: keeps the first point, drops later points within radius of a kept one.
std::vector<Point> dedup(const std::vector<Point>& points, double radius);

/// Uniform double in [0,1) from a 64-bit generator word.
inline double unit_uniform(std::uint64_t word) { return static_cast<double>(word >> 11) * 0x1.0p-53; }

/// Worker count for path tracking.
unsigned solver_threads(unsigned requested);

}  // namespace curvetrace
