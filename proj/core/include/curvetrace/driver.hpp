#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvetrace/cluster.hpp"
#include "curvetrace/curve_system.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/keypoints.hpp"
#include "curvetrace/solver.hpp"
#include "curvetrace/tracer.hpp"

namespace curvetrace {

struct RunConfig {
  double eps = 0.1;
  double rho = 1.6;
  StepMode mode = StepMode::practical;
  CoefficientMode coefficients = CoefficientMode::exact;
  std::uint64_t seed = 0;
  double corrector_tol = 1e-10;
  double imag_tol = 1e-8;
  double dedup_radius = 1e-8;
  double h_min = 1e-7;
  /// Threshold for pseudo-singular points; eps when unset.
  std::optional<double> pseudo_eps;
  DropRule drop_rule = DropRule::hysteresis;
  unsigned threads = 0;
  std::size_t degree_cap = 20000;

  /// Throws std::invalid_argument when eps <= 0 or rho < 1.6.
  void validate() const;
};

struct RunStats {
  PathStats paths;
  std::size_t trace_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t jump_checks = 0;
  std::size_t front_created = 0;
  int cluster_rounds = 0;
  double gradient_bound = 0.0;
  double unit_radius = 1.0;
};

/// A finished run, in the coordinates of the input box.
struct ApproxCurve {
  std::size_t nvars = 0;
  Box box = Box(Point::Zero(2), Point::Ones(2));
  double delta = 0.0;
  std::vector<Chain> chains;
  std::vector<Point> singular_points;         // exact mode only
  std::vector<Point> pseudo_singular_points;  // perturbed mode only
  std::vector<Cluster> clusters;
  std::vector<JumpReport> jump_reports;
  std::vector<Point> unused_witness;
  std::vector<Point> witness;
  /// Key objects with their final visit counters.
  std::vector<TracePoint> fencing;
  std::vector<TracePoint> boundary;
  std::vector<TracePoint> front;
  /// Chains per pass: try, resume, boundary, oval.
  std::vector<std::size_t> pass_chain_counts;
  RunStats stats;
  std::vector<std::string> notes;
  RunConfig config;
};

ApproxCurve approx_plot(const CurveSystem& sys, const Box& box, const RunConfig& cfg);

struct VerifyOptions {
  std::size_t n_samples = 10000;
  /// Grid spacing for the 2-D sign-change oracle; 0 derives it from n_samples.
  double grid_resolution = 0.0;
  /// Optional parametrization t in [0, 1] -> curve point.
  std::function<Point(double)> parametrization;
};

struct VerifyResult {
  /// sup over curve samples of the distance to the output; +inf when the
  /// output is empty and the curve is not; nullopt when no oracle exists.
  std::optional<double> curve_to_chain;
  /// sup over chain vertices and segment points of the distance to the curve.
  double chain_to_curve = 0.0;
  std::size_t curve_samples = 0;
  std::size_t chain_samples = 0;
};

/// Curve points of a 2-D system in the box from sign changes of f along grid
/// edges, each polished by a few gradient Newton steps.
std::vector<Point> sample_plane_curve(const CurveSystem& sys, const Box& box, double resolution);

VerifyResult verify_epsilon(const ApproxCurve& curve, const CurveSystem& sys, const Box& box,
                            const VerifyOptions& opts = {});

}  // namespace curvetrace
