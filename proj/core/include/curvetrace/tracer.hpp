#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "curvetrace/curve_system.hpp"
#include "curvetrace/geometry.hpp"
#include "curvetrace/numeric.hpp"
#include "curvetrace/trace_point.hpp"

namespace curvetrace {

enum class TraceTag { try_pass, resume_pass, boundary_pass };

/// practical: h = clamp(min(delta/2, s/(2 mu rho)) * scale, h_min, delta/2)
/// where scale grows 1.25x after 4 accepted steps and halves on rejection.
/// robust: h = min(s/(2 mu rho), delta/2) * scale with scale <= 1 and the
/// jump check on every accepted step. fixed: constant h = fixed_step, no
/// safeguards.
enum class StepMode { practical, robust, fixed };

/// literal: stop as soon as s < s'. hysteresis: stop when s < factor * s'
/// held for `drop_count` consecutive steps.
enum class DropRule { hysteresis, literal };

const char* to_string(TraceTag t);
const char* to_string(StepMode m);
const char* to_string(DropRule r);

struct TraceOptions {
  StepMode mode = StepMode::practical;
  double rho = 1.6;
  double corrector_tol = 1e-10;
  int corrector_max_iter = 20;
  double h_min = 1e-7;
  double fixed_step = 0.0;
  DropRule drop_rule = DropRule::hysteresis;
  double drop_factor = 0.99;
  int drop_count = 2;
  double hit_tol_rel = 0.05;
  std::size_t max_steps = 200000;
};

struct JumpReport {
  Point location;
  std::string description;
};

struct TraceLog {
  std::vector<JumpReport> jumps;
  std::vector<std::string> notes;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t jump_checks = 0;
  std::size_t jump_check_failures = 0;
  std::size_t front_created = 0;
};

/// Per-chain diagnostics in the tracing frame.
struct ChainTrace {
  Chain chain;
  std::vector<double> sigma;  // smallest singular value at each traced vertex
  std::vector<double> steps;  // accepted step lengths h
};

struct PlotResult {
  std::vector<ChainTrace> chains;
  std::vector<TracePoint> front;
};

/// Distance tolerance for "point lies on segment" tests.
double hit_tolerance(double delta, const TraceOptions& opts);

/// target.v . v_current < 0, distance to [a, b] at most tol, projection
/// parameter within [-tol_rel, 1 + tol_rel].
bool segment_hit(const TracePoint& target, const Point& a, const Point& b, const Eigen::VectorXd& v_current,
                 double tol, double tol_rel = 0.05);

/// The same membership test without the direction condition.
bool on_segment(const Point& p, const Point& a, const Point& b, double tol, double tol_rel = 0.05);

/// Step-size state machine shared by the tracing loops.
class StepControl {
 public:
  StepControl(const TraceOptions& opts, std::size_t n, double delta);

  double propose(double s) const;
  /// s is the singular value at the newly accepted point.
  void accepted(double s);
  void rejected();
  /// Effective rho for a step h taken at singular value s (robust mode).
  double effective_rho(double s, double h) const;

  double scale() const { return scale_; }

 private:
  const TraceOptions& opts_;
  double mu_;
  double delta_;
  double scale_ = 1.0;
  int ok_streak_ = 0;
};

/// Traces from every unvisited start object. Counters of starts and targets
/// are updated in place, rwp entries lying on traversed segments are removed,
/// and in try mode front points are created and consumed.
PlotResult plot_main(const CurveSystem& sys, const Box& box, std::vector<TracePoint>& starts,
                     std::vector<TracePoint>& targets, std::vector<Point>& rwp, double delta, TraceTag tag,
                     const TraceOptions& opts = {}, TraceLog* log = nullptr);

/// Traces closed components from the remaining witness points.
std::vector<ChainTrace> plot_oval(const CurveSystem& sys, const Box& box, std::vector<Point>& rwp,
                                  std::vector<TracePoint>& wp, double delta, const TraceOptions& opts = {},
                                  TraceLog* log = nullptr);

}  // namespace curvetrace
