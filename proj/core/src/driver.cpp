#include "curvetrace/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace curvetrace {

void RunConfig::validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(rho >= 1.6)) throw std::invalid_argument("rho must be at least 1.6");
  if (!(corrector_tol > 0.0) || !(h_min > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (pseudo_eps && !(*pseudo_eps > 0.0)) throw std::invalid_argument("pseudo_eps must be positive");
  if (mode == StepMode::fixed) throw std::invalid_argument("fixed stepping is a tracer test mode, not a run mode");
}

namespace {

enum SeedTag : std::uint64_t { kSingular = 1, kBoundary, kWitness };

CurveSystem system_for(const CurveSystem& sys, CoefficientMode mode) {
  if (mode == CoefficientMode::exact && !sys.exact()) {
    std::vector<RationalPolynomial> ex;
    for (const auto& p : sys.polys()) ex.push_back(to_rational(p));
    return CurveSystem(std::move(ex));
  }
  if (mode == CoefficientMode::perturbed && sys.exact()) return CurveSystem(sys.polys());
  return sys;
}

TracePoint to_unit(const TracePoint& tp, const AffineMap& map, const CurveSystem& unit_sys) {
  TracePoint out = tp;
  out.q = map.to_unit(tp.q);
  out.s = tangent_frame(unit_sys.jacobian(out.q)).sigma_min;
  return out;
}

TracePoint to_original(const TracePoint& tp, const AffineMap& map, const Box& box) {
  TracePoint out = tp;
  out.q = box.clamp(map.to_original(tp.q));
  return out;
}

bool near_any_chain(const Point& p, const std::vector<ChainTrace>& chains, double tol) {
  for (const auto& ct : chains) {
    const auto& v = ct.chain.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      if (point_segment_distance(p, v[i], v[i + 1]) <= tol) return true;
    }
  }
  return false;
}

}  // namespace

ApproxCurve approx_plot(const CurveSystem& input, const Box& input_box, const RunConfig& cfg) {
  cfg.validate();
  if (input_box.dim() != input.nvars()) throw std::invalid_argument("box dimension differs from the number of variables");

  ApproxCurve out;
  out.nvars = input.nvars();
  out.box = input_box;
  out.config = cfg;
  const CurveSystem sys = system_for(input, cfg.coefficients);
  const bool exact = cfg.coefficients == CoefficientMode::exact;

  KeyPointOptions kopts;
  kopts.solver.imag_tol = cfg.imag_tol;
  kopts.solver.dedup_radius = cfg.dedup_radius;
  kopts.solver.threads = cfg.threads;
  kopts.solver.degree_cap = cfg.degree_cap;
  KeyPointLog klog;

  // 1. singular or pseudo-singular points
  Box box = input_box;
  std::vector<Point> s0 = exact ? singular_points(sys, box, derive_seed(cfg.seed, kSingular), kopts, &klog)
                                : pseudo_singular_points(sys, box, cfg.pseudo_eps.value_or(cfg.eps),
                                                         derive_seed(cfg.seed, kSingular), kopts, &klog);
  const double face_tol = 1e-9 * (1.0 + box.half_diagonal());
  if (std::any_of(s0.begin(), s0.end(), [&](const Point& p) { return box.boundary_distance(p) <= face_tol; })) {
    box = box.shrunk(1e-6);
    out.notes.push_back("a singular point lies on the box boundary; box shrunk by 1e-6 of its width");
  }
  if (exact) {
    out.singular_points = s0;
  } else {
    out.pseudo_singular_points = s0;
  }

  // 2. natural clusters
  const ClusterResult cr = natural_clusters(s0, cfg.eps / 2.0);
  out.clusters = cr.clusters;
  out.delta = cr.delta;
  out.stats.cluster_rounds = cr.rounds;
  const double delta = cr.delta;
  for (const auto& c : cr.clusters) {
    if (box.boundary_distance(c.center) < 3.0 * delta) {
      out.notes.push_back(fmt::format("cluster at distance {:.3g} from the box boundary (3 delta = {:.3g})",
                                      box.boundary_distance(c.center), 3.0 * delta));
    }
  }

  // 3. fencing points, cluster by cluster
  std::vector<TracePoint> cwp;
  for (std::size_t k = 0; k < cr.clusters.size(); ++k) {
    auto fp = fencing_points(sys, cr.clusters[k].center, delta, derive_seed(cfg.seed, 100 + k), kopts, &klog);
    for (auto& tp : fp) {
      if (!box.contains(tp.q)) continue;
      tp.cluster = static_cast<int>(k);
      cwp.push_back(std::move(tp));
    }
  }

  // 4. boundary points
  std::vector<TracePoint> bwp = boundary_points(sys, box, derive_seed(cfg.seed, kBoundary), kopts, &klog);

  // 5. witness points outside the fencing balls
  out.witness = witness_points(sys, box, derive_seed(cfg.seed, kWitness), kopts, &klog);
  std::vector<Point> rwp;
  for (const auto& w : out.witness) {
    const bool fenced = std::any_of(cr.clusters.begin(), cr.clusters.end(),
                                    [&](const Cluster& c) { return (w - c.center).norm() <= delta; });
    if (!fenced) rwp.push_back(w);
  }
  out.stats.paths = klog.stats;
  for (const auto& n : klog.notes) out.notes.push_back(n);

  if (s0.empty() && cwp.empty() && bwp.empty() && rwp.empty()) {
    out.notes.push_back("no real points detected in box");
    out.pass_chain_counts = {0, 0, 0, 0};
    return out;
  }

  // 6. move everything into the unit frame
  const RescaledSystem rs = rescale_system(sys, box);
  const AffineMap& map = rs.map;
  out.stats.gradient_bound = rs.gradient_bound;
  out.stats.unit_radius = map.radius;
  for (auto& tp : cwp) tp = to_unit(tp, map, rs.system);
  for (auto& tp : bwp) tp = to_unit(tp, map, rs.system);
  for (auto& w : rwp) w = map.to_unit(w);
  const double du = map.length_to_unit(delta);

  TraceOptions topts;
  topts.mode = cfg.mode;
  topts.rho = cfg.rho;
  topts.corrector_tol = cfg.corrector_tol;
  topts.h_min = cfg.h_min;
  topts.drop_rule = cfg.drop_rule;
  TraceLog tlog;

  // 7. the four passes, in this order
  PlotResult s1 = plot_main(rs.system, rs.box, cwp, bwp, rwp, du, TraceTag::try_pass, topts, &tlog);
  std::vector<TracePoint> front = s1.front;
  PlotResult s2 = plot_main(rs.system, rs.box, front, bwp, rwp, du, TraceTag::resume_pass, topts, &tlog);
  PlotResult s3 = plot_main(rs.system, rs.box, bwp, cwp, rwp, du, TraceTag::boundary_pass, topts, &tlog);

  std::vector<ChainTrace> traced;
  for (auto* part : {&s1.chains, &s2.chains, &s3.chains}) {
    for (auto& c : *part) traced.push_back(std::move(c));
  }
  const double tol = hit_tolerance(du, topts);
  std::erase_if(rwp, [&](const Point& w) { return near_any_chain(w, traced, tol); });

  std::vector<TracePoint> wp = cwp;
  wp.insert(wp.end(), bwp.begin(), bwp.end());
  std::vector<ChainTrace> s4 = plot_oval(rs.system, rs.box, rwp, wp, du, topts, &tlog);
  for (std::size_t i = 0; i < cwp.size(); ++i) cwp[i].c = wp[i].c;
  for (std::size_t i = 0; i < bwp.size(); ++i) bwp[i].c = wp[cwp.size() + i].c;
  out.pass_chain_counts = {s1.chains.size(), s2.chains.size(), s3.chains.size(), s4.size()};
  for (auto& c : s4) traced.push_back(std::move(c));

  // 8. back to the input frame
  for (auto& ct : traced) {
    Chain c = std::move(ct.chain);
    for (auto& v : c.vertices) v = input_box.clamp(map.to_original(v));
    out.chains.push_back(std::move(c));
  }
  for (const auto& tp : cwp) out.fencing.push_back(to_original(tp, map, input_box));
  for (const auto& tp : bwp) out.boundary.push_back(to_original(tp, map, input_box));
  for (const auto& tp : front) out.front.push_back(to_original(tp, map, input_box));
  for (const auto& w : rwp) out.unused_witness.push_back(map.to_original(w));
  for (auto j : tlog.jumps) {
    j.location = map.to_original(j.location);
    out.jump_reports.push_back(std::move(j));
  }
  for (auto& n : tlog.notes) out.notes.push_back(std::move(n));
  out.stats.trace_steps = tlog.steps;
  out.stats.rejected_steps = tlog.rejected;
  out.stats.jump_checks = tlog.jump_checks;
  out.stats.front_created = tlog.front_created;
  return out;
}

}  // namespace curvetrace
