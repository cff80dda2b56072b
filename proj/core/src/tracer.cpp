#include "curvetrace/tracer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace curvetrace {

const char* to_string(TraceTag t) {
  switch (t) {
    case TraceTag::try_pass: return "try";
    case TraceTag::resume_pass: return "resume";
    case TraceTag::boundary_pass: return "boundary";
  }
  return "unknown";
}

const char* to_string(StepMode m) {
  switch (m) {
    case StepMode::practical: return "practical";
    case StepMode::robust: return "robust";
    case StepMode::fixed: return "fixed";
  }
  return "unknown";
}

const char* to_string(DropRule r) {
  switch (r) {
    case DropRule::hysteresis: return "hysteresis";
    case DropRule::literal: return "literal";
  }
  return "unknown";
}

double hit_tolerance(double delta, const TraceOptions& opts) {
  return std::max(2.0 * opts.corrector_tol, 0.05 * delta);
}

bool on_segment(const Point& p, const Point& a, const Point& b, double tol, double tol_rel) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm() <= tol;
  const double t = (p - a).dot(ab) / len2;
  if (t < -tol_rel || t > 1.0 + tol_rel) return false;
  return point_segment_distance(p, a, b) <= tol;
}

bool segment_hit(const TracePoint& target, const Point& a, const Point& b, const Eigen::VectorXd& v_current,
                 double tol, double tol_rel) {
  if (target.v.dot(v_current) >= 0.0) return false;
  return on_segment(target.q, a, b, tol, tol_rel);
}

StepControl::StepControl(const TraceOptions& opts, std::size_t n, double delta)
    : opts_(opts), mu_(mu_of(n)), delta_(delta) {}

double StepControl::propose(double s) const {
  const double half = 0.5 * delta_;
  switch (opts_.mode) {
    case StepMode::fixed:
      return opts_.fixed_step;
    case StepMode::robust:
      return std::min(s / (2.0 * mu_ * opts_.rho), half) * scale_;
    case StepMode::practical:
      break;
  }
  return std::clamp(std::min(half, s / (2.0 * mu_ * opts_.rho)) * scale_, std::min(opts_.h_min, half), half);
}

void StepControl::accepted(double s) {
  if (++ok_streak_ >= 4) {
    scale_ *= 1.25;
    ok_streak_ = 0;
  }
  // Growth beyond the delta/2 cap would stop the step from following s.
  const double base = std::min(0.5 * delta_, s / (2.0 * mu_ * opts_.rho));
  if (opts_.mode == StepMode::robust) {
    scale_ = std::min(scale_, 1.0);
  } else if (base > 0.0) {
    scale_ = std::min(scale_, 0.5 * delta_ / base);
  }
}

void StepControl::rejected() {
  scale_ *= 0.5;
  ok_streak_ = 0;
}

double StepControl::effective_rho(double s, double h) const { return s / (2.0 * mu_ * h); }

namespace {

enum class StepOutcome { ok, stalled };

struct State {
  Point q;
  Eigen::VectorXd v;
  double s = 0.0;
};

class Walker {
 public:
  Walker(const CurveSystem& sys, const Box& box, double delta, const TraceOptions& opts, TraceLog* log)
      : sys_(sys), box_(box), delta_(delta), opts_(opts), log_(log) {
    newton_.tol = opts.corrector_tol;
    newton_.max_iter = opts.corrector_max_iter;
  }

  State initial(const Point& q, const Eigen::VectorXd& hint) const {
    const auto frame = tangent_frame(sys_.jacobian(q));
    State st{q, frame.tangent, frame.sigma_min};
    if (hint.size() == st.v.size() && st.v.dot(hint) < 0.0) st.v = -st.v;
    return st;
  }

  /// One predictor-corrector step from st; h is the accepted step length.
  StepOutcome step(State& st, StepControl& ctl, double& h) const {
    for (;;) {
      h = ctl.propose(st.s);
      if (!(h > 0.0) || (opts_.mode == StepMode::robust && h < opts_.h_min)) return StepOutcome::stalled;
      if (log_) ++log_->steps;
      const Point pred = st.q + h * st.v;
      const NewtonResult nr = newton_correct(sys_, pred, st.v, newton_);
      bool accept = nr.ok();
      State next;
      if (accept) {
        next = initial(nr.q, st.v);
        const double gap = (next.q - st.q).norm();
        if (opts_.mode != StepMode::fixed) {
          accept = gap <= 0.5 * delta_ + opts_.corrector_tol && (next.q - pred).norm() <= 0.5 * h;
        }
        if (accept && opts_.mode == StepMode::robust) {
          const double rho_eff = std::max(ctl.effective_rho(st.s, h), opts_.rho);
          if (log_) ++log_->jump_checks;
          accept = jump_check(st.q, next.q, h, rho_eff);
          if (!accept && log_) ++log_->jump_check_failures;
        }
      }
      if (accept) {
        ctl.accepted(next.s);
        st = std::move(next);
        return StepOutcome::ok;
      }
      if (log_) ++log_->rejected;
      if (opts_.mode == StepMode::fixed || h <= opts_.h_min) return StepOutcome::stalled;
      ctl.rejected();
    }
  }

  bool inside(const Point& q) const { return box_.contains(q, 1e-12); }

  /// Point where the segment a -> b leaves the box (a inside).
  Point clip(const Point& a, const Point& b) const {
    double t = 1.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const double d = b[k] - a[k];
      if (b[k] > box_.upper()[k] && d > 0.0) t = std::min(t, (box_.upper()[k] - a[k]) / d);
      if (b[k] < box_.lower()[k] && d < 0.0) t = std::min(t, (box_.lower()[k] - a[k]) / d);
    }
    return box_.clamp(a + std::max(t, 0.0) * (b - a));
  }

  void consume_rwp(std::vector<Point>& rwp, const Point& a, const Point& b, double tol) const {
    std::erase_if(rwp, [&](const Point& p) { return on_segment(p, a, b, tol, opts_.hit_tol_rel); });
  }

  void note(std::string msg) const {
    if (log_) log_->notes.push_back(std::move(msg));
  }

  void jump(const Point& at, std::string msg) const {
    if (log_) log_->jumps.push_back({at, std::move(msg)});
  }

  const CurveSystem& sys_;
  const Box& box_;
  double delta_;
  const TraceOptions& opts_;
  TraceLog* log_;
  NewtonOptions newton_;
};

void push_vertex(ChainTrace& ct, const Point& p, double sigma) {
  if (!ct.chain.vertices.empty() && (ct.chain.vertices.back() - p).norm() == 0.0) return;
  ct.chain.vertices.push_back(p);
  ct.sigma.push_back(sigma);
}

ChainEnd start_kind_of(TraceTag tag) {
  switch (tag) {
    case TraceTag::try_pass: return ChainEnd::fencing;
    case TraceTag::resume_pass: return ChainEnd::front;
    case TraceTag::boundary_pass: return ChainEnd::boundary;
  }
  return ChainEnd::stalled;
}

ChainEnd kind_of(const TracePoint& tp) { return tp.cluster >= 0 ? ChainEnd::fencing : ChainEnd::boundary; }

// Closest point among those hit by the segment; `skip` is excluded.
TracePoint* nearest_hit(std::vector<TracePoint>& pts, std::size_t skip, const Point& a, const Point& b,
                        const Eigen::VectorXd& v, double tol, double tol_rel) {
  TracePoint* best = nullptr;
  double best_d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i == skip || !segment_hit(pts[i], a, b, v, tol, tol_rel)) continue;
    const double d = point_segment_distance(pts[i].q, a, b);
    if (!best || d < best_d) {
      best = &pts[i];
      best_d = d;
    }
  }
  return best;
}

}  // namespace

PlotResult plot_main(const CurveSystem& sys, const Box& box, std::vector<TracePoint>& starts,
                     std::vector<TracePoint>& targets, std::vector<Point>& rwp, double delta, TraceTag tag,
                     const TraceOptions& opts, TraceLog* log) {
  if (!(delta > 0.0)) throw std::invalid_argument("plot_main: delta must be positive");
  PlotResult out;
  const Walker walker(sys, box, delta, opts, log);
  const double tol = hit_tolerance(delta, opts);
  const bool trying = tag == TraceTag::try_pass;

  for (std::size_t j = 0; j < starts.size(); ++j) {
    if (starts[j].c > 0) continue;
    starts[j].c = 1;
    ChainTrace ct;
    ct.chain.start_kind = start_kind_of(tag);
    State st = walker.initial(starts[j].q, starts[j].v);
    StepControl ctl(opts, sys.nvars(), delta);
    int drop_streak = 0;
    std::size_t count = 0;

    for (;;) {
      const State prev = st;
      push_vertex(ct, st.q, st.s);
      double h = 0.0;
      if (walker.step(st, ctl, h) == StepOutcome::stalled) {
        ct.chain.end_kind = ChainEnd::stalled;
        walker.note(fmt::format("{} pass: chain stalled (corrector failed at minimum step)", to_string(tag)));
        break;
      }
      ct.steps.push_back(h);
      walker.consume_rwp(rwp, prev.q, st.q, tol);

      if (TracePoint* tp = nearest_hit(targets, targets.size(), prev.q, st.q, st.v, tol, opts.hit_tol_rel)) {
        auto& t = *tp;
        if (t.c > 0) {
          walker.jump(t.q, fmt::format("{} pass: {} point visited again", to_string(tag), to_string(kind_of(t))));
        } else {
          push_vertex(ct, t.q, t.s);
        }
        ++t.c;
        ct.chain.end_kind = kind_of(t);
        break;
      }

      if (TracePoint* tp = nearest_hit(starts, j, prev.q, st.q, st.v, tol, opts.hit_tol_rel)) {
        auto& t = *tp;
        if (t.c > 0) {
          walker.jump(t.q, fmt::format("{} pass: {} point visited again", to_string(tag), to_string(start_kind_of(tag))));
        } else {
          push_vertex(ct, t.q, t.s);
        }
        ++t.c;
        ct.chain.end_kind = start_kind_of(tag);
        break;
      }

      if (trying) {
        bool hit = false;
        for (auto it = out.front.begin(); it != out.front.end(); ++it) {
          if (!segment_hit(*it, prev.q, st.q, st.v, tol, opts.hit_tol_rel)) continue;
          push_vertex(ct, it->q, it->s);
          out.front.erase(it);
          ct.chain.end_kind = ChainEnd::front;
          hit = true;
          break;
        }
        if (hit) break;
      }

      if (!walker.inside(st.q)) {
        push_vertex(ct, walker.clip(prev.q, st.q), st.s);
        ct.chain.end_kind = ChainEnd::boundary;
        walker.note(fmt::format("{} pass: chain left the box without meeting a boundary point", to_string(tag)));
        break;
      }

      if (trying) {
        bool drop = false;
        if (opts.drop_rule == DropRule::literal) {
          drop = st.s < prev.s;
        } else {
          drop_streak = st.s < opts.drop_factor * prev.s ? drop_streak + 1 : 0;
          drop = drop_streak >= opts.drop_count;
        }
        if (drop) {
          TracePoint f;
          f.q = st.q;
          f.v = st.v;
          f.s = st.s;
          out.front.push_back(f);
          if (log) ++log->front_created;
          push_vertex(ct, st.q, st.s);
          ct.chain.end_kind = ChainEnd::front;
          break;
        }
      }

      if (++count >= opts.max_steps) {
        push_vertex(ct, st.q, st.s);
        ct.chain.end_kind = ChainEnd::stalled;
        walker.note(fmt::format("{} pass: chain stopped after {} steps", to_string(tag), opts.max_steps));
        break;
      }
    }
    if (ct.chain.vertices.size() >= 2) {
      out.chains.push_back(std::move(ct));
    } else {
      walker.note(fmt::format("{} pass: start point produced no segment", to_string(tag)));
    }
  }
  return out;
}

std::vector<ChainTrace> plot_oval(const CurveSystem& sys, const Box& box, std::vector<Point>& rwp,
                                  std::vector<TracePoint>& wp, double delta, const TraceOptions& opts,
                                  TraceLog* log) {
  if (!(delta > 0.0)) throw std::invalid_argument("plot_oval: delta must be positive");
  std::vector<ChainTrace> out;
  const Walker walker(sys, box, delta, opts, log);
  const double tol = hit_tolerance(delta, opts);

  while (!rwp.empty()) {
    const Point p = rwp.front();
    rwp.erase(rwp.begin());
    ChainTrace ct;
    ct.chain.start_kind = ChainEnd::closure;
    State st = walker.initial(p, Eigen::VectorXd());
    StepControl ctl(opts, sys.nvars(), delta);
    std::size_t k = 0;

    for (;;) {
      ++k;
      const State prev = st;
      push_vertex(ct, st.q, st.s);
      double h = 0.0;
      if (walker.step(st, ctl, h) == StepOutcome::stalled) {
        ct.chain.end_kind = ChainEnd::stalled;
        walker.note("oval pass: chain stalled (corrector failed at minimum step)");
        break;
      }
      ct.steps.push_back(h);
      if (k > 2 && on_segment(p, prev.q, st.q, tol, opts.hit_tol_rel)) {
        push_vertex(ct, p, ct.sigma.front());
        ct.chain.closed = true;
        ct.chain.end_kind = ChainEnd::closure;
        break;
      }
      walker.consume_rwp(rwp, prev.q, st.q, tol);

      if (TracePoint* tp = nearest_hit(wp, wp.size(), prev.q, st.q, st.v, tol, opts.hit_tol_rel)) {
        auto& t = *tp;
        if (t.c > 0) walker.jump(t.q, fmt::format("oval pass: {} point visited again", to_string(kind_of(t))));
        ++t.c;
        ct.chain.end_kind = kind_of(t);
        break;
      }

      if (!walker.inside(st.q)) {
        push_vertex(ct, walker.clip(prev.q, st.q), st.s);
        ct.chain.end_kind = ChainEnd::boundary;
        walker.note("oval pass: chain left the box without meeting a boundary point");
        break;
      }
      if (k >= opts.max_steps) {
        ct.chain.end_kind = ChainEnd::stalled;
        walker.note(fmt::format("oval pass: chain stopped after {} steps", opts.max_steps));
        break;
      }
    }
    if (ct.chain.vertices.size() >= 2) out.push_back(std::move(ct));
  }
  return out;
}

}  // namespace curvetrace
