#include "curvetrace/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "curvetrace/poly_system.hpp"

namespace curvetrace {

using cplx = std::complex<double>;

DegreeCapExceeded::DegreeCapExceeded(std::size_t d, std::size_t c)
    : std::runtime_error(fmt::format("total degree {} exceeds the cap {}", d, c)), degree(d), cap(c) {}

PathStats& PathStats::operator+=(const PathStats& o) {
  total_degree += o.total_degree;
  tracked += o.tracked;
  converged += o.converged;
  singular += o.singular;
  diverged += o.diverged;
  failed += o.failed;
  retracked += o.retracked;
  steps += o.steps;
  real += o.real;
  in_box += o.in_box;
  return *this;
}

std::size_t total_degree(const std::vector<Polynomial>& polys) {
  std::size_t d = 1;
  for (const auto& p : polys) {
    const int k = std::max(p.degree(), 0);
    if (k == 0) return 0;
    if (d > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(k)) return std::numeric_limits<std::size_t>::max();
    d *= static_cast<std::size_t>(k);
  }
  return d;
}

unsigned solver_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CURVETRACE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

class Tracker {
 public:
  Tracker(const std::vector<Polynomial>& polys, cplx gamma, const SolverOptions& opts)
      : polys_(polys), target_(std::span<const Polynomial>(polys)), gamma_(gamma), opts_(opts), n_(polys.size()) {
    for (const auto& p : polys) degrees_.push_back(static_cast<unsigned>(std::max(p.degree(), 0)));
  }

  Eigen::VectorXcd start_point(std::size_t index) const {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t j = index % degrees_[k];
      index /= degrees_[k];
      x[static_cast<Eigen::Index>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / degrees_[k]);
    }
    return x;
  }

  Endpoint track(Eigen::VectorXcd x, double dt_start, double dt_max, std::size_t& steps) const {
    Endpoint end;
    double t = 0.0;
    double dt = dt_start;
    int streak = 0;
    Eigen::VectorXcd k1, k2, k3, k4;
    while (t < 1.0) {
      const double h = std::min(dt, 1.0 - t);
      bool ok = velocity(x, t, k1) && velocity(x + 0.5 * h * k1, t + 0.5 * h, k2) &&
                velocity(x + 0.5 * h * k2, t + 0.5 * h, k3) && velocity(x + h * k3, t + h, k4);
      Eigen::VectorXcd y;
      if (ok) {
        y = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ok = correct(y, t + h);
      }
      ++steps;
      if (ok) {
        x = y;
        t = (h == 1.0 - t) ? 1.0 : t + h;
        if (++streak >= 3) {
          dt = std::min(dt * 1.5, dt_max);
          streak = 0;
        }
        if (x.norm() > opts_.divergence_norm) {
          end.status = PathStatus::diverged;
          break;
        }
      } else {
        streak = 0;
        dt *= 0.5;
        if (dt < opts_.dt_min) {
          end.status = x.norm() > 1e5 ? PathStatus::diverged : PathStatus::failed;
          break;
        }
      }
    }
    Eigen::VectorXcd f;
    Eigen::MatrixXcd j;
    if (t >= 1.0 && polish(x)) {
      end.status = PathStatus::converged;
    } else if (t >= 1.0 - 1e-3 && end.status == PathStatus::failed) {
      end.status = relative_residual(x) <= 1e-5 ? PathStatus::singular : PathStatus::diverged;
    }
    end.x = x;
    end.t = t;
    eval_target(x, f, j);
    end.residual = f.cwiseAbs().maxCoeff();
    return end;
  }

 private:
  void eval_target(const Eigen::VectorXcd& x, Eigen::VectorXcd& f, Eigen::MatrixXcd& j) const {
    const auto n = static_cast<Eigen::Index>(n_);
    f.resize(n);
    std::vector<cplx> jac(n_ * n_);
    target_.evaluate<cplx>(std::span<const cplx>(x.data(), n_), std::span<cplx>(f.data(), n_), jac);
    j.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) j(r, c) = jac[static_cast<std::size_t>(r * n + c)];
    }
  }

  // H = (1-t) gamma G + t F with G_k = x_k^{d_k} - 1.
  void homotopy(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd& h, Eigen::MatrixXcd& hx,
                Eigen::VectorXcd* ht) const {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd fx;
    eval_target(x, f, fx);
    const auto n = static_cast<Eigen::Index>(n_);
    Eigen::VectorXcd g(n);
    Eigen::VectorXcd gd(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const unsigned d = degrees_[static_cast<std::size_t>(k)];
      const cplx pm1 = std::pow(x[k], static_cast<int>(d - 1));
      g[k] = pm1 * x[k] - 1.0;
      gd[k] = static_cast<double>(d) * pm1;
    }
    h = (1.0 - t) * gamma_ * g + t * f;
    hx = t * fx;
    hx.diagonal() += (1.0 - t) * gamma_ * gd;
    if (ht) *ht = f - gamma_ * g;
  }

  bool velocity(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd& v) const {
    Eigen::VectorXcd h, ht;
    Eigen::MatrixXcd hx;
    homotopy(x, t, h, hx, &ht);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(hx);
    if (!lu.isInvertible()) return false;
    v = -lu.solve(ht);
    return v.allFinite();
  }

  bool correct(Eigen::VectorXcd& x, double t) const {
    Eigen::VectorXcd h;
    Eigen::MatrixXcd hx;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 3; ++it) {
      homotopy(x, t, h, hx, nullptr);
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(hx);
      if (!lu.isInvertible()) return false;
      const Eigen::VectorXcd d = lu.solve(h);
      if (!d.allFinite()) return false;
      const double step = d.norm();
      if (it > 0 && step > 0.5 * prev) return false;
      x -= d;
      if (step <= 1e-9 * (1.0 + x.norm())) return true;
      prev = step;
    }
    return false;
  }

  bool polish(Eigen::VectorXcd& x) const {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd j;
    for (int it = 0; it < 8; ++it) {
      eval_target(x, f, j);
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(j);
      if (!lu.isInvertible()) return false;
      const Eigen::VectorXcd d = lu.solve(f);
      if (!d.allFinite()) return false;
      x -= d;
      if (d.norm() <= 1e-12 * (1.0 + x.norm())) return true;
    }
    return false;
  }

  double relative_residual(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd f;
    Eigen::MatrixXcd j;
    eval_target(x, f, j);
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double mag = 0.0;
      for (const auto& [e, c] : polys_[i].terms()) {
        double term = std::abs(c);
        for (std::size_t k = 0; k < n_; ++k) term *= std::pow(std::abs(x[static_cast<Eigen::Index>(k)]), static_cast<int>(e[k]));
        mag += term;
      }
      worst = std::max(worst, std::abs(f[static_cast<Eigen::Index>(i)]) / std::max(1.0, mag));
    }
    return worst;
  }

  const std::vector<Polynomial>& polys_;
  PolySystem target_;
  cplx gamma_;
  const SolverOptions& opts_;
  std::size_t n_;
  std::vector<unsigned> degrees_;
};

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count / 8 + 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Endpoint> track_paths(const std::vector<Polynomial>& polys, std::uint64_t seed,
                                  const SolverOptions& opts, PathStats& stats) {
  const std::size_t d = total_degree(polys);
  stats.total_degree = d;
  if (d == 0) return {};
  if (d > opts.degree_cap) throw DegreeCapExceeded(d, opts.degree_cap);

  std::mt19937_64 gen(seed);
  const cplx gamma = std::polar(1.0, 2.0 * std::numbers::pi * unit_uniform(gen()));
  const Tracker tracker(polys, gamma, opts);

  std::vector<Endpoint> ends(d);
  std::vector<std::size_t> steps(d, 0);
  parallel_for(d, solver_threads(opts.threads), [&](std::size_t i) {
    ends[i] = tracker.track(tracker.start_point(i), opts.dt_start, opts.dt_max, steps[i]);
  });

  if (opts.retrack_duplicates) {
    // Two paths may not end on the same nonsingular root; when they do, one of
    // them jumped. Track both again with smaller steps.
    const PolySystem target{std::span<const Polynomial>(polys)};
    std::vector<std::size_t> redo;
    for (std::size_t i = 0; i < d; ++i) {
      if (ends[i].status != PathStatus::converged) continue;
      for (std::size_t k = i + 1; k < d; ++k) {
        if (ends[k].status != PathStatus::converged) continue;
        if ((ends[i].x - ends[k].x).norm() > 1e-6 * (1.0 + ends[i].x.norm())) continue;
        Eigen::VectorXd re = ends[i].x.real();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(target.jacobian(re));
        const auto& sv = svd.singularValues();
        if (ends[i].x.imag().norm() < 1e-6 && sv(sv.size() - 1) > 1e-6 * std::max(1.0, sv(0))) {
          redo.push_back(i);
          redo.push_back(k);
        }
      }
    }
    std::sort(redo.begin(), redo.end());
    redo.erase(std::unique(redo.begin(), redo.end()), redo.end());
    for (std::size_t i : redo) {
      ends[i] = tracker.track(tracker.start_point(i), opts.dt_start / 10.0, opts.dt_max / 10.0, steps[i]);
    }
    stats.retracked += redo.size();
  }

  for (std::size_t i = 0; i < d; ++i) {
    ++stats.tracked;
    stats.steps += steps[i];
    switch (ends[i].status) {
      case PathStatus::converged: ++stats.converged; break;
      case PathStatus::singular: ++stats.singular; break;
      case PathStatus::diverged: ++stats.diverged; break;
      case PathStatus::failed: ++stats.failed; break;
    }
  }
  return ends;
}

double scaled_residual(const std::vector<Polynomial>& polys, const Point& x) {
  double worst = 0.0;
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  for (const auto& p : polys) {
    double mag = 0.0;
    for (const auto& [e, c] : p.terms()) {
      double term = std::abs(c);
      for (std::size_t k = 0; k < e.size(); ++k) term *= std::pow(std::abs(xs[k]), static_cast<int>(e[k]));
      mag += term;
    }
    worst = std::max(worst, std::abs(p.evaluate(xs)) / std::max(1.0, mag));
  }
  return worst;
}

std::optional<Point> refine_root(const ZeroDimSystem& sys, const Point& q, double tol) {
  const auto n = static_cast<Eigen::Index>(sys.polys.size());
  if (q.size() != n || !q.allFinite()) return std::nullopt;
  const PolySystem ps{std::span<const Polynomial>(sys.polys)};
  Point x = q;
  Eigen::VectorXd f;
  Eigen::MatrixXd j;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 30; ++it) {
    ps.evaluate(x, f, j);
    if (!f.allFinite() || !j.allFinite()) return std::nullopt;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(n - 1) > 0.0) || std::max(sv(0), 1.0) / std::min(sv(n - 1), 1.0) > 1e12) return std::nullopt;
    const Eigen::VectorXd d = svd.solve(f);
    const double step = d.norm();
    x -= d;
    if ((x - q).norm() > 1e3 * (1.0 + q.norm())) return std::nullopt;
    const bool tiny = step <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.norm());
    const bool stalled = step >= 0.5 * prev;
    if (tiny || (stalled && scaled_residual(sys.polys, x) <= tol)) break;
    prev = step;
  }
  if (scaled_residual(sys.polys, x) > tol) return std::nullopt;
  return x;
}

std::vector<Point> dedup(const std::vector<Point>& points, double radius) { return greedy_dedup(points, radius); }

SolutionSet solve_zero_dim(const ZeroDimSystem& sys, std::uint64_t seed, const SolverOptions& opts) {
  SolutionSet out;
  const std::size_t n = sys.polys.size();
  if (n == 0) throw std::invalid_argument("solve_zero_dim: empty system");
  for (const auto& p : sys.polys) {
    if (p.nvars() != n) throw std::invalid_argument("solve_zero_dim: system is not square");
  }
  if (sys.box && sys.box->dim() != n) throw std::invalid_argument("solve_zero_dim: box dimension mismatch");
  for (const auto& p : sys.polys) {
    if (p.is_zero()) {
      out.warnings.push_back("system has an identically zero equation; solution set is not zero-dimensional");
      return out;
    }
    if (p.degree() == 0) return out;
  }

  out.endpoints = track_paths(sys.polys, seed, opts, out.stats);
  if (out.stats.tracked > 0 && 5 * out.stats.failed > out.stats.tracked) {
    out.warnings.push_back(fmt::format("{} of {} homotopy paths failed", out.stats.failed, out.stats.tracked));
  }

  std::vector<Point> candidates;
  for (const auto& e : out.endpoints) {
    if (e.status != PathStatus::converged) continue;
    const Point re = e.x.real();
    if (e.x.imag().norm() > opts.imag_tol * (1.0 + re.norm())) continue;
    ++out.stats.real;
    auto r = refine_root(sys, re, opts.tol);
    if (!r) continue;
    if (sys.box && !sys.box->contains(*r, opts.box_tol)) continue;
    ++out.stats.in_box;
    candidates.push_back(*r);
  }
  std::sort(candidates.begin(), candidates.end(), lex_less);
  const PolySystem ps{std::span<const Polynomial>(sys.polys)};
  for (const auto& c : candidates) {
    bool dup = false;
    for (const auto& k : out.points) {
      if ((c - k).norm() <= opts.dedup_radius * (1.0 + k.norm())) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    out.points.push_back(c);
    out.residuals.push_back(ps.values(c).lpNorm<Eigen::Infinity>());
  }
  return out;
}

}  // namespace curvetrace
