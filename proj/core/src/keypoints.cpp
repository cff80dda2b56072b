#include "curvetrace/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "curvetrace/numeric.hpp"
#include "curvetrace/poly_system.hpp"

namespace curvetrace {

const char* to_string(ChainEnd k) {
  switch (k) {
    case ChainEnd::fencing: return "fencing";
    case ChainEnd::boundary: return "boundary";
    case ChainEnd::front: return "front";
    case ChainEnd::closure: return "closure";
    case ChainEnd::stalled: return "stalled";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  // splitmix64 finaliser over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void merge_log(KeyPointLog* log, const SolutionSet& s, const std::string& what) {
  if (!log) return;
  log->stats += s.stats;
  for (const auto& w : s.warnings) log->notes.push_back(what + ": " + w);
}

/// Gauss-Newton in long double on a possibly overdetermined system. Returns
/// the iterate with the smallest residual seen.
Point gauss_newton(const PolySystem& ps, const Point& x0, int max_iter = 200) {
  const std::size_t m = ps.size();
  const std::size_t n = ps.nvars();
  LVec x = x0.cast<long double>();
  std::vector<long double> f(m);
  std::vector<long double> jac(m * n);
  LMat j(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  LVec fv(static_cast<Eigen::Index>(m));
  LVec best = x;
  long double best_res = std::numeric_limits<long double>::infinity();
  int since_best = 0;
  for (int it = 0; it < max_iter; ++it) {
    ps.evaluate<long double>(std::span<const long double>(x.data(), n), f, jac);
    for (std::size_t r = 0; r < m; ++r) {
      fv[static_cast<Eigen::Index>(r)] = f[r];
      for (std::size_t c = 0; c < n; ++c) j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = jac[r * n + c];
    }
    const long double res = fv.norm();
    if (!std::isfinite(static_cast<double>(res))) break;
    if (res < best_res) {
      best_res = res;
      best = x;
      since_best = 0;
    } else if (++since_best > 8) {
      break;
    }
    if (res == 0.0L) break;
    Eigen::CompleteOrthogonalDecomposition<LMat> cod(j);
    const LVec d = cod.solve(fv);
    if (!d.allFinite()) break;
    x -= d;
    if (d.norm() <= 1e-18L * (1.0L + x.norm())) {
      ps.evaluate<long double>(std::span<const long double>(x.data(), n), f, {});
      long double r2 = 0;
      for (auto v : f) r2 += v * v;
      if (std::sqrt(r2) < best_res) best = x;
      break;
    }
  }
  return best.cast<double>();
}

/// r . Delta over float polynomials.
Polynomial combination(const std::vector<Polynomial>& deltas, const std::vector<double>& r) {
  Polynomial out(deltas.front().nvars());
  for (std::size_t i = 0; i < deltas.size(); ++i) out += deltas[i] * r[i];
  return out;
}

std::vector<double> random_direction(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> a(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& v : a) {
      v = normal(gen);
      norm += v * v;
    }
  } while (norm < 1e-12);
  for (auto& v : a) v /= std::sqrt(norm);
  return a;
}

/// Real candidates from a solve: polished solutions plus endpoints of paths
/// that ended on a multiple root and look real.
std::vector<Point> candidates_of(const SolutionSet& s, const Box& box, const KeyPointOptions& opts) {
  std::vector<Point> out = s.points;
  const Box loose = box.inflated(1e-3 * box.half_diagonal());
  for (const auto& e : s.endpoints) {
    if (e.status != PathStatus::singular && e.status != PathStatus::converged) continue;
    const Point re = e.x.real();
    if (e.x.imag().norm() > opts.loose_imag * (1.0 + re.norm())) continue;
    if (!loose.contains(re)) continue;
    out.push_back(re);
  }
  return out;
}

std::vector<Point> sorted_merge(std::vector<Point> pts, double radius) {
  std::sort(pts.begin(), pts.end(), lex_less);
  return greedy_dedup(pts, radius);
}

/// Overdetermined system, exact coefficients when the curve system has them.
struct FullSystem {
  std::vector<Polynomial> polys;
  PolySystem compiled;
};

FullSystem singular_system(const CurveSystem& sys) {
  FullSystem out;
  if (sys.exact()) {
    std::vector<RationalPolynomial> all = *sys.exact();
    for (auto& d : exact_minor_determinants(sys)) {
      if (!d.is_zero()) all.push_back(std::move(d));
    }
    for (const auto& p : all) out.polys.push_back(to_float(p));
    out.compiled = PolySystem(std::span<const RationalPolynomial>(all));
  } else {
    out.polys = sys.polys();
    for (auto& d : minor_determinants(sys)) {
      if (!d.is_zero()) out.polys.push_back(std::move(d));
    }
    out.compiled = PolySystem(std::span<const Polynomial>(out.polys));
  }
  return out;
}

std::vector<Point> refine_and_verify(const FullSystem& full, const std::vector<Point>& cands, const Box& box,
                                     const KeyPointOptions& opts) {
  std::vector<Point> kept;
  for (const auto& c : cands) {
    const Point x = gauss_newton(full.compiled, c);
    if (!x.allFinite() || !box.contains(x, opts.solver.box_tol)) continue;
    if (scaled_residual(full.polys, x) > opts.verify_tol) continue;
    kept.push_back(x);
  }
  return sorted_merge(std::move(kept), opts.singular_merge);
}

TracePoint make_trace_point(const CurveSystem& sys, const Point& q, const Eigen::VectorXd& v) {
  TracePoint tp;
  tp.q = q;
  tp.v = v;
  tp.s = tangent_frame(sys.jacobian(q)).sigma_min;
  return tp;
}

}  // namespace

std::vector<Point> singular_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                   const KeyPointOptions& opts, KeyPointLog* log) {
  const std::size_t n = sys.nvars();
  if (box.dim() != n) throw std::invalid_argument("singular_points: box dimension mismatch");
  const FullSystem full = singular_system(sys);
  const auto deltas = minor_determinants(sys);

  std::vector<std::vector<Polynomial>> squares;
  if (n == 2) {
    for (const auto& d : deltas) {
      if (!d.is_zero()) squares.push_back({sys.polys()[0], d});
    }
  } else {
    std::mt19937_64 gen(derive_seed(seed, 11));
    for (int k = 0; k < 2; ++k) {
      auto sq = sys.polys();
      sq.push_back(combination(deltas, random_direction(gen, deltas.size())));
      squares.push_back(std::move(sq));
    }
  }
  if (squares.empty()) return {};  // minors vanish identically

  std::vector<Point> cands;
  for (std::size_t k = 0; k < squares.size(); ++k) {
    const auto sol = solve_zero_dim({squares[k], box}, derive_seed(seed, 100 + k), opts.solver);
    merge_log(log, sol, "singular points");
    const auto c = candidates_of(sol, box, opts);
    cands.insert(cands.end(), c.begin(), c.end());
  }
  return refine_and_verify(full, cands, box, opts);
}

std::vector<Point> pseudo_singular_points(const CurveSystem& sys, const Box& box, double eps, std::uint64_t seed,
                                          const KeyPointOptions& opts, KeyPointLog* log) {
  if (!(eps > 0.0)) throw std::invalid_argument("pseudo_singular_points: eps must be positive");
  const std::size_t n = sys.nvars();
  if (box.dim() != n) throw std::invalid_argument("pseudo_singular_points: box dimension mismatch");
  const auto deltas = minor_determinants(sys);
  std::vector<Polynomial> nonzero;
  for (const auto& d : deltas) {
    if (!d.is_zero()) nonzero.push_back(d);
  }
  if (nonzero.empty()) return {};

  std::mt19937_64 gen(derive_seed(seed, 21));
  std::vector<Point> all;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<Polynomial> others;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (j != i) others.push_back(sys.polys()[j]);
    }
    std::vector<Polynomial> square = others;
    if (n == 2) {
      square = deltas;
    } else {
      square.push_back(combination(deltas, random_direction(gen, deltas.size())));
      square.push_back(combination(deltas, random_direction(gen, deltas.size())));
    }
    bool degenerate = false;
    for (const auto& p : square) degenerate = degenerate || p.is_zero();
    if (degenerate) {
      if (log) log->notes.push_back(fmt::format("pseudo-singular system {} is degenerate; skipped", i));
      continue;
    }
    const auto sol = solve_zero_dim({square, box}, derive_seed(seed, 200 + i), opts.solver);
    merge_log(log, sol, "pseudo-singular points");

    FullSystem full;
    full.polys = others;
    full.polys.insert(full.polys.end(), nonzero.begin(), nonzero.end());
    full.compiled = PolySystem(std::span<const Polynomial>(full.polys));
    for (const auto& q : refine_and_verify(full, candidates_of(sol, box, opts), box, opts)) {
      const std::span<const double> qs(q.data(), n);
      if (std::abs(sys.polys()[i].evaluate(qs)) <= eps) all.push_back(q);
    }
  }
  return sorted_merge(std::move(all), opts.singular_merge);
}

std::vector<Point> witness_points_along(const CurveSystem& sys, const Box& box, const Eigen::VectorXd& a,
                                        std::uint64_t seed, const KeyPointOptions& opts, KeyPointLog* log) {
  const std::size_t n = sys.nvars();
  const std::size_t m = sys.size();
  const std::size_t nv = n + m;
  if (box.dim() != n || static_cast<std::size_t>(a.size()) != n) {
    throw std::invalid_argument("witness_points: dimension mismatch");
  }
  std::vector<Polynomial> eqs;
  for (const auto& p : sys.polys()) eqs.push_back(extend_variables(p, nv));
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial row = Polynomial::constant(nv, -a[static_cast<Eigen::Index>(k)]);
    for (std::size_t i = 0; i < m; ++i) {
      row += extend_variables(sys.jac()[i][k], nv) * Polynomial::variable(nv, n + i);
    }
    eqs.push_back(std::move(row));
  }
  SolverOptions so = opts.solver;
  const auto sol = solve_zero_dim({eqs, std::nullopt}, seed, so);
  merge_log(log, sol, "witness points");

  std::vector<Point> pts;
  for (const auto& p : sol.points) {
    const Point x = p.head(static_cast<Eigen::Index>(n));
    if (box.contains(x, opts.solver.box_tol)) pts.push_back(box.clamp(x));
  }
  return sorted_merge(std::move(pts), 1e-8 * (1.0 + box.half_diagonal()));
}

std::vector<Point> witness_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                  const KeyPointOptions& opts, KeyPointLog* log) {
  std::mt19937_64 gen(derive_seed(seed, 31));
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto dir = random_direction(gen, sys.nvars());
    const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(dir.data(), static_cast<Eigen::Index>(dir.size()));
    auto pts = witness_points_along(sys, box, a, derive_seed(seed, 300 + attempt), opts, log);
    if (!pts.empty()) return pts;
    if (log && attempt == 0) log->notes.push_back("witness points: none found, retried with a fresh direction");
  }
  return {};
}

std::vector<TracePoint> fencing_points(const CurveSystem& sys, const Point& center, double radius,
                                       std::uint64_t seed, const KeyPointOptions& opts, KeyPointLog* log) {
  if (!(radius > 0.0)) throw std::invalid_argument("fencing_points: radius must be positive");
  const std::size_t n = sys.nvars();
  if (static_cast<std::size_t>(center.size()) != n) throw std::invalid_argument("fencing_points: dimension mismatch");
  std::vector<Polynomial> eqs = sys.polys();
  Polynomial sphere = Polynomial::constant(n, -radius * radius);
  for (std::size_t k = 0; k < n; ++k) {
    const Polynomial d = Polynomial::variable(n, k) - Polynomial::constant(n, center[static_cast<Eigen::Index>(k)]);
    sphere += d * d;
  }
  eqs.push_back(std::move(sphere));
  const Box around(center.array() - 1.5 * radius, center.array() + 1.5 * radius);
  const auto sol = solve_zero_dim({eqs, around}, seed, opts.solver);
  merge_log(log, sol, "fencing points");

  std::vector<TracePoint> out;
  for (const auto& q : sol.points) {
    const Eigen::VectorXd d = q - center;
    if (d.norm() == 0.0) continue;
    out.push_back(make_trace_point(sys, q, d.normalized()));
  }
  auto key = [&](const TracePoint& p) {
    return std::atan2(p.q[1] - center[1], p.q[0] - center[0]);
  };
  if (n == 2) {
    std::sort(out.begin(), out.end(), [&](const TracePoint& a, const TracePoint& b) { return key(a) < key(b); });
  } else {
    std::sort(out.begin(), out.end(), [](const TracePoint& a, const TracePoint& b) { return lex_less(a.q, b.q); });
  }
  return out;
}

std::vector<TracePoint> boundary_points(const CurveSystem& sys, const Box& box, std::uint64_t seed,
                                        const KeyPointOptions& opts, KeyPointLog* log) {
  const std::size_t n = sys.nvars();
  if (box.dim() != n) throw std::invalid_argument("boundary_points: box dimension mismatch");
  std::vector<TracePoint> out;
  for (std::size_t k = 0; k < n; ++k) {
    for (int side = 0; side < 2; ++side) {
      const double value = side == 0 ? box.lower()[static_cast<Eigen::Index>(k)] : box.upper()[static_cast<Eigen::Index>(k)];
      std::vector<Polynomial> face;
      if (sys.exact()) {
        const Rational v = to_rational(value);
        for (const auto& p : *sys.exact()) face.push_back(to_float(substitute(p, k, v)));
      } else {
        for (const auto& p : sys.polys()) face.push_back(substitute(p, k, value));
      }
      const std::string where = fmt::format("face x{}={}", k, value);
      bool in_face = false;
      bool empty = false;
      for (const auto& p : face) {
        in_face = in_face || p.is_zero();
        empty = empty || (!p.is_zero() && p.degree() == 0);
      }
      if (empty) continue;
      if (in_face) {
        // A zero equation leaves a curve component inside the face plane.
        if (log) log->notes.push_back("boundary points: curve meets " + where + " in a positive-dimensional set; skipped");
        continue;
      }

      std::vector<Point> lifted;
      auto lift = [&](const Eigen::VectorXd& y) {
        Point q(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0, j = 0; i < n; ++i) {
          q[static_cast<Eigen::Index>(i)] = i == k ? value : y[static_cast<Eigen::Index>(j++)];
        }
        return q;
      };
      Point lo(static_cast<Eigen::Index>(n - 1)), hi(static_cast<Eigen::Index>(n - 1));
      for (std::size_t i = 0, j = 0; i < n; ++i) {
        if (i == k) continue;
        lo[static_cast<Eigen::Index>(j)] = box.lower()[static_cast<Eigen::Index>(i)];
        hi[static_cast<Eigen::Index>(j++)] = box.upper()[static_cast<Eigen::Index>(i)];
      }
      const Box face_box(lo, hi);
      const auto sol = solve_zero_dim({face, face_box}, derive_seed(seed, 400 + 2 * k + side), opts.solver);
      merge_log(log, sol, "boundary points");
      // Tangential contact gives a multiple root that the solver leaves unpolished.
      std::vector<Point> ys = sol.points;
      const PolySystem face_sys{std::span<const Polynomial>(face)};
      for (const auto& e : sol.endpoints) {
        if (e.status != PathStatus::singular) continue;
        const Point re = e.x.real();
        if (e.x.imag().norm() > opts.loose_imag * (1.0 + re.norm())) continue;
        const Point y = gauss_newton(face_sys, re);
        if (!y.allFinite() || !face_box.contains(y, opts.solver.box_tol)) continue;
        if (scaled_residual(face, y) <= opts.verify_tol) ys.push_back(y);
      }
      for (const auto& y : sorted_merge(std::move(ys), opts.singular_merge)) {
        const Point q = box.clamp(lift(y));
        bool dup = false;
        for (const auto& o : out) dup = dup || (o.q - q).norm() <= 1e-8 * (1.0 + q.norm());
        if (dup) continue;
        const auto frame = tangent_frame(sys.jacobian(q));
        Eigen::VectorXd v = frame.tangent;
        const double inward = side == 0 ? 1.0 : -1.0;
        const double comp = inward * v[static_cast<Eigen::Index>(k)];
        if (comp < 0.0) v = -v;
        TracePoint tp = make_trace_point(sys, q, v);
        if (std::abs(comp) <= 1e-9) {
          tp.grazing = true;
          if (log) log->notes.push_back(fmt::format("boundary point on {} is grazing (tangent parallel to the face)", where));
        }
        out.push_back(std::move(tp));
      }
    }
  }
  return out;
}

}  // namespace curvetrace
