#pragma once

// Reference implementations used only by the tests. None of them call into
// the library under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Dense bivariate polynomial: coefficient of x^i y^j at c[{i, j}].
struct Poly2 {
  std::map<std::pair<int, int>, double> c;

  double eval(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, a] : c) s += a * std::pow(x, e.first) * std::pow(y, e.second);
    return s;
  }
  double dx(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, a] : c)
      if (e.first > 0) s += a * e.first * std::pow(x, e.first - 1) * std::pow(y, e.second);
    return s;
  }
  double dy(double x, double y) const {
    double s = 0.0;
    for (const auto& [e, a] : c)
      if (e.second > 0) s += a * e.second * std::pow(x, e.first) * std::pow(y, e.second - 1);
    return s;
  }
  std::string str() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [e, a] : c) {
      os << (first ? "" : " + ") << "(" << a << ")";
      if (e.first) os << "*x^" << e.first;
      if (e.second) os << "*y^" << e.second;
      first = false;
    }
    return first ? "0" : os.str();
  }
};

struct Interval {
  double lo, hi;
};

inline Interval mul(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

inline Interval ipow(Interval a, int k) {
  Interval r{1.0, 1.0};
  for (int i = 0; i < k; ++i) r = mul(r, a);
  if (k % 2 == 0 && k > 0 && a.lo < 0.0 && a.hi > 0.0) r.lo = 0.0;
  return r;
}

/// Naive interval enclosure of p over a box.
inline Interval enclose(const Poly2& p, Interval x, Interval y) {
  Interval s{0.0, 0.0};
  for (const auto& [e, a] : p.c) {
    Interval t = mul(ipow(x, e.first), ipow(y, e.second));
    t = mul(t, {a, a});
    s.lo += t.lo;
    s.hi += t.hi;
  }
  const double pad = 1e-12 * (1.0 + std::abs(s.lo) + std::abs(s.hi));
  return {s.lo - pad, s.hi + pad};
}

/// Real roots of {f, g} in [lo, hi]^2 by interval subdivision down to cells
/// of width `leaf`, then Newton from each surviving cell.
inline std::vector<Eigen::Vector2d> subdivision_roots(const Poly2& f, const Poly2& g, double lo, double hi,
                                                      double leaf = 1e-3) {
  std::vector<Eigen::Vector2d> roots;
  std::vector<std::array<double, 4>> stack{{lo, hi, lo, hi}};
  while (!stack.empty()) {
    const auto b = stack.back();
    stack.pop_back();
    const Interval X{b[0], b[1]}, Y{b[2], b[3]};
    const Interval F = enclose(f, X, Y), G = enclose(g, X, Y);
    if (F.lo > 0.0 || F.hi < 0.0 || G.lo > 0.0 || G.hi < 0.0) continue;
    if (b[1] - b[0] > leaf) {
      const double mx = 0.5 * (b[0] + b[1]), my = 0.5 * (b[2] + b[3]);
      stack.push_back({b[0], mx, b[2], my});
      stack.push_back({mx, b[1], b[2], my});
      stack.push_back({b[0], mx, my, b[3]});
      stack.push_back({mx, b[1], my, b[3]});
      continue;
    }
    Eigen::Vector2d z(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]));
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      Eigen::Matrix2d J;
      J << f.dx(z[0], z[1]), f.dy(z[0], z[1]), g.dx(z[0], z[1]), g.dy(z[0], z[1]);
      const Eigen::Vector2d r(f.eval(z[0], z[1]), g.eval(z[0], z[1]));
      if (std::abs(J.determinant()) < 1e-300) break;
      const Eigen::Vector2d d = J.partialPivLu().solve(r);
      z -= d;
      if (d.norm() < 1e-14 * (1.0 + z.norm())) {
        ok = true;
        break;
      }
    }
    if (!ok || (z - Eigen::Vector2d(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]))).norm() > 4.0 * leaf) continue;
    if (z[0] < lo || z[0] > hi || z[1] < lo || z[1] > hi) continue;
    bool dup = false;
    for (const auto& r : roots) dup = dup || (r - z).norm() < 1e-8;
    if (!dup) roots.push_back(z);
  }
  return roots;
}

/// Random dense polynomial of total degree <= d with coefficients in [-1, 1]
/// rounded to three decimals.
inline Poly2 random_poly2(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Poly2 p;
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) p.c[{i, j}] = std::round(u(rng) * 1000.0) / 1000.0;
  return p;
}

/// omega(rho) in the rationalised form sqrt(2(2 rho - 1)) (sqrt(rho) - sqrt(rho - 1)),
/// evaluated in long double.
inline long double omega_ref(long double rho) {
  return std::sqrt(2.0L * (2.0L * rho - 1.0L)) * (std::sqrt(rho) - std::sqrt(rho - 1.0L));
}

/// Points on the circle of radius r around (cx, cy).
inline std::vector<Eigen::Vector2d> circle_samples(double cx, double cy, double r, int n) {
  std::vector<Eigen::Vector2d> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * M_PI * k / n;
    out.emplace_back(cx + r * std::cos(t), cy + r * std::sin(t));
  }
  return out;
}

struct ObjCheck {
  bool ok = false;
  std::size_t vertices = 0;
  std::size_t lines = 0;
  std::string error;
};

/// Every "v" has three finite numbers; every "l" references existing
/// 1-based vertices and has at least two of them.
inline ObjCheck check_obj(const std::string& text) {
  ObjCheck r;
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<long>> ls;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ws(line);
    std::string tag;
    ws >> tag;
    if (tag == "v") {
      double a, b, c;
      if (!(ws >> a >> b >> c) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        r.error = "bad vertex: " + line;
        return r;
      }
      ++r.vertices;
    } else if (tag == "l") {
      std::vector<long> idx;
      long k;
      while (ws >> k) idx.push_back(k);
      if (idx.size() < 2) {
        r.error = "short polyline: " + line;
        return r;
      }
      ls.push_back(idx);
    } else {
      r.error = "unknown record: " + line;
      return r;
    }
  }
  for (const auto& l : ls)
    for (long k : l)
      if (k < 1 || k > static_cast<long>(r.vertices)) {
        r.error = "index out of range";
        return r;
      }
  r.lines = ls.size();
  r.ok = true;
  return r;
}

}  // namespace oracle
