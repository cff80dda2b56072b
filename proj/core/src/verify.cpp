#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "curvetrace/driver.hpp"
#include "curvetrace/numeric.hpp"

namespace curvetrace {

namespace {

/// Gradient Newton towards f = 0 for plane curves; min-norm Gauss-Newton in general.
Point project(const CurveSystem& sys, Point x, int iterations) {
  Eigen::VectorXd f;
  Eigen::MatrixXd j;
  for (int it = 0; it < iterations; ++it) {
    sys.evaluate(x, f, j);
    if (!f.allFinite() || !j.allFinite()) break;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(j);
    const Eigen::VectorXd d = cod.solve(f);
    if (!d.allFinite()) break;
    x -= d;
    if (d.norm() < 1e-14 * (1.0 + x.norm())) break;
  }
  return x;
}

double distance_to_output(const Point& p, const ApproxCurve& curve) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : curve.chains) {
    const auto& v = c.vertices;
    if (v.size() == 1) best = std::min(best, (p - v[0]).norm());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
  }
  for (const auto& s : curve.singular_points) best = std::min(best, (p - s).norm());
  return best;
}

}  // namespace

std::vector<Point> sample_plane_curve(const CurveSystem& sys, const Box& box, double resolution) {
  if (sys.nvars() != 2) throw std::invalid_argument("sample_plane_curve: needs a plane curve");
  if (!(resolution > 0.0)) throw std::invalid_argument("sample_plane_curve: resolution must be positive");
  const Eigen::Vector2d lo = box.lower();
  const Eigen::Vector2d hi = box.upper();
  const auto nx = static_cast<std::size_t>(std::ceil((hi[0] - lo[0]) / resolution));
  const auto ny = static_cast<std::size_t>(std::ceil((hi[1] - lo[1]) / resolution));
  auto node = [&](std::size_t i, std::size_t k) {
    return Point(Eigen::Vector2d(lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / static_cast<double>(nx),
                                 lo[1] + (hi[1] - lo[1]) * static_cast<double>(k) / static_cast<double>(ny)));
  };
  std::vector<double> val((nx + 1) * (ny + 1));
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t k = 0; k <= ny; ++k) val[i * (ny + 1) + k] = sys.values(node(i, k))[0];
  }
  std::vector<Point> out;
  auto edge = [&](std::size_t i0, std::size_t k0, std::size_t i1, std::size_t k1) {
    const double a = val[i0 * (ny + 1) + k0];
    const double b = val[i1 * (ny + 1) + k1];
    if (a == 0.0) {
      out.push_back(node(i0, k0));
      return;
    }
    if ((a < 0.0) == (b < 0.0) || b == 0.0) return;
    const Point pa = node(i0, k0);
    const Point pb = node(i1, k1);
    const Point guess = pa + (a / (a - b)) * (pb - pa);
    const Point p = project(sys, guess, 4);
    out.push_back(p.allFinite() && (p - guess).norm() <= resolution && box.contains(p) ? p : guess);
  };
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t k = 0; k <= ny; ++k) {
      if (i < nx) edge(i, k, i + 1, k);
      if (k < ny) edge(i, k, i, k + 1);
      if (i == nx && k == ny && val[i * (ny + 1) + k] == 0.0) out.push_back(node(i, k));
    }
  }
  return out;
}

VerifyResult verify_epsilon(const ApproxCurve& curve, const CurveSystem& sys, const Box& box,
                            const VerifyOptions& opts) {
  if (opts.n_samples < 1000) throw std::invalid_argument("verify_epsilon: n_samples must be at least 1000");
  VerifyResult res;

  std::vector<Point> samples;
  bool have_oracle = true;
  if (opts.parametrization) {
    for (std::size_t i = 0; i < opts.n_samples; ++i) {
      const Point p = opts.parametrization(static_cast<double>(i) / static_cast<double>(opts.n_samples));
      if (box.contains(p, 1e-12)) samples.push_back(p);
    }
  } else if (sys.nvars() == 2) {
    double res_grid = opts.grid_resolution;
    if (res_grid <= 0.0) {
      const Point w = box.upper() - box.lower();
      res_grid = std::sqrt(w[0] * w[1] / static_cast<double>(opts.n_samples));
    }
    samples = sample_plane_curve(sys, box, res_grid);
  } else {
    have_oracle = false;
  }

  if (have_oracle) {
    res.curve_samples = samples.size();
    double worst = 0.0;
    for (const auto& p : samples) worst = std::max(worst, distance_to_output(p, curve));
    res.curve_to_chain = worst;
  }

  double worst = 0.0;
  auto check = [&](const Point& x) {
    ++res.chain_samples;
    double d = (project(sys, x, 30) - x).norm();
    if (!std::isfinite(d)) d = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) d = std::min(d, (p - x).norm());
    worst = std::max(worst, d);
  };
  for (const auto& c : curve.chains) {
    const auto& v = c.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      check(v[i]);
      if (i + 1 < v.size()) {
        for (double t : {0.25, 0.5, 0.75}) check(v[i] + t * (v[i + 1] - v[i]));
      }
    }
  }
  res.chain_to_curve = worst;
  return res;
}

}  // namespace curvetrace
