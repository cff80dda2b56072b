#include "curvetrace/numeric.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace curvetrace {

TangentFrame tangent_frame(const Eigen::MatrixXd& jac) {
  const auto n = jac.cols();
  if (n < 2 || jac.rows() != n - 1) throw std::invalid_argument("tangent_frame: expected an (n-1) x n matrix");
  if (!jac.allFinite()) throw std::invalid_argument("tangent_frame: non-finite Jacobian entry");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  TangentFrame out;
  out.sigma_min = svd.singularValues()(n - 2);
  out.tangent = svd.matrixV().col(n - 1);
  out.tangent.normalize();
  return out;
}

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::singular: return "singular";
    case NewtonStatus::diverged: return "diverged";
  }
  return "unknown";
}

NewtonResult newton_correct(const CurveSystem& sys, const Point& q0, const Eigen::VectorXd& tangent,
                            const NewtonOptions& opts) {
  const auto n = static_cast<Eigen::Index>(sys.nvars());
  if (q0.size() != n || tangent.size() != n) throw std::invalid_argument("newton_correct: dimension mismatch");
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw std::invalid_argument("newton_correct: bad options");

  NewtonResult res;
  res.q = q0;
  Eigen::VectorXd t = tangent.normalized();
  Eigen::VectorXd f;
  Eigen::MatrixXd j;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs(n);
  double radius = opts.divergence_radius;

  for (int it = 0;; ++it) {
    sys.evaluate(res.q, f, j);
    res.residual = f.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res.residual) || !j.allFinite()) {
      res.status = NewtonStatus::diverged;
      return res;
    }
    if (!opts.freeze_tangent) {
      Eigen::JacobiSVD<Eigen::MatrixXd> tsvd(j, Eigen::ComputeFullV);
      Eigen::VectorXd fresh = tsvd.matrixV().col(n - 1);
      t = fresh.dot(t) < 0.0 ? Eigen::VectorXd(-fresh) : fresh;
    }
    a.topRows(n - 1) = j;
    a.row(n - 1) = t.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    res.condition = std::max(sv(0), 1.0) / std::min(sv(n - 1), 1.0);
    if (!(sv(n - 1) > 0.0) || res.condition > opts.cond_limit) {
      res.status = NewtonStatus::singular;
      return res;
    }
    rhs.head(n - 1) = f;
    rhs(n - 1) = 0.0;
    const Eigen::VectorXd delta = svd.solve(rhs);
    const double step = delta.norm();
    if (res.residual <= opts.tol && step <= opts.tol) {
      res.status = NewtonStatus::converged;
      return res;
    }
    if (it == opts.max_iter) {
      res.status = NewtonStatus::max_iterations;
      return res;
    }
    if (radius <= 0.0) radius = 10.0 * std::max(step, opts.tol);
    res.q -= delta;
    ++res.iterations;
    if ((res.q - q0).norm() > radius) {
      res.status = NewtonStatus::diverged;
      return res;
    }
  }
}

double omega(double rho) {
  if (!(rho >= 1.0)) throw std::invalid_argument("omega: rho must be >= 1");
  return std::sqrt(2.0 * (2.0 * rho - 1.0) * (2.0 * rho - 2.0 * std::sqrt(rho * (rho - 1.0)) - 1.0));
}

double mu_of(std::size_t n) {
  const auto d = static_cast<double>(n);
  return std::sqrt(d * (d - 1.0));
}

double robust_step(double sigma, std::size_t n, double rho) { return sigma / (2.0 * mu_of(n) * rho); }

bool jump_check(const Point& z0, const Point& z1, double s, double rho) {
  return (z1 - z0).norm() < omega(rho) * s;
}

double chord_error_bound(double sigma_tilde, std::size_t n, double rho_star, double tau) {
  const double w = omega(rho_star);
  assert(w >= 1.0);
  const double mu = mu_of(n);
  return std::tan(2.0 * std::acos(1.0 / w)) * w / (4.0 * mu * rho_star) * (mu * tau + sigma_tilde) + tau;
}

}  // namespace curvetrace
