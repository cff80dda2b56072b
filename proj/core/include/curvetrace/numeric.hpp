#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "curvetrace/curve_system.hpp"
#include "curvetrace/geometry.hpp"

namespace curvetrace {

struct TangentFrame {
  double sigma_min = 0.0;
  Eigen::VectorXd tangent;  // unit; sign unspecified
};

/// Full SVD of an (n-1) x n Jacobian; tangent is the last right singular
/// vector. Throws std::invalid_argument on non-finite entries or bad shape.
TangentFrame tangent_frame(const Eigen::MatrixXd& jac);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 20;
  double cond_limit = 1e12;
  /// Iterates farther than this from q0 count as divergence. 0 means
  /// 10x the length of the first update.
  double divergence_radius = 0.0;
  /// Keep the tangent row fixed at the input tangent instead of refreshing it.
  bool freeze_tangent = false;
};

enum class NewtonStatus { converged, max_iterations, singular, diverged };

const char* to_string(NewtonStatus s);

struct NewtonResult {
  Point q;
  double residual = 0.0;  // ||F(q)||_inf
  int iterations = 0;     // updates applied
  NewtonStatus status = NewtonStatus::max_iterations;
  double condition = 0.0;
  bool ok() const { return status == NewtonStatus::converged; }
};

/// Corrector on the augmented square system [J; t^T] dq = [F; 0]. The
/// tangent row is refreshed from the SVD at every iterate (oriented along
/// the previous one) unless freeze_tangent is set.
NewtonResult newton_correct(const CurveSystem& sys, const Point& q0, const Eigen::VectorXd& tangent,
                            const NewtonOptions& opts = {});

/// Jump factor; throws std::invalid_argument for rho < 1.
double omega(double rho);

/// mu = sqrt(n(n-1)).
double mu_of(std::size_t n);

/// s = sigma / (2 mu rho).
double robust_step(double sigma, std::size_t n, double rho);

/// ||z1 - z0|| < omega(rho) * s.
bool jump_check(const Point& z0, const Point& z1, double s, double rho);

/// Hausdorff bound between a traced chord and the curve arc it spans.
double chord_error_bound(double sigma_tilde, std::size_t n, double rho_star, double tau);

}  // namespace curvetrace
