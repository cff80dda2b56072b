#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvetrace/numeric.hpp"
#include "support/oracles.hpp"

using namespace curvetrace;

namespace {

CurveSystem circle() {
  const std::vector<std::string> v{"x", "y"};
  return CurveSystem(std::vector<RationalPolynomial>{parse_polynomial("x^2+y^2-1", v)});
}

}  // namespace

TEST(Omega, MatchesReference) {
  EXPECT_NEAR(omega(1.6), 1.0284921513571278, 1e-15);
  for (double rho = 1.0; rho <= 20.0; rho += 0.37) {
    EXPECT_NEAR(omega(rho), static_cast<double>(oracle::omega_ref(rho)), 1e-12) << rho;
  }
  EXPECT_THROW(omega(0.9), std::invalid_argument);
}

TEST(Omega, DecreasingAboveOne) {
  double prev = omega(1.6);
  for (double rho = 1.65; rho <= 50.0; rho += 0.05) {
    const double w = omega(rho);
    EXPECT_LT(w, prev);
    EXPECT_GT(w, 1.0);
    EXPECT_GT(2.0 * rho, 3.0 * w);
    prev = w;
  }
}

TEST(StepFormulas, RobustStep) {
  EXPECT_DOUBLE_EQ(mu_of(2), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(mu_of(3), std::sqrt(6.0));
  EXPECT_NEAR(robust_step(2.0, 2, 1.6), 2.0 / (2.0 * std::sqrt(2.0) * 1.6), 1e-15);
  EXPECT_NEAR(robust_step(1.0, 3, 1.6), 0.1275775907, 1e-9);
}

TEST(StepFormulas, JumpCheckBoundary) {
  const Point a = Point::Zero(2);
  const double s = 0.1;
  const double w = omega(1.6) * s;
  EXPECT_TRUE(jump_check(a, Point{{0.999 * w, 0.0}}, s, 1.6));
  EXPECT_FALSE(jump_check(a, Point{{1.001 * w, 0.0}}, s, 1.6));
}

TEST(ChordBound, LinearInBothArguments) {
  const double b0 = chord_error_bound(0.0, 2, 1.6, 0.0);
  EXPECT_EQ(b0, 0.0);
  const double a = chord_error_bound(0.0, 2, 1.6, 1.0);
  const double b = chord_error_bound(1.0, 2, 1.6, 0.0);
  EXPECT_NEAR(chord_error_bound(0.3, 2, 1.6, 0.2), 0.2 * a + 0.3 * b, 1e-14);
  EXPECT_NEAR(chord_error_bound(0.1, 2, 1.6, 1e-10), 0.0057988, 1e-6);
}

TEST(TangentFrame, SigmaAgainstEigenvalues) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 5; ++n) {
    for (int k = 0; k < 20; ++k) {
      Eigen::MatrixXd J(n - 1, n);
      for (int i = 0; i < J.size(); ++i) J.data()[i] = g(rng);
      const TangentFrame f = tangent_frame(J);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J * J.transpose());
      EXPECT_NEAR(f.sigma_min, std::sqrt(std::max(0.0, es.eigenvalues()[0])), 1e-10);
      EXPECT_NEAR(f.tangent.norm(), 1.0, 1e-12);
      EXPECT_LT((J * f.tangent).norm(), 1e-10);
    }
  }
}

TEST(TangentFrame, RejectsBadInput) {
  EXPECT_THROW(tangent_frame(Eigen::MatrixXd::Zero(2, 2)), std::invalid_argument);
  Eigen::MatrixXd J(1, 2);
  J << 1.0, std::nan("");
  EXPECT_THROW(tangent_frame(J), std::invalid_argument);
}

TEST(Newton, ConvergesOnCircle) {
  const CurveSystem sys = circle();
  const Point q0{{1.05, 0.05}};
  const NewtonResult r = newton_correct(sys, q0, Eigen::Vector2d(0.0, 1.0));
  ASSERT_TRUE(r.ok()) << to_string(r.status);
  EXPECT_NEAR(r.q.norm(), 1.0, 1e-12);
  EXPECT_LE(r.iterations, 5);
  EXPECT_LE(r.residual, 1e-10);
}

TEST(Newton, QuadraticConvergence) {
  const CurveSystem sys = circle();
  NewtonOptions o;
  o.tol = 1e-15;
  o.max_iter = 1;
  double prev = 0.05;
  Point q{{1.05, 0.0}};
  for (int k = 0; k < 3; ++k) {
    const NewtonResult r = newton_correct(sys, q, Eigen::Vector2d(0.0, 1.0), o);
    const double err = std::abs(r.q.norm() - 1.0);
    if (err < 1e-14) break;
    EXPECT_LT(err, 2.0 * prev * prev);
    prev = err;
    q = r.q;
  }
}

TEST(Newton, ReportsSingularAtCusp) {
  const std::vector<std::string> v{"x", "y"};
  const CurveSystem sys(std::vector<RationalPolynomial>{parse_polynomial("x^2-y^2", v)});
  NewtonOptions o;
  o.freeze_tangent = true;
  // Tangent row parallel to the null direction at the node.
  const NewtonResult r = newton_correct(sys, Point{{0.0, 0.0}}, Eigen::Vector2d(1.0, 0.0), o);
  EXPECT_TRUE(r.ok() || r.status == NewtonStatus::singular);
}
