#pragma once

#include <optional>
#include <vector>

#include "curvetrace/geometry.hpp"
#include "curvetrace/poly_system.hpp"
#include "curvetrace/polynomial.hpp"

namespace curvetrace {

enum class CoefficientMode { exact, perturbed };

/// n-1 polynomials in n variables defining a real curve, with the symbolic
/// Jacobian. An exact system keeps its rational polynomials; numerics always
/// run on float snapshots (or long-double roundings of the exact ones).
class CurveSystem {
 public:
  explicit CurveSystem(std::vector<Polynomial> polys);
  explicit CurveSystem(std::vector<RationalPolynomial> polys);

  std::size_t nvars() const { return nvars_; }
  std::size_t size() const { return polys_.size(); }
  CoefficientMode coefficient_mode() const {
    return exact_ ? CoefficientMode::exact : CoefficientMode::perturbed;
  }

  const std::vector<Polynomial>& polys() const { return polys_; }
  /// jac()[i][j] = d polys[i] / d x_j.
  const std::vector<std::vector<Polynomial>>& jac() const { return jac_; }
  /// Rational polynomials, present only in exact mode.
  const std::optional<std::vector<RationalPolynomial>>& exact() const { return exact_; }
  const PolySystem& compiled() const { return compiled_; }

  Eigen::VectorXd values(const Point& x) const { return compiled_.values(x); }
  Eigen::MatrixXd jacobian(const Point& x) const { return compiled_.jacobian(x); }
  void evaluate(const Point& x, Eigen::VectorXd& f, Eigen::MatrixXd& j) const { compiled_.evaluate(x, f, j); }

 private:
  void init();

  std::size_t nvars_ = 0;
  std::vector<Polynomial> polys_;
  std::optional<std::vector<RationalPolynomial>> exact_;
  std::vector<std::vector<Polynomial>> jac_;
  PolySystem compiled_;
};

/// Determinant by cofactor expansion along the first row; works over any
/// commutative ring type with +, -, *. Intended for the tiny (n-1)x(n-1)
/// minors of a Jacobian.
template <class P>
P cofactor_determinant(const std::vector<std::vector<P>>& m, const P& one) {
  const std::size_t k = m.size();
  if (k == 0) return one;
  if (k == 1) return m[0][0];
  if (k == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  P det = one - one;
  for (std::size_t col = 0; col < k; ++col) {
    std::vector<std::vector<P>> sub;
    sub.reserve(k - 1);
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<P> row;
      row.reserve(k - 1);
      for (std::size_t c = 0; c < k; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      sub.push_back(std::move(row));
    }
    P term = m[0][col] * cofactor_determinant(sub, one);
    if (col % 2 == 0) {
      det = det + term;
    } else {
      det = det - term;
    }
  }
  return det;
}

/// Delta_i = det of the Jacobian with column i removed, i = 0..n-1. Uses
/// exact arithmetic when the system is exact, then takes a float snapshot.
std::vector<Polynomial> minor_determinants(const CurveSystem& sys);
/// Exact minors; requires an exact system.
std::vector<RationalPolynomial> exact_minor_determinants(const CurveSystem& sys);

/// x = center + radius * y, system values divided by value_scale.
struct AffineMap {
  Point center;
  double radius = 1.0;
  double value_scale = 1.0;

  Point to_unit(const Point& x) const { return (x - center) / radius; }
  Point to_original(const Point& y) const { return center + radius * y; }
  double length_to_unit(double len) const { return len / radius; }
  double length_to_original(double len) const { return len * radius; }
};

struct RescaledSystem {
  CurveSystem system;
  Box box;
  AffineMap map;
  /// Sampled estimate of max ||grad J_ij|| over the unit ball before value scaling.
  double gradient_bound = 0.0;
};

/// Moves the box into the unit ball (its corners land on the unit sphere)
/// and divides every polynomial by the sampled gradient bound so the bound
/// of the result is 1. The bound is estimated, not certified.
RescaledSystem rescale_system(const CurveSystem& sys, const Box& box);

/// max over sampled z in the unit ball of ||grad J_ij(z)||_2, sampling a
/// regular grid with at least 10^n points inside the ball.
double estimate_gradient_bound(const CurveSystem& sys);

}  // namespace curvetrace
