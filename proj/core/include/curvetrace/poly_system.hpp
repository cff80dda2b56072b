#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curvetrace/polynomial.hpp"

namespace curvetrace {

/// A list of polynomials flattened for fast repeated evaluation of values and
/// first derivatives. Coefficients are stored in long double; rational input
/// is rounded once to long double so that long-double evaluation sees the
/// exact coefficients to 64-bit precision.
///
/// Real evaluation uses a shared per-call power table and Neumaier
/// compensated summation over terms; complex evaluation sums plainly.
class PolySystem {
 public:
  PolySystem() = default;
  explicit PolySystem(std::span<const Polynomial> polys);
  explicit PolySystem(std::span<const RationalPolynomial> polys);

  std::size_t size() const { return values_.size(); }
  std::size_t nvars() const { return nvars_; }
  const std::vector<int>& degrees() const { return degrees_; }

  /// values has size(); jacobian, when non-empty, is row-major size() x nvars().
  template <class T>
  void evaluate(std::span<const T> x, std::span<T> values, std::span<T> jacobian = {}) const;

  Eigen::VectorXd values(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& values, Eigen::MatrixXd& jacobian) const;

 private:
  struct Compiled {
    std::vector<long double> coeffs;
    std::vector<std::uint16_t> exps;  // coeffs.size() * nvars
  };

  template <class C>
  void build(std::span<const BasicPolynomial<C>> polys);
  template <class C>
  Compiled compile(const BasicPolynomial<C>& p) const;

  template <class T>
  T eval_one(const Compiled& c, const std::vector<T>& powers) const;

  std::size_t nvars_ = 0;
  unsigned max_degree_ = 0;
  std::vector<int> degrees_;
  std::vector<Compiled> values_;
  std::vector<Compiled> derivs_;  // size() * nvars(), row-major
};

long double to_long_double(const Rational& q);

}  // namespace curvetrace
