#include "curvetrace/poly_system.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>

namespace curvetrace {

long double to_long_double(const Rational& q) {
  if (sgn(q) == 0) return 0.0L;
  const mpf_class f(q, 160);
  mp_exp_t exp = 0;
  std::string digits = f.get_str(exp, 10, 40);
  bool neg = false;
  if (!digits.empty() && digits[0] == '-') {
    neg = true;
    digits.erase(0, 1);
  }
  const std::string s = (neg ? "-0." : "0.") + digits + "e" + std::to_string(exp);
  return std::strtold(s.c_str(), nullptr);
}

namespace {

long double coeff_to_ld(double c) { return static_cast<long double>(c); }
long double coeff_to_ld(const Rational& c) { return to_long_double(c); }

template <class T>
T from_ld(long double c) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return T(static_cast<double>(c), 0.0);
  } else {
    return static_cast<T>(c);
  }
}

}  // namespace

PolySystem::PolySystem(std::span<const Polynomial> polys) { build(polys); }
PolySystem::PolySystem(std::span<const RationalPolynomial> polys) { build(polys); }

template <class C>
void PolySystem::build(std::span<const BasicPolynomial<C>> polys) {
  nvars_ = polys.empty() ? 0 : polys.front().nvars();
  for (const auto& p : polys) {
    if (p.nvars() != nvars_) throw std::invalid_argument("PolySystem: polynomials have different nvars");
    for (std::size_t k = 0; k < nvars_; ++k) max_degree_ = std::max(max_degree_, p.degree_in(k));
    if (max_degree_ > std::numeric_limits<std::uint16_t>::max()) throw std::invalid_argument("degree too large");
  }
  for (const auto& p : polys) {
    values_.push_back(compile(p));
    degrees_.push_back(p.degree());
  }
  for (const auto& p : polys) {
    for (std::size_t k = 0; k < nvars_; ++k) derivs_.push_back(compile(differentiate(p, k)));
  }
}

template <class C>
PolySystem::Compiled PolySystem::compile(const BasicPolynomial<C>& p) const {
  Compiled c;
  c.coeffs.reserve(p.size());
  c.exps.reserve(p.size() * nvars_);
  for (const auto& [e, coef] : p.terms()) {
    c.coeffs.push_back(coeff_to_ld(coef));
    for (unsigned k : e) c.exps.push_back(static_cast<std::uint16_t>(k));
  }
  return c;
}

template <class T>
T PolySystem::eval_one(const Compiled& c, const std::vector<T>& powers) const {
  const std::size_t stride = max_degree_ + 1;
  T sum = T(0);
  [[maybe_unused]] T comp = T(0);
  for (std::size_t t = 0; t < c.coeffs.size(); ++t) {
    T term = from_ld<T>(c.coeffs[t]);
    const std::uint16_t* e = c.exps.data() + t * nvars_;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (e[k] != 0) term *= powers[k * stride + e[k]];
    }
    if constexpr (std::is_floating_point_v<T>) {
      const T s = sum + term;
      comp += (std::abs(sum) >= std::abs(term)) ? (sum - s) + term : (term - s) + sum;
      sum = s;
    } else {
      sum += term;
    }
  }
  if constexpr (std::is_floating_point_v<T>) {
    return sum + comp;
  } else {
    return sum;
  }
}

template <class T>
void PolySystem::evaluate(std::span<const T> x, std::span<T> values, std::span<T> jacobian) const {
  if (x.size() != nvars_ || values.size() != values_.size()) {
    throw std::invalid_argument("PolySystem::evaluate: dimension mismatch");
  }
  const std::size_t stride = max_degree_ + 1;
  std::vector<T> powers(nvars_ * stride);
  for (std::size_t k = 0; k < nvars_; ++k) {
    powers[k * stride] = T(1);
    for (unsigned j = 1; j <= max_degree_; ++j) powers[k * stride + j] = powers[k * stride + j - 1] * x[k];
  }
  for (std::size_t i = 0; i < values_.size(); ++i) values[i] = eval_one(values_[i], powers);
  if (!jacobian.empty()) {
    if (jacobian.size() != derivs_.size()) throw std::invalid_argument("PolySystem::evaluate: jacobian size");
    for (std::size_t i = 0; i < derivs_.size(); ++i) jacobian[i] = eval_one(derivs_[i], powers);
  }
}

template void PolySystem::evaluate<double>(std::span<const double>, std::span<double>, std::span<double>) const;
template void PolySystem::evaluate<long double>(std::span<const long double>, std::span<long double>,
                                                std::span<long double>) const;
template void PolySystem::evaluate<std::complex<double>>(std::span<const std::complex<double>>,
                                                         std::span<std::complex<double>>,
                                                         std::span<std::complex<double>>) const;

Eigen::VectorXd PolySystem::values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
  evaluate<double>(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                   std::span<double>(v.data(), static_cast<std::size_t>(v.size())));
  return v;
}

Eigen::MatrixXd PolySystem::jacobian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v;
  Eigen::MatrixXd j;
  evaluate(x, v, j);
  return j;
}

void PolySystem::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& values, Eigen::MatrixXd& jacobian) const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto m = static_cast<Eigen::Index>(size());
  const auto n = static_cast<Eigen::Index>(nvars_);
  values.resize(m);
  RowMajor jr(m, n);
  evaluate<double>(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                   std::span<double>(values.data(), static_cast<std::size_t>(m)),
                   std::span<double>(jr.data(), static_cast<std::size_t>(m * n)));
  jacobian = jr;
}

}  // namespace curvetrace
