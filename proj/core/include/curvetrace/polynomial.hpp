#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <iterator>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <gmpxx.h>

namespace curvetrace {

using Rational = mpq_class;

/// Exponent vector of a monomial; its length equals the number of variables.
using Exponents = std::vector<unsigned>;

namespace detail {

inline bool is_zero_coeff(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero_coeff(double c) { return c == 0.0; }

}  // namespace detail

/// Sparse multivariate polynomial. Terms are kept in a map ordered by
/// exponent vector; no stored term has a zero coefficient.
template <class Coeff>
class BasicPolynomial {
 public:
  using Terms = std::map<Exponents, Coeff>;
  using coefficient_type = Coeff;

  BasicPolynomial() = default;
  explicit BasicPolynomial(std::size_t nvars) : nvars_(nvars) {}

  static BasicPolynomial constant(std::size_t nvars, const Coeff& c) {
    BasicPolynomial p(nvars);
    p.add_term(Exponents(nvars, 0u), c);
    return p;
  }

  static BasicPolynomial variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars) throw std::out_of_range("variable index out of range");
    Exponents e(nvars, 0u);
    e[index] = 1;
    BasicPolynomial p(nvars);
    p.add_term(e, Coeff(1));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (unsigned k : e) s += static_cast<int>(k);
      d = std::max(d, s);
    }
    return d;
  }

  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  Coeff coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(const Exponents& e, const Coeff& c) {
    if (e.size() != nvars_) throw std::invalid_argument("exponent vector length differs from nvars");
    if (detail::is_zero_coeff(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  BasicPolynomial& operator+=(const BasicPolynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  BasicPolynomial& operator-=(const BasicPolynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, Coeff(-c));
    return *this;
  }

  BasicPolynomial& operator*=(const Coeff& s) {
    if (detail::is_zero_coeff(s)) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = detail::is_zero_coeff(it->second) ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
  friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
  friend BasicPolynomial operator*(BasicPolynomial a, const Coeff& s) { return a *= s; }
  friend BasicPolynomial operator*(const Coeff& s, BasicPolynomial a) { return a *= s; }
  friend BasicPolynomial operator-(BasicPolynomial a) { return a *= Coeff(-1); }

  friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
    a.check_compatible(b);
    BasicPolynomial r(a.nvars_);
    Exponents e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, Coeff(ca * cb));
      }
    }
    return r;
  }

  BasicPolynomial& operator*=(const BasicPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const BasicPolynomial& a, const BasicPolynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// Direct evaluation at x (|x| = nvars). For floating types the terms are
  /// accumulated with Neumaier compensated summation; other scalar types
  /// (rational, complex) use plain summation.
  template <class T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != nvars_) throw std::invalid_argument("evaluate: point dimension differs from nvars");
    T sum = T(0);
    [[maybe_unused]] T comp = T(0);
    for (const auto& [e, c] : terms_) {
      T term = convert<T>(c);
      for (std::size_t k = 0; k < nvars_; ++k) {
        for (unsigned j = 0; j < e[k]; ++j) term *= x[k];
      }
      if constexpr (std::is_floating_point_v<T>) {
        const T t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
          comp += (sum - t) + term;
        } else {
          comp += (term - t) + sum;
        }
        sum = t;
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
  T evaluate(std::initializer_list<T> x) const {
    return evaluate(std::span<const T>(x.begin(), x.size()));
  }

 private:
  template <class T>
  static T convert(const Coeff& c) {
    if constexpr (std::is_same_v<Coeff, Rational> && !std::is_same_v<T, Rational>) {
      if constexpr (std::is_same_v<T, std::complex<double>>) {
        return T(c.get_d());
      } else {
        return static_cast<T>(c.get_d());
      }
    } else {
      return T(c);
    }
  }

  void check_compatible(const BasicPolynomial& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomials have different numbers of variables");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

using Polynomial = BasicPolynomial<double>;
using RationalPolynomial = BasicPolynomial<Rational>;

template <class C>
BasicPolynomial<C> pow(const BasicPolynomial<C>& p, unsigned e) {
  BasicPolynomial<C> result = BasicPolynomial<C>::constant(p.nvars(), C(1));
  BasicPolynomial<C> base = p;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

/// Term-wise power-rule derivative with respect to variable `var`.
template <class C>
BasicPolynomial<C> differentiate(const BasicPolynomial<C>& p, std::size_t var) {
  if (var >= p.nvars()) throw std::out_of_range("differentiate: variable index out of range");
  BasicPolynomial<C> d(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponents de = e;
    de[var] -= 1;
    d.add_term(de, C(c * C(e[var])));
  }
  return d;
}

/// Fixes variable `var` to `value`; the result has nvars - 1 variables.
template <class C>
BasicPolynomial<C> substitute(const BasicPolynomial<C>& p, std::size_t var, const C& value) {
  if (var >= p.nvars()) throw std::out_of_range("substitute: variable index out of range");
  BasicPolynomial<C> r(p.nvars() - 1);
  Exponents e2(p.nvars() - 1);
  for (const auto& [e, c] : p.terms()) {
    C factor = c;
    for (unsigned j = 0; j < e[var]; ++j) factor *= value;
    for (std::size_t k = 0, m = 0; k < e.size(); ++k) {
      if (k != var) e2[m++] = e[k];
    }
    r.add_term(e2, factor);
  }
  return r;
}

/// Embeds p into a ring with more variables: variable k of p becomes
/// variable k of the result, the extra trailing variables do not occur.
template <class C>
BasicPolynomial<C> extend_variables(const BasicPolynomial<C>& p, std::size_t nvars) {
  if (nvars < p.nvars()) throw std::invalid_argument("extend_variables: cannot shrink");
  BasicPolynomial<C> r(nvars);
  for (const auto& [e, c] : p.terms()) {
    Exponents e2(nvars, 0u);
    std::copy(e.begin(), e.end(), e2.begin());
    r.add_term(e2, c);
  }
  return r;
}

/// Computes q(y) = p(center + scale * y), fully expanded.
Polynomial affine_substitute(const Polynomial& p, std::span<const double> center, double scale);

Polynomial to_float(const RationalPolynomial& p);
/// Exact conversion: every binary double is a dyadic rational.
RationalPolynomial to_rational(const Polynomial& p);
Rational to_rational(double v);

/// Renders in the input grammar; rational coefficients are written p/q so
/// the output parses back to the identical term map.
std::string render(const RationalPolynomial& p, std::span<const std::string> var_names);
std::string render(const Polynomial& p, std::span<const std::string> var_names);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the polynomial grammar:
///   expression := ['+'|'-'] term (('+'|'-') term)*
///   term       := factor ('*' factor)*
///   factor     := base ('^' uint)?
///   base       := number | identifier | '(' expression ')'
///   number     := integer | decimal | integer '/' integer
/// Whitespace is ignored and implicit multiplication is rejected.
RationalPolynomial parse_polynomial(std::string_view text, std::span<const std::string> var_names);

}  // namespace curvetrace
