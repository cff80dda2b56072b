#include <cctype>
#include <limits>

#include "curvetrace/polynomial.hpp"

namespace curvetrace {

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> names) : text_(text), names_(names) {}

  RationalPolynomial parse() {
    RationalPolynomial p = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  RationalPolynomial expression() {
    bool negate = false;
    if (char c = peek(); c == '+' || c == '-') {
      negate = (c == '-');
      ++pos_;
    }
    RationalPolynomial acc = term();
    if (negate) acc = -acc;
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      RationalPolynomial t = term();
      if (c == '+') {
        acc += t;
      } else {
        acc -= t;
      }
    }
    return acc;
  }

  RationalPolynomial term() {
    RationalPolynomial acc = factor();
    while (peek() == '*') {
      ++pos_;
      acc = acc * factor();
    }
    // Anything that could start another factor here means implicit multiplication.
    const char c = peek();
    if (c == '(' || std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
      fail("implicit multiplication is not supported");
    }
    return acc;
  }

  RationalPolynomial factor() {
    RationalPolynomial b = base();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail("exponent must be a non-negative integer");
      }
      unsigned long e = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        e = e * 10 + static_cast<unsigned long>(text_[pos_] - '0');
        if (e > 10000) {
          pos_ = start;
          fail("exponent too large");
        }
        ++pos_;
      }
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) {
        fail("exponent must be a non-negative integer");
      }
      b = pow(b, static_cast<unsigned>(e));
    }
    return b;
  }

  RationalPolynomial base() {
    const char c = peek();
    const std::size_t n = names_.size();
    if (c == '(') {
      ++pos_;
      RationalPolynomial e = expression();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return RationalPolynomial::constant(n, number());
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view ident = text_.substr(start, pos_ - start);
      for (std::size_t k = 0; k < n; ++k) {
        if (names_[k] == ident) return RationalPolynomial::variable(n, k);
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string digits() {
    std::string d;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) d += text_[pos_++];
    return d;
  }

  Rational number() {
    const std::size_t start = pos_;
    std::string int_part = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::string frac = digits();
      if (int_part.empty() && frac.empty()) {
        pos_ = start;
        fail("malformed number");
      }
      const mpz_class num((int_part.empty() ? std::string("0") : int_part) + frac, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_ws();
      std::string den = digits();
      if (den.empty()) fail("expected integer denominator");
      mpz_class d(den, 10);
      if (d == 0) fail("division by zero");
      Rational q{mpz_class(int_part, 10), d};
      q.canonicalize();
      return q;
    }
    return Rational(mpz_class(int_part, 10));
  }

  std::string_view text_;
  std::span<const std::string> names_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalPolynomial parse_polynomial(std::string_view text, std::span<const std::string> var_names) {
  if (var_names.empty()) throw std::invalid_argument("parse_polynomial: no variable names");
  for (std::size_t i = 0; i < var_names.size(); ++i) {
    for (std::size_t j = i + 1; j < var_names.size(); ++j) {
      if (var_names[i] == var_names[j]) throw std::invalid_argument("parse_polynomial: duplicate variable name");
    }
  }
  return Parser(text, var_names).parse();
}

}  // namespace curvetrace
