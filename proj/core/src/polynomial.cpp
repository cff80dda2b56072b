#include "curvetrace/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace curvetrace {

Polynomial affine_substitute(const Polynomial& p, std::span<const double> center, double scale) {
  const std::size_t n = p.nvars();
  if (center.size() != n) throw std::invalid_argument("affine_substitute: center dimension differs from nvars");

  // powers[k][j] = (center_k + scale * y_k)^j, built lazily up to the degree in y_k.
  std::vector<std::vector<Polynomial>> powers(n);
  for (std::size_t k = 0; k < n; ++k) {
    const unsigned d = p.degree_in(k);
    Polynomial lin = Polynomial::constant(n, center[k]) + Polynomial::variable(n, k) * scale;
    powers[k].push_back(Polynomial::constant(n, 1.0));
    for (unsigned j = 1; j <= d; ++j) powers[k].push_back(powers[k].back() * lin);
  }

  Polynomial result(n);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(n, c);
    for (std::size_t k = 0; k < n; ++k) {
      if (e[k] > 0) term = term * powers[k][e[k]];
    }
    result += term;
  }
  return result;
}

Polynomial to_float(const RationalPolynomial& p) {
  Polynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, c.get_d());
  return r;
}

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("to_rational: non-finite value");
  Rational q(v);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

RationalPolynomial to_rational(const Polynomial& p) {
  RationalPolynomial r(p.nvars());
  for (const auto& [e, c] : p.terms()) r.add_term(e, to_rational(c));
  return r;
}

namespace {

void render_monomial(std::ostream& os, const Exponents& e, std::span<const std::string> names, bool& first_factor) {
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!first_factor) os << '*';
    os << names[k];
    if (e[k] > 1) os << '^' << e[k];
    first_factor = false;
  }
}

}  // namespace

std::string render(const RationalPolynomial& p, std::span<const std::string> var_names) {
  if (var_names.size() != p.nvars()) throw std::invalid_argument("render: wrong number of variable names");
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first_term = true;
  // Highest exponent vectors first reads more naturally.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    if (first_term) {
      if (sgn(c) < 0) os << '-';
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    const bool is_const = std::all_of(e.begin(), e.end(), [](unsigned k) { return k == 0; });
    bool first_factor = true;
    if (is_const || mag != 1) {
      os << mag.get_num().get_str();
      if (mag.get_den() != 1) os << '/' << mag.get_den().get_str();
      first_factor = false;
    }
    render_monomial(os, e, var_names, first_factor);
    first_term = false;
  }
  return os.str();
}

std::string render(const Polynomial& p, std::span<const std::string> var_names) {
  return render(to_rational(p), var_names);
}

}  // namespace curvetrace
