#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvetrace/curve_system.hpp"
#include "curvetrace/poly_system.hpp"
#include "curvetrace/polynomial.hpp"
#include "support/oracles.hpp"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x", "y"};

RationalPolynomial P(const std::string& s, const std::vector<std::string>& v = kXY) { return parse_polynomial(s, v); }

Rational Q(const char* s) { return Rational(s, 10); }

}  // namespace

TEST(Parser, Literals) {
  EXPECT_EQ(P("-0.357*x"), P("-357/1000*x"));
  EXPECT_EQ(P("0.08"), P("2/25"));
  EXPECT_EQ(P("007"), P("7"));
  EXPECT_EQ(P(".5*y"), P("1/2*y"));
  EXPECT_EQ(P("3."), P("3"));
  EXPECT_EQ(P("x^0"), P("1"));
}

TEST(Parser, ProductsAndPowers) {
  const auto p = P("(x+y)^2 - (x^2 + 2*x*y + y^2)");
  EXPECT_TRUE(p.is_zero());
  EXPECT_EQ(P("-(x-1)"), P("1-x"));
  EXPECT_EQ(P("2*(-x)"), P("-2*x"));
  EXPECT_EQ(P("(-x^2+x)^3").degree(), 6);
}

TEST(Parser, Errors) {
  for (const char* bad : {"", "x +", "2x", "x y", "z", "x^", "x^-1", "(x", "x)", "1/0", "x/y", "..5", "x^1.5", "2*-x"}) {
    EXPECT_THROW(P(bad), ParseError) << bad;
  }
  try {
    P("x + q");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Polynomial, RenderRoundTrip) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto p = P(oracle::random_poly2(rng, 4).str());
    EXPECT_EQ(P(render(p, kXY)), p);
  }
}

TEST(Polynomial, EvaluationMatchesOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const auto ref = oracle::random_poly2(rng, 5);
    const Polynomial p = to_float(P(ref.str()));
    const PolySystem sys(std::vector<Polynomial>{p});
    const double x = u(rng), y = u(rng);
    const std::vector<double> pt{x, y};
    const double scale = 1.0 + std::abs(ref.eval(x, y)) + 50.0;
    EXPECT_NEAR(p.evaluate<double>(pt), ref.eval(x, y), 1e-12 * scale);
    const Eigen::MatrixXd J = sys.jacobian(Eigen::Vector2d(x, y));
    EXPECT_NEAR(J(0, 0), ref.dx(x, y), 1e-11 * scale);
    EXPECT_NEAR(J(0, 1), ref.dy(x, y), 1e-11 * scale);
  }
}

TEST(Polynomial, ExactArithmetic) {
  const auto a = P("x^2 - 1/3*y");
  const auto b = P("x + 2/7");
  const auto prod = a * b;
  const std::vector<Rational> pt{Q("3/5"), Q("-2/9")};
  EXPECT_EQ(prod.evaluate<Rational>(pt), a.evaluate<Rational>(pt) * b.evaluate<Rational>(pt));
  EXPECT_EQ(differentiate(prod, 0), differentiate(a, 0) * b + a * differentiate(b, 0));
  EXPECT_EQ(pow(b, 3), b * b * b);
  const std::vector<std::string> y{"y"};
  EXPECT_EQ(substitute(a, 0, Rational(2)), parse_polynomial("4 - 1/3*y", y));
  EXPECT_EQ(extend_variables(parse_polynomial("y^2", y), 2), P("x^2"));
}

TEST(Polynomial, AffineSubstitute) {
  const Polynomial p = to_float(P("x^3 - 2*x*y + y^2 - 1"));
  const std::vector<double> c{0.5, -1.0};
  const double R = 2.5;
  const Polynomial q = affine_substitute(p, c, R);
  for (double y0 : {-0.7, 0.1, 0.9})
    for (double y1 : {-0.3, 0.4}) {
      const std::vector<double> y{y0, y1}, x{c[0] + R * y0, c[1] + R * y1};
      EXPECT_NEAR(q.evaluate<double>(y), p.evaluate<double>(x), 1e-12);
    }
}

TEST(CurveSystem, Validation) {
  EXPECT_THROW(CurveSystem(std::vector<RationalPolynomial>{}), std::invalid_argument);
  EXPECT_THROW(CurveSystem(std::vector<RationalPolynomial>{P("x"), P("y")}), std::invalid_argument);
  const std::vector<std::string> xyz{"x", "y", "z"};
  EXPECT_THROW(CurveSystem(std::vector<RationalPolynomial>{P("x", xyz)}), std::invalid_argument);
  EXPECT_NO_THROW(CurveSystem(std::vector<RationalPolynomial>{P("x", xyz), P("y-z", xyz)}));
}

TEST(CurveSystem, Minors) {
  const std::vector<std::string> xyz{"x", "y", "z"};
  const CurveSystem sys(std::vector<RationalPolynomial>{P("x^2+y^2+z^2-1", xyz), P("z", xyz)});
  const auto m = exact_minor_determinants(sys);
  ASSERT_EQ(m.size(), 3u);
  // Dropping column i of [[2x, 2y, 2z], [0, 0, 1]].
  EXPECT_EQ(m[0], P("2*y", xyz));
  EXPECT_EQ(m[1], P("2*x", xyz));
  EXPECT_TRUE(m[2].is_zero());
  const CurveSystem plane(std::vector<RationalPolynomial>{P("x^2-y^2")});
  const auto m2 = exact_minor_determinants(plane);
  ASSERT_EQ(m2.size(), 2u);
  EXPECT_EQ(m2[0], P("-2*y"));
  EXPECT_EQ(m2[1], P("2*x"));
}

TEST(CurveSystem, PerturbedModeDropsExactCopy) {
  const CurveSystem e(std::vector<RationalPolynomial>{P("x^2+y^2-1")});
  EXPECT_EQ(e.coefficient_mode(), CoefficientMode::exact);
  const CurveSystem f(std::vector<Polynomial>{to_float(P("x^2+y^2-1"))});
  EXPECT_EQ(f.coefficient_mode(), CoefficientMode::perturbed);
  EXPECT_FALSE(f.exact().has_value());
}

TEST(CurveSystem, RescaleMapsBoxIntoUnitBall) {
  const CurveSystem sys(std::vector<RationalPolynomial>{P("x^2+y^2-1")});
  const Box box(Point{{-2.0, -1.0}}, Point{{4.0, 3.0}});
  const RescaledSystem rs = rescale_system(sys, box);
  EXPECT_NEAR(rs.map.radius, box.half_diagonal(), 1e-15);
  EXPECT_NEAR(rs.map.to_unit(box.upper()).norm(), 1.0, 1e-12);
  EXPECT_NEAR(rs.map.to_unit(box.lower()).norm(), 1.0, 1e-12);
  // Zero sets agree between frames.
  const Point on = Point{{std::cos(0.3), std::sin(0.3)}};
  EXPECT_NEAR(rs.system.values(rs.map.to_unit(on))[0], 0.0, 1e-12);
  EXPECT_GT(rs.gradient_bound, 0.0);
  // The value scale normalises the gradient bound of the result to about 1.
  EXPECT_NEAR(estimate_gradient_bound(rs.system), 1.0, 1e-9);
}
