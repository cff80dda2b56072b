#include <cmath>

#include <gtest/gtest.h>

#include "curvetrace/keypoints.hpp"
#include "support/oracles.hpp"

using namespace curvetrace;

namespace {

const std::vector<std::string> kXY{"x", "y"};

CurveSystem S(const std::vector<std::string>& ps, const std::vector<std::string>& v = kXY) {
  std::vector<RationalPolynomial> r;
  for (const auto& p : ps) r.push_back(parse_polynomial(p, v));
  return CurveSystem(r);
}

Box B(double a, double b) { return Box(Point::Constant(2, a), Point::Constant(2, b)); }

}  // namespace

TEST(Singular, SmoothCurveHasNone) {
  EXPECT_TRUE(singular_points(S({"x^2+y^2-1"}), B(-2, 2), 1).empty());
}

TEST(Singular, NodeAndCusps) {
  const auto a = singular_points(S({"x^2-y^2"}), B(-1, 1), 1);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_LT(a[0].norm(), 1e-8);
  const auto b = singular_points(S({"x^3-y^2"}), B(-1, 1), 1);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_LT(b[0].norm(), 1e-8);
}

TEST(Singular, OutsideBoxIgnored) {
  EXPECT_TRUE(singular_points(S({"(x-3)^2-y^2"}), B(-1, 1), 1).empty());
}

TEST(Singular, SpaceCurve) {
  // A cone cut by a plane through its apex: two lines crossing at the origin.
  const std::vector<std::string> xyz{"x", "y", "z"};
  const auto p = singular_points(S({"x^2+y^2-z^2", "z-2*x"}, xyz), Box(Point::Constant(3, -1), Point::Constant(3, 1)), 1);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_LT(p[0].norm(), 1e-8);
}

TEST(PseudoSingular, ThresholdDecides) {
  const CurveSystem sys(std::vector<Polynomial>{to_float(parse_polynomial("x^2-y^2-0.001", kXY))});
  const auto near = pseudo_singular_points(sys, B(-1, 1), 0.01, 1);
  ASSERT_EQ(near.size(), 1u);
  EXPECT_LT(near[0].norm(), 1e-8);
  EXPECT_TRUE(pseudo_singular_points(sys, B(-1, 1), 1e-5, 1).empty());
}

TEST(Fencing, NodeGivesFourPoints) {
  const auto f = fencing_points(S({"x^2-y^2"}), Point::Zero(2), 0.1, 1);
  ASSERT_EQ(f.size(), 4u);
  double prev = -10;
  for (const auto& t : f) {
    EXPECT_NEAR(t.q.norm(), 0.1, 1e-12);
    EXPECT_NEAR(std::abs(t.q[0]), std::abs(t.q[1]), 1e-12);
    EXPECT_GT(t.v.dot(t.q), 0.0);
    const double a = std::atan2(t.q[1], t.q[0]);
    EXPECT_GT(a, prev);
    prev = a;
  }
}

TEST(Fencing, SexticOrigin) {
  const auto sys = S({"6*x*y^7+85*x^4*y^3-60*x^2*y^5-32*x^2*y^3+14*x^4-35*y^4"});
  for (double r : {0.05, 0.2}) EXPECT_EQ(fencing_points(sys, Point::Zero(2), r, 1).size(), 4u) << r;
}

TEST(Boundary, CircleHitsFaces) {
  const auto bp = boundary_points(S({"x^2+y^2-1"}), Box(Point{{-0.5, -2.0}}, Point{{2.0, 2.0}}), 1);
  // Only x = -0.5 cuts the circle: (-0.5, +-sqrt(3)/2).
  ASSERT_EQ(bp.size(), 2u);
  for (const auto& t : bp) {
    EXPECT_NEAR(t.q[0], -0.5, 1e-14);
    EXPECT_NEAR(std::abs(t.q[1]), std::sqrt(0.75), 1e-12);
    EXPECT_GT(t.v[0], 0.0);
    EXPECT_FALSE(t.grazing);
  }
}

TEST(Boundary, TangentFaceIsGrazing) {
  const auto bp = boundary_points(S({"x^2+y^2-1"}), Box(Point{{-1.0, -2.0}}, Point{{2.0, 2.0}}), 1);
  ASSERT_EQ(bp.size(), 1u);
  EXPECT_TRUE(bp[0].grazing);
}

TEST(Witness, EveryOvalGetsOne) {
  const auto sys = S({"(x^2+y^2-1)*((x-5)^2+y^2-1)"});
  const Box box(Point{{-2.0, -3.0}}, Point{{7.0, 3.0}});
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto w = witness_points(sys, box, seed);
    bool left = false, right = false;
    for (const auto& p : w) {
      EXPECT_NEAR(std::abs(sys.values(p)[0]), 0.0, 1e-8);
      left = left || std::abs(p.norm() - 1) < 1e-8;
      right = right || std::abs((p - Point{{5.0, 0.0}}).norm() - 1) < 1e-8;
    }
    EXPECT_TRUE(left && right) << seed;
  }
}

TEST(Witness, AlongDirectionAreExtremes) {
  const Eigen::Vector2d a(1.0, 0.0);
  const auto w = witness_points_along(S({"x^2+y^2-1"}), B(-2, 2), a, 1);
  ASSERT_EQ(w.size(), 2u);
  for (const auto& p : w) EXPECT_NEAR(std::abs(p[0]), 1.0, 1e-12);
}

TEST(Seeds, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
  EXPECT_EQ(derive_seed(7, 7), derive_seed(7, 7));
}
