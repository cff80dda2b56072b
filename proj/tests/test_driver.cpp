#include <cmath>

#include <gtest/gtest.h>

#include "curvetrace/driver.hpp"

using namespace curvetrace;

namespace {

CurveSystem S(const std::vector<std::string>& ps, const std::vector<std::string>& v = {"x", "y"}) {
  std::vector<RationalPolynomial> r;
  for (const auto& p : ps) r.push_back(parse_polynomial(p, v));
  return CurveSystem(r);
}

Box B(double a, double b, std::size_t n = 2) { return Box(Point::Constant(n, a), Point::Constant(n, b)); }

}  // namespace

TEST(RunConfig, Validation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.eps = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.eps = 0.1;
  c.rho = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.rho = 1.6;
  c.mode = StepMode::fixed;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ApproxPlot, EmptyCurve) {
  const ApproxCurve c = approx_plot(S({"x^2+y^2+1"}), B(-1, 1), RunConfig{});
  EXPECT_TRUE(c.chains.empty());
  EXPECT_FALSE(c.notes.empty());
}

TEST(ApproxPlot, CircleIsEpsClose) {
  const auto sys = S({"x^2+y^2-1"});
  for (double eps : {0.5, 0.1, 0.02}) {
    RunConfig cfg;
    cfg.eps = eps;
    const ApproxCurve c = approx_plot(sys, B(-2, 2), cfg);
    ASSERT_EQ(c.chains.size(), 1u);
    EXPECT_TRUE(c.chains[0].closed);
    VerifyOptions vo;
    vo.parametrization = [](double t) { return Point{{std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)}}; };
    const VerifyResult v = verify_epsilon(c, sys, B(-2, 2), vo);
    EXPECT_LE(*v.curve_to_chain, eps);
    EXPECT_LE(v.chain_to_curve, eps);
  }
}

TEST(ApproxPlot, LinesThroughBox) {
  const auto sys = S({"x*y"});
  RunConfig cfg;
  cfg.eps = 0.2;
  const ApproxCurve c = approx_plot(sys, Box(Point{{-1.0, -0.7}}, Point{{0.8, 1.0}}), cfg);
  ASSERT_EQ(c.singular_points.size(), 1u);
  EXPECT_EQ(c.chains.size(), 4u);
  EXPECT_EQ(c.fencing.size(), 4u);
  for (const auto& ch : c.chains) {
    EXPECT_EQ(ch.start_kind, ChainEnd::fencing);
    EXPECT_EQ(ch.end_kind, ChainEnd::boundary);
  }
  EXPECT_TRUE(c.jump_reports.empty());
}

TEST(ApproxPlot, OutputStaysInBox) {
  const auto sys = S({"x^2-y^3+0.1*x*y-0.2"});
  const Box box(Point{{-1.5, -1.0}}, Point{{1.5, 1.3}});
  RunConfig cfg;
  cfg.eps = 0.1;
  const ApproxCurve c = approx_plot(sys, box, cfg);
  EXPECT_FALSE(c.chains.empty());
  for (const auto& ch : c.chains)
    for (const auto& v : ch.vertices) EXPECT_TRUE(box.contains(v, 1e-12));
  VerifyOptions vo;
  vo.grid_resolution = 0.01;
  const VerifyResult v = verify_epsilon(c, sys, box, vo);
  EXPECT_LE(*v.curve_to_chain, 0.1);
  EXPECT_LE(v.chain_to_curve, 0.1);
}

TEST(ApproxPlot, CuspTryResume) {
  RunConfig cfg;
  cfg.eps = 0.2;
  const ApproxCurve c = approx_plot(S({"y^2-(-x^2+x)^3"}), B(-1, 2), cfg);
  EXPECT_EQ(c.clusters.size(), 2u);
  EXPECT_EQ(c.fencing.size(), 4u);
  EXPECT_TRUE(c.front.empty());
  for (const auto& f : c.fencing) EXPECT_EQ(f.c, 1);
  EXPECT_TRUE(c.jump_reports.empty());
  ASSERT_EQ(c.pass_chain_counts.size(), 4u);
}

TEST(ApproxPlot, SpaceCircle) {
  RunConfig cfg;
  cfg.eps = 0.2;
  const ApproxCurve c = approx_plot(S({"x^2+y^2+z^2-1", "x+y+z"}, {"x", "y", "z"}), B(-2, 2, 3), cfg);
  ASSERT_EQ(c.chains.size(), 1u);
  EXPECT_TRUE(c.chains[0].closed);
  for (const auto& v : c.chains[0].vertices) {
    EXPECT_NEAR(v.norm(), 1.0, 1e-8);
    EXPECT_NEAR(v.sum(), 0.0, 1e-8);
  }
}

TEST(ApproxPlot, PerturbedModeHasNoSingularList) {
  RunConfig cfg;
  cfg.eps = 0.1;
  cfg.coefficients = CoefficientMode::perturbed;
  const ApproxCurve c = approx_plot(S({"x^2-y^2"}), B(-1, 1), cfg);
  EXPECT_TRUE(c.singular_points.empty());
  EXPECT_EQ(c.pseudo_singular_points.size(), 1u);
  EXPECT_EQ(c.chains.size(), 4u);
}

TEST(ApproxPlot, SeedChangesNothingVisible) {
  RunConfig a, b;
  a.eps = b.eps = 0.2;
  b.seed = 12345;
  const auto sys = S({"x^2+y^2-1"});
  const ApproxCurve ca = approx_plot(sys, B(-2, 2), a), cb = approx_plot(sys, B(-2, 2), b);
  EXPECT_EQ(ca.chains.size(), cb.chains.size());
}

TEST(Verify, DetectsBadApproximation) {
  const auto sys = S({"x^2+y^2-1"});
  ApproxCurve c;
  c.nvars = 2;
  c.box = B(-2, 2);
  Chain ch;
  ch.vertices = {Point{{1.0, 0.0}}, Point{{0.0, 1.0}}};
  c.chains.push_back(ch);
  VerifyOptions vo;
  vo.grid_resolution = 0.01;
  const VerifyResult v = verify_epsilon(c, sys, B(-2, 2), vo);
  EXPECT_GT(*v.curve_to_chain, 1.0);
  EXPECT_NEAR(v.chain_to_curve, 1.0 - std::sqrt(0.5), 1e-3);
}
