#include <random>

#include <gtest/gtest.h>

#include "curvetrace/cluster.hpp"

using namespace curvetrace;

namespace {

void check_natural(const std::vector<Point>& pts, const ClusterResult& res) {
  const double r = res.delta;
  std::size_t members = 0;
  for (const auto& c : res.clusters) {
    members += c.members.size();
    Point mean = Point::Zero(c.center.size());
    for (const auto& m : c.members) mean += m;
    EXPECT_LT((mean / c.members.size() - c.center).norm(), 1e-12);
    for (const auto& p : pts) {
      bool in = false;
      for (const auto& m : c.members) in = in || m == p;
      const double d = (p - c.center).norm();
      if (in) EXPECT_LE(d, r);
      else EXPECT_GT(d, 3 * r);
    }
  }
  EXPECT_EQ(members, pts.size());
  for (std::size_t a = 0; a < res.clusters.size(); ++a)
    for (std::size_t b = a + 1; b < res.clusters.size(); ++b)
      EXPECT_GE((res.clusters[a].center - res.clusters[b].center).norm(), 3 * r);
}

}  // namespace

TEST(Clusters, Empty) {
  const auto res = natural_clusters({}, 0.5);
  EXPECT_TRUE(res.clusters.empty());
  EXPECT_EQ(res.rounds, 0);
}

TEST(Clusters, WideRadiusKeepsOneCluster) {
  const std::vector<Point> pts{Point{{0.0, 0.0}}, Point{{1.0, 0.0}}};
  const auto res = natural_clusters(pts, 1.0);
  ASSERT_EQ(res.clusters.size(), 1u);
  check_natural(pts, res);
}

TEST(Clusters, CloseSingularPointsMerge) {
  const std::vector<Point> pts{Point{{0.0, 0.0}}, Point{{1e-3, 0.0}}, Point{{1.0, 0.0}}};
  const auto res = natural_clusters(pts, 0.1);
  ASSERT_EQ(res.clusters.size(), 2u);
  EXPECT_EQ(res.rounds, 0);
  check_natural(pts, res);
}

TEST(Clusters, HalvesUntilSeparated) {
  const std::vector<Point> pts{Point{{0.0, 0.0}}, Point{{1.0, 0.0}}};
  const auto res = natural_clusters(pts, 0.4);
  EXPECT_EQ(res.clusters.size(), 2u);
  EXPECT_EQ(res.rounds, 1);
  EXPECT_EQ(res.delta, 0.2);
  EXPECT_LT(3 * res.delta, 1.0);
  check_natural(pts, res);
}

TEST(Clusters, RandomProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> n(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point> pts;
    const int m = n(rng);
    const int dim = 2 + trial % 2;
    for (int k = 0; k < m; ++k) {
      Point p(dim);
      for (int d = 0; d < dim; ++d) p[d] = u(rng);
      pts.push_back(p);
    }
    if (m > 2) pts[2] = pts[1] + 1e-3 * Point::Ones(dim);
    const auto res = natural_clusters(pts, 0.3);
    check_natural(pts, res);
  }
}

TEST(Clusters, ResultIndependentOfInputOrder) {
  std::vector<Point> pts{Point{{0.0, 0.0}}, Point{{0.01, 0.0}}, Point{{0.5, 0.5}}, Point{{0.51, 0.5}}};
  const auto a = natural_clusters(pts, 0.05);
  std::reverse(pts.begin(), pts.end());
  const auto b = natural_clusters(pts, 0.05);
  ASSERT_EQ(a.clusters.size(), b.clusters.size());
  EXPECT_EQ(a.delta, b.delta);
}
