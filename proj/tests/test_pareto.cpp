#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "echelon/pareto.hpp"
#include "oracle/brute_force.hpp"

using namespace echelon;

namespace {

std::vector<Point> random_points(std::mt19937_64& gen, std::size_t n, std::size_t dim, int grid) {
  std::uniform_int_distribution<int> u(0, grid);
  std::vector<Point> pts(n, Point(dim));
  for (auto& p : pts)
    for (auto& v : p) v = u(gen);
  return pts;
}

// Points on the positive part of a sphere, mutually non-dominated.
std::vector<Point> sphere_front(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> pts;
  while (pts.size() < n) {
    Point p{std::fabs(g(gen)), std::fabs(g(gen)), std::fabs(g(gen))};
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (auto& v : p) v = 10.0 * v / r;
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates({2, 2}, {1, 1}));
  EXPECT_FALSE(dominates({1, 1}, {1, 1}));
  EXPECT_FALSE(dominates({2, 0}, {1, 1}));
  EXPECT_THROW(dominates({1, 1}, {1, 1, 1}), std::invalid_argument);
}

TEST(Dominates, StrictPartialOrder) {
  std::mt19937_64 gen(3);
  const auto pts = random_points(gen, 60, 3, 3);
  for (const auto& a : pts) {
    EXPECT_FALSE(dominates(a, a));
    for (const auto& b : pts) {
      if (dominates(a, b)) EXPECT_FALSE(dominates(b, a));
      for (const auto& c : pts)
        if (dominates(a, b) && dominates(b, c)) EXPECT_TRUE(dominates(a, c));
    }
  }
}

TEST(ParetoFilter, Examples) {
  EXPECT_EQ(pareto_filter(std::vector<Point>{{1, 1}, {2, 2}}).points, (std::vector<Point>{{2, 2}}));
  const std::vector<Point> trio{{2, 0}, {0, 2}, {1, 1}};
  EXPECT_EQ(pareto_filter(trio).points, trio);
  const auto dup = pareto_filter(std::vector<Point>{{1, 2}, {1, 2}, {0, 3}});
  EXPECT_EQ(dup.points, (std::vector<Point>{{1, 2}, {0, 3}}));
  EXPECT_EQ(dup.ids, (std::vector<std::int64_t>{0, 2}));
}

TEST(ParetoFilter, MatchesBruteForce) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto pts = random_points(gen, 200, 3, rep % 2 ? 20 : 1000);
    const Front f = pareto_filter(pts);
    const auto keep = oracle::nondominated_indices(pts);
    ASSERT_EQ(f.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      EXPECT_EQ(f.ids[i], static_cast<std::int64_t>(keep[i]));
      EXPECT_EQ(f.points[i], pts[keep[i]]);
    }
    EXPECT_EQ(pareto_filter(f).points, f.points);
  }
}

TEST(Archive, InsertKeepsMutualNonDominance) {
  std::mt19937_64 gen(2);
  ParetoArchive archive;
  const auto pts = random_points(gen, 300, 3, 50);
  double prev_hv = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    archive.insert(pts[i], static_cast<std::int64_t>(i));
    const auto& f = archive.front();
    for (const auto& a : f.points)
      for (const auto& b : f.points) EXPECT_FALSE(dominates(a, b));
    const double hv = hypervolume(f, {0, 0, 0});
    EXPECT_GE(hv, prev_hv);
    prev_hv = hv;
  }
  EXPECT_EQ(archive.front().points, pareto_filter(pts).points);
}

TEST(Hypervolume, Examples) {
  EXPECT_EQ(hypervolume(std::vector<Point>{{2, 2, 2}}, {0, 0, 0}), 8.0);
  EXPECT_EQ(hypervolume(std::vector<Point>{{3, 1}, {1, 3}}, {0, 0}), 5.0);
  EXPECT_EQ(hypervolume(std::vector<Point>{}, {0, 0, 0}), 0.0);
  const auto rep = hypervolume_report({{2, 2, 2}, {-1, 5, 5}}, {0, 0, 0});
  EXPECT_EQ(rep.value, 8.0);
  EXPECT_EQ(rep.excluded, std::vector<std::size_t>{1});
}

TEST(Hypervolume, TwoObjectiveMonteCarlo) {
  const std::vector<Point> pts{{3, 1}, {1, 3}};
  const auto mc = oracle::mc_hypervolume(pts, {0, 0}, 1000000, 1);
  EXPECT_NEAR(mc.value, 5.0, 3.0 * mc.sigma);
}

TEST(Hypervolume, MonteCarloOracle) {
  std::mt19937_64 gen(19);
  for (int rep = 0; rep < 10; ++rep) {
    const auto pts = sphere_front(gen, 1 + static_cast<std::size_t>(rep));
    const double exact = hypervolume(pts, {0, 0, 0});
    const auto mc = oracle::mc_hypervolume(pts, {0, 0, 0}, 200000, static_cast<std::uint64_t>(rep));
    EXPECT_NEAR(exact, mc.value, 3.0 * mc.sigma + 1e-9) << "rep " << rep;
  }
}

TEST(Hypervolume, DominatedPointsDoNotChangeIt) {
  std::mt19937_64 gen(4);
  auto pts = sphere_front(gen, 8);
  const double base = hypervolume(pts, {0, 0, 0});
  pts.push_back({1, 1, 1});
  EXPECT_DOUBLE_EQ(hypervolume(pts, {0, 0, 0}), base);
}

TEST(Eum, Examples) {
  const auto id2 = NormalisationBounds::identity(2);
  EXPECT_DOUBLE_EQ(eum({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}, {0.5, 0.5}}, id2), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(eum({{1, 1, 1}}, das_dennis(3, 4), NormalisationBounds::identity(3)), 1.0);
  EXPECT_DOUBLE_EQ(eum({{0.2, 0.6}}, {{0.25, 0.75}}, id2), 0.25 * 0.2 + 0.75 * 0.6);
  EXPECT_THROW(eum({}, {{1, 0}}, id2), std::invalid_argument);
}

TEST(Eum, UsesBounds) {
  const NormalisationBounds nb{{0, -10}, {100, 0}};
  EXPECT_DOUBLE_EQ(eum({{50, -5}}, {{0.5, 0.5}}, nb), 0.5);
}

TEST(Sparsity, Examples) {
  EXPECT_DOUBLE_EQ(*sparsity({{0, 1}, {1, 0}}), 2.0);
  EXPECT_DOUBLE_EQ(*sparsity({{0.3, 0.3}, {0.3, 0.3}}), 0.0);
  EXPECT_FALSE(sparsity({{1, 1}}).has_value());
  // gaps along objective 0: 0.5, 0.5; objective 1: 0.25, 0.75
  EXPECT_DOUBLE_EQ(*sparsity({{0, 1}, {0.5, 0.25}, {1, 0}}), (0.25 + 0.25 + 0.0625 + 0.5625) / 2.0);
}

TEST(Ahd, Examples) {
  EXPECT_DOUBLE_EQ(ahd({{1, 0}, {0, 1}}, {{0, 0}}), 1.0);
  EXPECT_DOUBLE_EQ(ahd({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}), 0.0);
  // GD over two front points: distances 0 and 1 -> sqrt(1/2); IGD: 0
  const auto d = distance_indicators({{0, 0}, {1, 0}}, {{0, 0}}, NormalisationBounds::identity(2));
  EXPECT_DOUBLE_EQ(d.gd, std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(d.igd, 0.0);
  EXPECT_DOUBLE_EQ(d.ahd, std::sqrt(0.5));
  EXPECT_THROW(ahd({}, {{0, 0}}), std::invalid_argument);
}

TEST(Ahd, SharedPointNeverHurts) {
  std::mt19937_64 gen(8);
  for (int rep = 0; rep < 50; ++rep) {
    auto front = random_points(gen, 5, 3, 10);
    auto truth = random_points(gen, 5, 3, 10);
    const auto y = random_points(gen, 1, 3, 10)[0];
    const auto nb = NormalisationBounds::identity(3);
    const double before = ahd(front, truth, nb);
    front.push_back(y);
    truth.push_back(y);
    // IGD cannot grow; GD may, so only the IGD half is asserted.
    EXPECT_LE(distance_indicators(front, truth, nb).igd,
              distance_indicators({front.begin(), front.end() - 1}, {truth.begin(), truth.end() - 1}, nb).igd + 1e-12);
    (void)before;
  }
}

TEST(Indicators, OrderInvariant) {
  std::mt19937_64 gen(9);
  auto front = random_points(gen, 12, 3, 100);
  const auto truth = random_points(gen, 12, 3, 100);
  const auto nb = bounds_of({&front, &truth}, 3);
  const auto w = das_dennis(3, 6);
  const double e = eum(front, w, nb), a = ahd(front, truth, nb), s = *sparsity(front, nb);
  std::shuffle(front.begin(), front.end(), gen);
  EXPECT_DOUBLE_EQ(eum(front, w, nb), e);
  EXPECT_DOUBLE_EQ(ahd(front, truth, nb), a);
  EXPECT_DOUBLE_EQ(*sparsity(front, nb), s);
}

TEST(DasDennis, Counts) {
  const auto w = das_dennis(3, 5);
  EXPECT_EQ(w.size(), 21u);
  EXPECT_NE(std::find(w.begin(), w.end(), WeightVector{1, 0, 0}), w.end());
  bool found = false;
  for (const auto& v : w) found = found || (v[0] == 0.0 && std::fabs(v[1] - 0.2) < 1e-12 && std::fabs(v[2] - 0.8) < 1e-12);
  EXPECT_TRUE(found);
  for (const auto& v : w) {
    double s = 0.0;
    for (double x : v) {
      EXPECT_GE(x, 0.0);
      s += x;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
  EXPECT_EQ(das_dennis(2, 1), (std::vector<WeightVector>{{0, 1}, {1, 0}}));
  EXPECT_EQ(das_dennis(3, 1).size(), 3u);
  EXPECT_EQ(das_dennis(3, 12).size(), 91u);
}

TEST(TrueFront, Merging) {
  const Front a = make_front({{2, 0}, {0, 2}});
  const Front b = make_front({{1, 1.5}});
  const Front c = make_front({{0.5, -0.5}});
  EXPECT_EQ(estimate_true_front({a}).points, a.points);
  EXPECT_EQ(estimate_true_front({a, b}).points, (std::vector<Point>{{2, 0}, {0, 2}, {1, 1.5}}));
  EXPECT_EQ(estimate_true_front({a, c}).points, a.points);
}

TEST(Metrics, ComputeMetricsSelfTruth) {
  const std::vector<Point> f{{10, -5, -1}, {5, -2, -2}};
  const auto m = compute_metrics(f, f, {0, -10, -10}, das_dennis(3, 4));
  EXPECT_EQ(*m.ahd, 0.0);
  EXPECT_EQ(m.n_points, 2u);
  EXPECT_DOUBLE_EQ(m.hypervolume, hypervolume(f, {0, -10, -10}));
}
