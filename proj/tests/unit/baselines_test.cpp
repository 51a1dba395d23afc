#include "ecomp/baselines.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ecomp/errors.hpp"
#include "ecomp/imaginary_time.hpp"
#include "test_programs.hpp"

namespace ecomp {
namespace {

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(ProjectSimplex, Examples) {
  EXPECT_EQ(project_simplex(std::vector<double>{2, 0, 0}, 1.0), (std::vector<double>{1, 0, 0}));
  const auto u = project_simplex(std::vector<double>{0.5, 0.5, 0.5}, 1.0);
  for (double x : u) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
  const std::vector<double> on{0.2, 0.3, 0.5};
  const auto same = project_simplex(on, 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(same[i], on[i], 1e-15);
}

TEST(ProjectSimplex, SatisfiesKkt) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> y(1 + trial % 9);
    for (auto& x : y) x = u(rng);
    const double r = 0.5 + trial % 4;
    const auto v = project_simplex(y, r);
    EXPECT_NEAR(sum_of(v), r, 1e-9 * r);
    // Recover tau from any positive coordinate and check all of them.
    const auto pos = std::find_if(v.begin(), v.end(), [](double x) { return x > 0.0; });
    ASSERT_NE(pos, v.end());
    const double tau = y[pos - v.begin()] - *pos;
    for (std::size_t i = 0; i < y.size(); ++i) {
      EXPECT_NEAR(v[i], std::max(y[i] - tau, 0.0), 1e-9);
    }
  }
}

TEST(RandomSimplexPoint, OnSimplex) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_simplex_point(7, 2.5, rng);
    EXPECT_NEAR(sum_of(v), 2.5, 1e-12);
    for (double x : v) EXPECT_GT(x, 0.0);
  }
}

TEST(ProjectedGd, StuckInLocalMinimumOfQuartic) {
  const auto p = testing::g_with_slack();
  GdConfig c;
  c.step_size = 1e-3;
  c.iterations = 100'000;
  const auto r = projected_gradient_descent(p, std::vector<double>{3.2, 2.8, 94.0}, c);
  EXPECT_NEAR(r.best_v[0], 3.0, 1e-3);
  EXPECT_NEAR(r.best_v[1], 3.0, 1e-3);
  EXPECT_NEAR(r.best_v[2], 94.0, 1e-3);
  EXPECT_NEAR(r.best_energy, 4.5, 1e-6);
}

TEST(ProjectedGd, ConvexQuadraticGoesUniform) {
  std::vector<RawTerm> raw;
  for (std::size_t i = 0; i < 5; ++i) raw.push_back({{i, i}, 1.0});
  const auto p = build_program(raw, 5, 1.0);
  const auto r = projected_gradient_descent(p, std::vector<double>{0.9, 0.1, 0, 0, 0});
  for (double x : r.best_v) EXPECT_NEAR(x, 0.2, 1e-6);
}

TEST(ProjectedGd, ZeroProgramReturnsStart) {
  const auto p = build_program({}, 3, 1.0);
  const std::vector<double> v0{0.2, 0.5, 0.3};
  const auto r = projected_gradient_descent(p, v0);
  EXPECT_EQ(r.best_v, v0);
  EXPECT_EQ(r.iterations_run, 1u);
  EXPECT_EQ(r.best_energy, 0.0);
}

TEST(ProjectedGd, SmallStepsNeverIncreaseConvexEnergy) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 5;
    // Sum of squares of random non-negative combinations: convex, Lipschitz
    // constant of the gradient bounded by 2 * sum of squared weights.
    std::uniform_real_distribution<double> w(0.0, 1.0);
    std::vector<RawTerm> raw;
    double lipschitz = 0.0;
    for (int row = 0; row < 3; ++row) {
      std::vector<double> a(n);
      for (auto& x : a) x = w(rng);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) raw.push_back({{i, j}, a[i] * a[j]});
        lipschitz += 2.0 * a[i] * a[i];
      }
      for (std::size_t i = 0; i < n; ++i) raw.push_back({{i}, w(rng) - 0.5});
    }
    const auto p = build_program(raw, n, 1.0);
    GdConfig c;
    c.step_size = 0.9 / lipschitz;
    c.iterations = 500;
    const auto r = projected_gradient_descent(p, std::vector<double>(n, 1.0 / n), c);
    for (std::size_t t = 1; t < r.energy_trace.size(); ++t) {
      EXPECT_LE(r.energy_trace[t], r.energy_trace[t - 1] + 1e-12);
    }
  }
}

TEST(ProjectedGd, RejectsOffSimplexStart) {
  const auto p = build_program({}, 2, 1.0);
  EXPECT_THROW(projected_gradient_descent(p, std::vector<double>{0.5, 0.6}), std::invalid_argument);
}

TEST(BruteForceGrid, QuarticWithSlack) {
  const auto r = brute_force_grid(testing::g_with_slack(), 0.5);
  EXPECT_EQ(r.best_v, (std::vector<double>{0, 0, 100}));
  EXPECT_EQ(r.best_energy, 0.0);
  EXPECT_EQ(r.states_checked, count_grid_states(3, 200));
}

TEST(BruteForceGrid, LinearAndFlat) {
  const auto linear = build_program(std::vector<RawTerm>{{{0}, 1.0}, {{1}, -1.0}, {{2}, 0.5}}, 3, 2.0);
  EXPECT_EQ(brute_force_grid(linear, 0.5).best_v, (std::vector<double>{0, 2, 0}));
  const auto flat = brute_force_grid(build_program({}, 3, 1.0), 0.25);
  EXPECT_EQ(flat.best_v, (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(flat.best_energy, 0.0);
}

TEST(BruteForceGrid, SameAnswerForAnyThreadCount) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto p = build_program(testing::random_terms(n, 3, 6, rng), n, 1.0);
    const auto one = brute_force_grid(p, 0.05, 1);
    for (std::size_t threads : {2u, 3u, 8u}) {
      const auto many = brute_force_grid(p, 0.05, threads);
      EXPECT_EQ(many.best_v, one.best_v);
      EXPECT_EQ(many.best_energy, one.best_energy);
    }
    const auto ensemble = make_ensemble(p, 0.05);
    EXPECT_EQ(one.best_energy, *std::min_element(ensemble.energies.begin(), ensemble.energies.end()));
  }
}

TEST(BruteForceGrid, Guard) {
  EXPECT_THROW(brute_force_grid(testing::g_with_slack(), 0.001), GuardExceededError);
}

double exhaustive_cut(const Graph& g, std::size_t k) {
  CutAssignment c(g.num_nodes(), 0);
  double best = 0.0;
  while (true) {
    best = std::max(best, cut_size(g, c));
    std::size_t i = 0;
    while (i < c.size() && ++c[i] == k) c[i++] = 0;
    if (i == c.size()) return best;
  }
}

TEST(BruteForceCut, Examples) {
  const Graph k3(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(brute_force_cut(k3, 2).value, 2.0);
  EXPECT_EQ(brute_force_cut(k3, 3).value, 3.0);
  const Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  const auto r = brute_force_cut(c5, 2);
  EXPECT_EQ(r.value, 4.0);
  EXPECT_EQ(cut_size(c5, r.colors), 4.0);
}

TEST(BruteForceCut, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 4 + seed % 6;
    auto g = random_graph(n, 0.3 + 0.02 * double(seed), seed);
    if (seed % 3 == 0) {
      // weighted variant
      std::vector<Edge> edges(g.edges().begin(), g.edges().end());
      for (std::size_t e = 0; e < edges.size(); ++e) edges[e].weight = 0.5 + double(e % 4);
      g = Graph(n, edges);
    }
    for (std::size_t k = 2; k <= 4; ++k) {
      const auto r = brute_force_cut(g, k);
      EXPECT_EQ(r.value, exhaustive_cut(g, k)) << "seed " << seed << " k " << k;
      EXPECT_EQ(cut_size(g, r.colors), r.value);
    }
  }
}

TEST(BruteForceCut, InvariantUnderRelabeling) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_graph(12, 0.5, seed);
    std::vector<std::size_t> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) edges.push_back({perm[e.u], perm[e.v], e.weight});
    const Graph relabeled(12, edges);
    for (std::size_t k : {2u, 3u}) {
      EXPECT_EQ(brute_force_cut(g, k).value, brute_force_cut(relabeled, k).value);
    }
  }
}

TEST(BruteForceCut, Guard) {
  EXPECT_THROW(brute_force_cut(random_graph(30, 0.5, 1), 3, 1000), GuardExceededError);
}

}  // namespace
}  // namespace ecomp
