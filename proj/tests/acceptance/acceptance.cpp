// Acceptance checks. Each criterion prints one line:
//
//   criterion N <name>: PASS|FAIL (details)
//
// With no arguments every criterion runs. `--only N` runs one of them and
// `--list` prints the names. The exit status is 0 only when every criterion
// that ran passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecomp/baselines.hpp"
#include "ecomp/dynamics.hpp"
#include "ecomp/encoders.hpp"
#include "ecomp/generators.hpp"
#include "ecomp/harness.hpp"
#include "ecomp/imaginary_time.hpp"
#include "ecomp/polynomial.hpp"
#include "test_programs.hpp"

using namespace ecomp;

namespace {

struct Outcome {
  bool pass = false;
  std::string details;
};

struct Criterion {
  int number;
  const char* name;
  double time_limit_seconds;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto raw = testing::random_terms(n, 5, 12, rng);
    const auto p = build_program(raw, n, 1.0);
    const auto v = testing::random_point(n, 2.0, rng);
    const auto grad = gradient(p, v);
    for (std::size_t i = 0; i < n; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(v[i]));
      auto hi = v;
      auto lo = v;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (evaluate(p, hi) - evaluate(p, lo)) / (2.0 * h);
      worst = std::max(worst, testing::relative_error(grad[i], fd));
    }
  }
  return {worst < 1e-6, fmt("worst relative error %.3g over 200 programs", worst)};
}

Outcome normalization_conservation() {
  const auto schedule = preset_schedule("schedule4");
  SolveOptions options;
  options.record_v_trace = true;
  double worst = 0.0;
  std::size_t iterates = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    // alternate between the quartic and a random non-convex QP with R = 7
    PolynomialProgram p = testing::g_with_slack();
    if (seed % 2 == 1) {
      QpConfig c;
      c.vars = 6;
      c.sum_constraint = 7.0;
      p = generate_nonconvex_qp(c, seed);
    }
    const auto r = solve(p, schedule, seed, options);
    for (const auto& v : r.v_trace) {
      const double s = std::accumulate(v.begin(), v.end(), 0.0);
      worst = std::max(worst, std::abs(s - p.sum_constraint()) / p.sum_constraint());
      ++iterates;
    }
  }
  return {worst <= 1e-9, fmt("worst |sum v - R| / R = %.3g over %zu iterates", worst, iterates)};
}

DiscretizedEnsemble random_ensemble(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_real_distribution<double> energy(-5.0, 5.0);
  DiscretizedEnsemble e;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e.states.push_back({static_cast<double>(i)});
    e.energies.push_back(energy(rng));
    e.probabilities.push_back(u(rng));
    total += e.probabilities.back();
  }
  for (auto& p : e.probabilities) p /= total;
  return e;
}

Outcome imaginary_time_oracle() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  double worst_tv = 0.0;
  double worst_rise = 0.0;
  double least_mass = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = random_ensemble(rng, 10 + trial);
    for (int k = 0; k < 5; ++k) {
      const double t1 = time(rng);
      const double t2 = time(rng);
      worst_tv = std::max(worst_tv, total_variation(evolve(evolve(e, t1), t2).probabilities,
                                                    evolve(e, t1 + t2).probabilities));
    }
    // A rise is counted once it exceeds the rounding of the weighted sum.
    double scale = 0.0;
    for (double x : e.energies) scale = std::max(scale, std::abs(x));
    double previous = expected_energy(e);
    for (int k = 1; k <= 100; ++k) {
      const double now = expected_energy(evolve(e, 0.1 * k));
      worst_rise = std::max(worst_rise, (now - previous) / scale);
      previous = now;
    }
    least_mass = std::min(least_mass, ground_state_mass(evolve(e, 1e6), 0.0));
  }
  const bool pass = worst_tv <= 1e-12 && worst_rise <= 1e-12 && least_mass >= 1.0 - 1e-12;
  return {pass, fmt("semigroup TV %.3g, largest relative energy rise %.3g, limit ground mass %.17g", worst_tv,
                    worst_rise, least_mass)};
}

Outcome quartic_reproduction() {
  const auto p = testing::g_with_slack();
  const auto schedule = preset_schedule("schedule4");
  GdConfig gd;
  gd.step_size = 5e-4;
  gd.iterations = 200'000;
  int entropy_hits = 0;
  int gd_hits = 0;
  int gd_hits_outside_basin = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    if (solve(p, schedule, seed).best_energy < 0.05) ++entropy_hits;
    // GD starts from the solver's own noise-seeded initial point.
    const auto v0 = init_state(p, schedule, seed).v;
    const bool in_origin_basin = v0[0] < 2.0 && v0[1] < 2.0;
    if (projected_gradient_descent(p, v0, gd).best_energy < 0.05) {
      ++gd_hits;
      if (!in_origin_basin) ++gd_hits_outside_basin;
    }
  }
  const bool pass = entropy_hits >= 10 && gd_hits <= 5 && gd_hits_outside_basin == 0;
  return {pass, fmt("entropy %d/20 below 0.05, gradient descent %d/20 (%d outside the origin basin)",
                    entropy_hits, gd_hits, gd_hits_outside_basin)};
}

bool within_grid_step(const std::vector<double>& v, const std::vector<double>& target, double delta) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i] - target[i]) > delta + 1e-12) return false;
  }
  return true;
}

Outcome nonconvex_qp() {
  QpConfig c;
  c.vars = 10;
  const auto p = generate_nonconvex_qp(c, 0);
  const double delta = p.sum_constraint() / 20.0;
  const auto optimum = brute_force_grid(p, delta);
  const auto schedule = preset_schedule("schedule4");
  int entropy_hits = 0;
  int gd_hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (within_grid_step(solve(p, schedule, seed).best_v, optimum.best_v, delta)) ++entropy_hits;
    Rng rng(seed);
    const auto v0 = random_simplex_point(p.num_vars(), p.sum_constraint(), rng);
    if (within_grid_step(projected_gradient_descent(p, v0).best_v, optimum.best_v, delta)) ++gd_hits;
  }
  const bool pass = entropy_hits > 0 && entropy_hits >= 1.5 * gd_hits;
  return {pass, fmt("grid optimum %.6f; hits entropy %d/100, gradient descent %d/100", optimum.best_energy,
                    entropy_hits, gd_hits)};
}

Outcome signal_sweep() {
  QpConfig c;
  c.vars = 10;
  RunSpec spec;
  spec.problem = generate_nonconvex_qp(c, 0);
  spec.schedule = preset_config("schedule4");
  spec.schedule.dark_rate = 1.0;
  spec.num_runs = 30;
  spec.jobs = 0;
  const std::vector<double> mus{0.0003, 0.003, 0.03};
  const std::vector<std::uint64_t> budgets{1'000, 10'000, 100'000};
  const auto sweep = sweep_mu_fluctuation(spec, mus, budgets);

  const double lowest = sweep.mean_energy[0][0];
  const double mid = sweep.mean_energy[1][1];
  bool monotone = true;
  double worst_excess = -INFINITY;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j + 1 < 3; ++j) {
      const double sa = sweep.std_energy[i][j];
      const double sb = sweep.std_energy[i][j + 1];
      const double sigma = std::sqrt(0.5 * (sa * sa + sb * sb));
      const double excess = sweep.mean_energy[i][j + 1] - sweep.mean_energy[i][j] - 2.0 * sigma;
      worst_excess = std::max(worst_excess, excess);
      if (excess > 0.0) monotone = false;
    }
  }
  return {lowest > mid && monotone,
          fmt("lowest-signal mean %.4f vs mid %.4f; largest budget-step rise minus 2 sigma %.4f", lowest,
              mid, worst_excess)};
}

Outcome potts_max_cut() {
  const auto g = random_graph(20, 0.5, 0);
  bool pass = true;
  std::string details;
  for (std::size_t k = 2; k <= 4; ++k) {
    const double opt = brute_force_cut(g, k).value;
    RunSpec spec;
    spec.problem = CutProblem{g, k};
    spec.num_runs = 100;
    spec.jobs = 0;
    spec.schedule = preset_config("schedule4");
    const auto s4 = run_batch(spec).summary;
    spec.schedule = preset_config("schedule1");
    const auto s1 = run_batch(spec).summary;
    const bool ok = *s4.best_cut >= 0.878 * opt && *s4.mean_cut >= *s1.mean_cut;
    pass = pass && ok;
    details += fmt("%sk=%zu opt %.0f best %.0f mean s4 %.2f s1 %.2f", k == 2 ? "" : "; ", k, opt,
                   *s4.best_cut, *s4.mean_cut, *s1.mean_cut);
  }
  return {pass, details};
}

Outcome shot_noise() {
  Rng rng(5);
  double worst = 0.0;
  for (double m : {100.0, 10'000.0}) {
    const std::size_t bins = 4;
    const std::vector<double> v(bins, 1.0);
    const std::vector<double> survival(bins, 1.0);
    std::vector<std::vector<double>> draws(bins);
    for (int d = 0; d < 1000; ++d) {
      const auto counts = sample_counts(v, survival, m * bins, 0.0, rng);
      for (std::size_t i = 0; i < bins; ++i) draws[i].push_back(static_cast<double>(counts[i]));
    }
    for (const auto& xs : draws) {
      const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      const double cv = std::sqrt(ss / (xs.size() - 1)) / mean;
      worst = std::max(worst, std::abs(cv * std::sqrt(m) - 1.0));
    }
  }
  return {worst <= 0.10, fmt("largest relative deviation of std/mean from 1/sqrt(m): %.4f", worst)};
}

Outcome potts_exactness() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> prob(0.2, 1.0);
  std::uniform_int_distribution<int> quarter(1, 12);
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (int sample = 0; sample < 50; ++sample) {
    const std::size_t n = 2 + sample % 5;
    const auto base = random_graph(n, prob(rng), rng());
    std::vector<Edge> edges(base.edges().begin(), base.edges().end());
    for (auto& e : edges) e.weight = 0.25 * quarter(rng);
    const Graph g(n, edges);
    for (std::size_t k : {2u, 3u}) {
      const auto enc = encode_max_k_cut(g, k, kDefaultLambda, default_cut_sum(g));
      CutAssignment colors(n, 0);
      while (true) {
        ++checked;
        if (encoded_energy(enc, one_hot(colors, k)) != g.total_weight() - cut_size(g, colors)) ++mismatches;
        std::size_t i = 0;
        while (i < n && ++colors[i] == k) colors[i++] = 0;
        if (i == n) break;
      }
    }
  }
  return {mismatches == 0, fmt("%zu mismatches over %zu one-hot points", mismatches, checked)};
}

bool same_records(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].run_index != b[i].run_index || a[i].seed != b[i].seed || a[i].best_energy != b[i].best_energy ||
        a[i].cut != b[i].cut || a[i].iterations != b[i].iterations || a[i].best_v != b[i].best_v) {
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  std::vector<RunSpec> specs(3);
  QpConfig c;
  c.vars = 10;
  specs[0].problem = generate_nonconvex_qp(c, 3);
  specs[0].schedule.dark_rate = 0.5;
  specs[1].problem = CutProblem{random_graph(12, 0.5, 8), 3};
  specs[1].schedule = preset_config("schedule2");
  specs[2].problem = testing::g_with_slack();
  specs[2].solver = SolverKind::imaginary_time;
  specs[2].grid_delta = 2.0;
  int identical = 0;
  for (auto& spec : specs) {
    spec.num_runs = 16;
    spec.base_seed = 1000;
    spec.jobs = 4;
    const auto first = run_batch(spec);
    const auto second = run_batch(spec);
    if (same_records(first.records, second.records) && first.summary == second.summary) ++identical;
  }
  return {identical == 3, fmt("%d/3 specs reproduced identical records", identical)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "gradient correctness", 10, gradient_correctness},
      {2, "normalization conservation", 60, normalization_conservation},
      {3, "imaginary-time oracle", 30, imaginary_time_oracle},
      {4, "two-variable quartic with slack", 120, quartic_reproduction},
      {5, "non-convex QP versus gradient descent", 300, nonconvex_qp},
      {6, "mean photon number and budget sweep", 600, signal_sweep},
      {7, "max-k-cut against exact optimum", 600, potts_max_cut},
      {8, "shot-noise law", 10, shot_noise},
      {9, "Potts encoding exactness", 60, potts_exactness},
      {10, "end-to-end determinism", 60, determinism},
  };
  return all;
}

bool run(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = c.check();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < c.time_limit_seconds;
  const bool pass = outcome.pass && in_time;
  std::printf("criterion %d %s: %s (%s; %.2fs of %.0fs)\n", c.number, c.name, pass ? "PASS" : "FAIL",
              outcome.details.c_str(), seconds, c.time_limit_seconds);
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria()) std::printf("%d %s\n", c.number, c.name);
      return 0;
    }
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only N | --list]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria().size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (only == 0 || c.number == only) all_pass = run(c) && all_pass;
  }
  return all_pass ? 0 : 1;
}
