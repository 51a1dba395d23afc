#include "ecomp/baselines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "ecomp/errors.hpp"
#include "ecomp/imaginary_time.hpp"

namespace ecomp {

std::vector<double> project_simplex(std::span<const double> y, double sum_constraint) {
  if (y.empty()) throw std::invalid_argument("cannot project an empty vector");
  if (!(sum_constraint > 0.0)) throw std::invalid_argument("sum constraint must be > 0");
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Largest rho with sorted[rho] - (prefix(rho) - R) / (rho + 1) > 0.
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    prefix += sorted[j];
    const double candidate = (prefix - sum_constraint) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> v(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) v[i] = std::max(y[i] - tau, 0.0);
  return v;
}

std::vector<double> random_simplex_point(std::size_t n, double sum_constraint, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto& x : v) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : v) x *= sum_constraint / total;
  return v;
}

SolverResult projected_gradient_descent(const PolynomialProgram& program,
                                        std::span<const double> v0, const GdConfig& config) {
  if (!(config.step_size > 0.0)) throw std::invalid_argument("step size must be > 0");
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  const double r = program.sum_constraint();
  double total = 0.0;
  for (double x : v0) total += x;
  if (std::abs(total - r) > 1e-9 * r) {
    throw std::invalid_argument("starting point is not on the simplex");
  }

  SolverResult result;
  std::vector<double> v(v0.begin(), v0.end());
  result.best_energy = evaluate(program, v);
  result.best_v = v;
  result.energy_trace.push_back(result.best_energy);

  const std::size_t n = v.size();
  std::vector<double> grad(n);
  std::vector<double> trial(n);
  for (std::size_t t = 0; t < config.iterations; ++t) {
    gradient_into(program, v, grad);
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(grad[i])) {
        throw std::overflow_error("gradient is not finite at iteration " + std::to_string(t));
      }
      trial[i] = v[i] - config.step_size * grad[i];
    }
    auto next = project_simplex(trial, r);
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved += (next[i] - v[i]) * (next[i] - v[i]);
    v = std::move(next);
    ++result.iterations_run;

    const double energy = evaluate_unchecked(program, v);
    result.energy_trace.push_back(energy);
    if (energy < result.best_energy) {
      result.best_energy = energy;
      result.best_v = v;
    }
    if (std::sqrt(moved) < config.tolerance) break;
  }
  return result;
}

GridOptimum brute_force_grid(const PolynomialProgram& program, double delta, std::size_t threads) {
  const std::size_t n = program.num_vars();
  const std::size_t parts = grid_parts(program.sum_constraint(), delta);
  const std::size_t total = count_grid_states(n, parts);
  if (total > kMaxGridStates) {
    throw GuardExceededError("grid has " + std::to_string(total) + " states, limit is " +
                             std::to_string(kMaxGridStates));
  }
  const double unit = program.sum_constraint() / static_cast<double>(parts);

  // One task per value of the first coordinate. Tasks are reduced in order,
  // so the lexicographically first minimum wins whatever the scheduling.
  struct TaskBest {
    double energy = std::numeric_limits<double>::infinity();
    std::vector<double> v;
  };
  std::vector<TaskBest> best(parts + 1);

  auto run_task = [&](std::size_t first) {
    std::vector<double> current(n, 0.0);
    current[0] = unit * static_cast<double>(first);
    TaskBest& out = best[first];
    auto visit = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
      if (pos + 1 == n) {
        current[pos] = unit * static_cast<double>(left);
        const double e = evaluate_unchecked(program, current);
        if (e < out.energy) {
          out.energy = e;
          out.v = current;
        }
        return;
      }
      for (std::size_t u = 0; u <= left; ++u) {
        current[pos] = unit * static_cast<double>(u);
        self(self, pos + 1, left - u);
      }
    };
    if (n == 1) {
      if (first == parts) visit(visit, 0, parts);
    } else {
      visit(visit, 1, parts - first);
    }
  };

  std::size_t workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  workers = std::clamp<std::size_t>(workers, 1, parts + 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t f = next++; f <= parts; f = next++) run_task(f);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  GridOptimum result;
  result.best_energy = std::numeric_limits<double>::infinity();
  result.states_checked = total;
  for (auto& b : best) {
    if (b.energy < result.best_energy) {
      result.best_energy = b.energy;
      result.best_v = std::move(b.v);
    }
  }
  return result;
}

namespace {

class CutSearch {
 public:
  CutSearch(const Graph& graph, std::size_t k, std::uint64_t limit)
      : k_(k), limit_(limit), n_(graph.num_nodes()) {
    // Visit high-degree nodes first so the bound tightens early.
    std::vector<double> degree(n_, 0.0);
    for (const auto& e : graph.edges()) {
      degree[e.u] += std::abs(e.weight);
      degree[e.v] += std::abs(e.weight);
    }
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    std::vector<std::size_t> position(n_);
    for (std::size_t p = 0; p < n_; ++p) position[order_[p]] = p;

    // later_[p] lists neighbors placed after p in search order.
    later_.resize(n_);
    for (const auto& e : graph.edges()) {
      const std::size_t a = position[e.u];
      const std::size_t b = position[e.v];
      const std::size_t lo = std::min(a, b);
      const std::size_t hi = std::max(a, b);
      later_[lo].push_back({hi, e.weight});
    }
    // Positive weight still to be decided among positions >= p.
    tail_positive_.assign(n_ + 1, 0.0);
    for (std::size_t p = n_; p-- > 0;) {
      double w = 0.0;
      for (const auto& [q, weight] : later_[p]) w += std::max(weight, 0.0);
      tail_positive_[p] = tail_positive_[p + 1] + w;
    }
    to_color_.assign(n_ * k_, 0.0);
    to_assigned_.assign(n_, 0.0);
    color_.assign(n_, 0);
  }

  CutOptimum run() {
    if (n_ == 0) return {};
    descend(0, 0, 0.0);
    CutOptimum result;
    result.value = best_value_;
    result.nodes_expanded = expanded_;
    result.colors.assign(n_, 0);
    for (std::size_t p = 0; p < n_; ++p) result.colors[order_[p]] = best_colors_[p];
    return result;
  }

 private:
  struct Neighbor {
    std::size_t pos;
    double weight;
  };

  // Best possible extra cut from unassigned positions >= p: each pending
  // node can at most cut everything to assigned nodes except its cheapest
  // color class, and edges among pending nodes can at most all be cut.
  double optimistic(std::size_t p) const {
    double bound = tail_positive_[p];
    for (std::size_t q = p; q < n_; ++q) {
      double min_same = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k_; ++c) min_same = std::min(min_same, to_color_[q * k_ + c]);
      bound += to_assigned_[q] - min_same;
    }
    return bound;
  }

  void assign(std::size_t p, std::size_t c, double sign) {
    for (const auto& [q, w] : later_[p]) {
      to_color_[q * k_ + c] += sign * w;
      to_assigned_[q] += sign * w;
    }
  }

  void descend(std::size_t p, std::size_t colors_used, double cut) {
    if (++expanded_ > limit_) {
      throw GuardExceededError("max-k-cut search exceeded " + std::to_string(limit_) +
                               " expansions");
    }
    if (p == n_) {
      if (cut > best_value_) {
        best_value_ = cut;
        best_colors_ = color_;
      }
      return;
    }
    if (cut + optimistic(p) <= best_value_) return;

    // Canonical coloring: reuse any opened color or open exactly one new one.
    const std::size_t limit = std::min(k_, colors_used + 1);
    std::vector<std::pair<double, std::size_t>> choices;
    choices.reserve(limit);
    for (std::size_t c = 0; c < limit; ++c) {
      choices.emplace_back(to_assigned_[p] - to_color_[p * k_ + c], c);
    }
    // Greedy order: try the color that cuts the most first.
    std::stable_sort(choices.begin(), choices.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, c] : choices) {
      color_[p] = c;
      assign(p, c, 1.0);
      descend(p + 1, std::max(colors_used, c + 1), cut + gain);
      assign(p, c, -1.0);
    }
  }

  std::size_t k_;
  std::uint64_t limit_;
  std::size_t n_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Neighbor>> later_;
  std::vector<double> tail_positive_;
  std::vector<double> to_color_;
  std::vector<double> to_assigned_;
  std::vector<std::size_t> color_;
  std::vector<std::size_t> best_colors_;
  double best_value_ = -std::numeric_limits<double>::infinity();
  std::uint64_t expanded_ = 0;
};

}  // namespace

CutOptimum brute_force_cut(const Graph& graph, std::size_t k, std::uint64_t max_expansions) {
  if (k < 2) throw std::invalid_argument("max-k-cut needs k >= 2");
  return CutSearch(graph, k, max_expansions).run();
}

}  // namespace ecomp
