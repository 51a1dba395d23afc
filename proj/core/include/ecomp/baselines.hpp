#pragma once

// Reference solvers: projected gradient descent on the simplex and exact
// exhaustive searches for small instances.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ecomp/dynamics.hpp"
#include "ecomp/encoders.hpp"
#include "ecomp/polynomial.hpp"

namespace ecomp {

struct GdConfig {
  double step_size = 0.05;
  std::size_t iterations = 10'000;
  // Stop once ||v_{t+1} - v_t||_2 falls below this.
  double tolerance = 1e-9;
};

// Fixed-step projected gradient descent from v0, which must lie on the
// simplex {v >= 0, sum v = R} (sum to 1e-9 relative). energy_trace[0] is the
// energy at v0, followed by one entry per update. best_v is the lowest-energy
// iterate. Throws std::overflow_error on a non-finite gradient.
SolverResult projected_gradient_descent(const PolynomialProgram& program,
                                        std::span<const double> v0, const GdConfig& config = {});

// Euclidean projection of y onto {v >= 0, sum v = R}.
std::vector<double> project_simplex(std::span<const double> y, double sum_constraint);

// Uniformly random point on the simplex (flat Dirichlet).
std::vector<double> random_simplex_point(std::size_t n, double sum_constraint, Rng& rng);

struct GridOptimum {
  std::vector<double> best_v;
  double best_energy = 0.0;
  std::size_t states_checked = 0;
};

inline constexpr std::size_t kMaxGridStates = 100'000'000;

// Exact minimum over the grid of spacing delta (see enumerate_states). Ties
// go to the lexicographically first state, independent of thread count.
// threads == 0 means hardware concurrency. Throws GuardExceededError when the
// grid has more than kMaxGridStates points.
GridOptimum brute_force_grid(const PolynomialProgram& program, double delta,
                             std::size_t threads = 0);

struct CutOptimum {
  CutAssignment colors;
  double value = 0.0;
  std::uint64_t nodes_expanded = 0;
};

inline constexpr std::uint64_t kDefaultCutExpansions = 2'000'000'000;

// Exact max-k-cut by depth-first branch and bound. Colors are canonical
// (a node may only open the next unused color), and a branch is cut when its
// optimistic bound cannot beat the incumbent. Throws GuardExceededError if
// the search expands more than max_expansions nodes.
CutOptimum brute_force_cut(const Graph& graph, std::size_t k,
                           std::uint64_t max_expansions = kDefaultCutExpansions);

}  // namespace ecomp
