#pragma once

// The measurement-feedback loop. Each time bin i holds a photon count n_i;
// the normalized counts v = R n / sum(n) are the optimization variables.
// One loop iteration:
//
//   L   = dE/dv at the current v             (per-bin loss rate)
//   p_i = exp(-eta (L_i - min L))            (survival after damping)
//   n_i ~ Poisson(B v_i p_i / sum v p) + Poisson(dark)
//   v   = R n / sum(n)
//
// and the best state seen so far is kept, since the hardware reads out
// accumulated histograms rather than a single final shot.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ecomp/polynomial.hpp"
#include "ecomp/schedule.hpp"

namespace ecomp {

using Rng = std::mt19937_64;
using Count = std::uint64_t;

struct SolverState {
  std::vector<Count> counts;
  std::vector<double> v;
  std::size_t iteration = 0;
  Rng rng;
  // Best over the states produced by completed loops. Before the first loop
  // best_energy is +inf and best_v is empty.
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
};

struct SolverResult {
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> best_v;
  std::vector<double> energy_trace;            // one entry per loop
  std::vector<std::vector<double>> v_trace;    // empty unless requested
  std::size_t iterations_run = 0;
  std::uint64_t seed = 0;
};

struct SolveOptions {
  bool record_v_trace = false;
  // Start from this point instead of a uniform noise state. Counts are drawn
  // as Poisson(B v_i / R), so the start is still noise-seeded.
  std::optional<std::vector<double>> initial_v;
};

// Counts ~ Poisson(B / N) per bin, v = normalize(counts, R).
SolverState init_state(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                       std::uint64_t seed);

// Counts ~ Poisson(B v0_i / R). v0 must have N non-negative entries with a
// positive sum.
SolverState init_state_from(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                            std::span<const double> v0, std::uint64_t seed);

// Loss rate per bin: the linear chemical potential plus the occupation
// dependent interaction part, i.e. the gradient of the cost at v.
std::vector<double> loss_rates(const PolynomialProgram& program, std::span<const double> v);

// p_i = exp(-eta (L_i - min L)). The best bin always survives with p = 1.
std::vector<double> survival_probabilities(std::span<const double> losses, double eta);

// n_i ~ Poisson(B v_i p_i / sum_j v_j p_j) + Poisson(dark_mean).
// Throws DegenerateStateError when every v_i p_i is zero.
std::vector<Count> sample_counts(std::span<const double> v, std::span<const double> survival,
                                 double budget, double dark_mean, Rng& rng);

// v_i = R n_i / sum(n). Throws DegenerateStateError when all counts are zero.
std::vector<double> normalize(std::span<const Count> counts, double sum_constraint);

// Damping strength used in loop t for the given losses.
double effective_eta(const FeedbackSchedule& schedule, std::size_t t,
                     std::span<const double> losses);

// Runs one loop in place. If every bin comes back empty the state is reseeded
// once from a uniform distribution; a second empty draw throws
// DegenerateStateError.
void step(const PolynomialProgram& program, const FeedbackSchedule& schedule, SolverState& state);

SolverResult solve(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                   std::uint64_t seed, const SolveOptions& options = {});

// 1/sqrt(n_i) per bin, +inf for empty bins.
std::vector<double> fluctuation_coefficient(std::span<const Count> counts);

}  // namespace ecomp
