#include "ecomp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ecomp/errors.hpp"

namespace ecomp {

namespace {

Count draw_poisson(double mean, Rng& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<Count> dist(mean);
  return dist(rng);
}

void check_schedule_fits(const PolynomialProgram& program, const FeedbackSchedule& schedule) {
  schedule.validate();
  if (program.num_vars() == 0) throw std::invalid_argument("program has no variables");
}

std::vector<Count> uniform_counts(std::size_t n, double budget, double dark_mean, Rng& rng) {
  std::vector<Count> counts(n);
  const double mean = budget / static_cast<double>(n);
  for (auto& c : counts) c = draw_poisson(mean, rng) + draw_poisson(dark_mean, rng);
  return counts;
}

bool all_zero(std::span<const Count> counts) {
  return std::all_of(counts.begin(), counts.end(), [](Count c) { return c == 0; });
}

// Expected photons per bin, computed in the log domain so that strongly
// damped bins do not underflow before the normalization.
std::vector<double> detection_means(std::span<const double> v, std::span<const double> losses,
                                    double eta, double budget) {
  const double min_loss = *std::min_element(losses.begin(), losses.end());
  std::vector<double> log_w(v.size(), -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) {
      log_w[i] = std::log(v[i]) - eta * (losses[i] - min_loss);
      max_log = std::max(max_log, log_w[i]);
    }
  }
  std::vector<double> means(v.size(), 0.0);
  if (!std::isfinite(max_log)) return means;
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    means[i] = std::exp(log_w[i] - max_log);
    total += means[i];
  }
  for (auto& m : means) m *= budget / total;
  return means;
}

}  // namespace

SolverState init_state(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                       std::uint64_t seed) {
  check_schedule_fits(program, schedule);
  SolverState state;
  state.rng.seed(seed);
  const std::size_t n = program.num_vars();
  const double budget = schedule.budget_at(0, n);
  state.counts = uniform_counts(n, budget, 0.0, state.rng);
  if (all_zero(state.counts)) state.counts = uniform_counts(n, budget, 0.0, state.rng);
  state.v = normalize(state.counts, program.sum_constraint());
  return state;
}

SolverState init_state_from(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                            std::span<const double> v0, std::uint64_t seed) {
  check_schedule_fits(program, schedule);
  if (v0.size() != program.num_vars()) {
    throw std::invalid_argument("initial point has the wrong number of components");
  }
  double total = 0.0;
  for (double x : v0) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("initial point must be finite and non-negative");
    }
    total += x;
  }
  if (!(total > 0.0)) throw std::invalid_argument("initial point must have a positive sum");

  SolverState state;
  state.rng.seed(seed);
  const double budget = schedule.budget_at(0, program.num_vars());
  state.counts.resize(v0.size());
  for (std::size_t i = 0; i < v0.size(); ++i) {
    state.counts[i] = draw_poisson(budget * v0[i] / total, state.rng);
  }
  if (all_zero(state.counts)) {
    state.counts = uniform_counts(v0.size(), budget, 0.0, state.rng);
  }
  state.v = normalize(state.counts, program.sum_constraint());
  return state;
}

std::vector<double> loss_rates(const PolynomialProgram& program, std::span<const double> v) {
  return gradient(program, v);
}

std::vector<double> survival_probabilities(std::span<const double> losses, double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("loss gain must be >= 0");
  std::vector<double> p(losses.size(), 1.0);
  if (losses.empty() || eta == 0.0) return p;
  const double min_loss = *std::min_element(losses.begin(), losses.end());
  for (std::size_t i = 0; i < losses.size(); ++i) p[i] = std::exp(-eta * (losses[i] - min_loss));
  return p;
}

std::vector<Count> sample_counts(std::span<const double> v, std::span<const double> survival,
                                 double budget, double dark_mean, Rng& rng) {
  if (v.size() != survival.size()) throw std::invalid_argument("v and survival differ in size");
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += v[i] * survival[i];
  if (!(total > 0.0)) throw DegenerateStateError("no bin has positive occupation after damping");
  std::vector<Count> counts(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    counts[i] = draw_poisson(budget * v[i] * survival[i] / total, rng) +
                draw_poisson(dark_mean, rng);
  }
  return counts;
}

std::vector<double> normalize(std::span<const Count> counts, double sum_constraint) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), Count{0}));
  if (!(total > 0.0)) throw DegenerateStateError("all photon counts are zero");
  std::vector<double> v(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    v[i] = sum_constraint * (static_cast<double>(counts[i]) / total);
  }
  return v;
}

double effective_eta(const FeedbackSchedule& schedule, std::size_t t,
                     std::span<const double> losses) {
  const double gain = schedule.gain_at(t);
  if (schedule.gain_mode == GainMode::absolute || losses.empty()) return gain;
  const double min_loss = *std::min_element(losses.begin(), losses.end());
  double spread = 0.0;
  for (double l : losses) spread += l - min_loss;
  spread /= static_cast<double>(losses.size());
  return spread > 0.0 ? gain / spread : 0.0;
}

void step(const PolynomialProgram& program, const FeedbackSchedule& schedule, SolverState& state) {
  const std::size_t t = state.iteration;
  if (t >= schedule.iterations) throw std::logic_error("schedule already finished");
  const std::size_t n = program.num_vars();

  std::vector<double> losses(n);
  gradient_into(program, state.v, losses);
  for (double l : losses) {
    if (!std::isfinite(l)) throw std::overflow_error("loss rate is not finite");
  }
  const double eta = effective_eta(schedule, t, losses);
  const double budget = schedule.budget_at(t, n);
  const double dark = schedule.dark_mean_at(t);

  const auto means = detection_means(state.v, losses, eta, budget);
  std::vector<Count> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    counts[i] = draw_poisson(means[i], state.rng) + draw_poisson(dark, state.rng);
  }
  if (all_zero(counts)) {
    counts = uniform_counts(n, budget, dark, state.rng);
    if (all_zero(counts)) {
      throw DegenerateStateError("all bins empty after a uniform reseed");
    }
  }

  state.counts = std::move(counts);
  state.v = normalize(state.counts, program.sum_constraint());
  state.iteration = t + 1;

  const double energy = evaluate_unchecked(program, state.v);
  if (energy < state.best_energy) {
    state.best_energy = energy;
    state.best_v = state.v;
  }
}

SolverResult solve(const PolynomialProgram& program, const FeedbackSchedule& schedule,
                   std::uint64_t seed, const SolveOptions& options) {
  SolverState state;
  try {
    state = options.initial_v ? init_state_from(program, schedule, *options.initial_v, seed)
                              : init_state(program, schedule, seed);
  } catch (const DegenerateStateError& e) {
    throw DegenerateStateError(std::string("initial state: ") + e.what());
  }
  SolverResult result;
  result.seed = seed;
  result.energy_trace.reserve(schedule.iterations);
  if (options.record_v_trace) result.v_trace.reserve(schedule.iterations);

  for (std::size_t t = 0; t < schedule.iterations; ++t) {
    try {
      step(program, schedule, state);
    } catch (const DegenerateStateError& e) {
      throw DegenerateStateError("iteration " + std::to_string(t) + ": " + e.what());
    } catch (const std::overflow_error& e) {
      throw std::overflow_error("iteration " + std::to_string(t) + ": " + e.what());
    }
    result.energy_trace.push_back(evaluate_unchecked(program, state.v));
    if (options.record_v_trace) result.v_trace.push_back(state.v);
  }

  result.best_energy = state.best_energy;
  result.best_v = std::move(state.best_v);
  result.iterations_run = state.iteration;
  return result;
}

std::vector<double> fluctuation_coefficient(std::span<const Count> counts) {
  std::vector<double> f(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    f[i] = counts[i] == 0 ? std::numeric_limits<double>::infinity()
                          : 1.0 / std::sqrt(static_cast<double>(counts[i]));
  }
  return f;
}

}  // namespace ecomp
