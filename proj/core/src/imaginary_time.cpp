#include "ecomp/imaginary_time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ecomp {

std::size_t count_grid_states(std::size_t num_vars, std::size_t parts) {
  // C(parts + num_vars - 1, num_vars - 1), built incrementally so every
  // intermediate value is itself a binomial coefficient.
  if (num_vars == 0) return 0;
  const std::size_t k = num_vars - 1;
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t factor = parts + i;
    if (result > std::numeric_limits<std::size_t>::max() / factor) {
      return std::numeric_limits<std::size_t>::max();
    }
    result = result * factor / i;
  }
  return result;
}

std::size_t grid_parts(double sum_constraint, double delta) {
  if (!(delta > 0.0) || !(sum_constraint > 0.0)) {
    throw std::invalid_argument("grid needs R > 0 and delta > 0");
  }
  const double ratio = sum_constraint / delta;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("R / delta must be a positive integer");
  }
  return static_cast<std::size_t>(rounded);
}

std::vector<std::vector<double>> enumerate_states(std::size_t num_vars, double sum_constraint,
                                                  double delta) {
  if (num_vars == 0) throw std::invalid_argument("grid needs at least one variable");
  const std::size_t parts = grid_parts(sum_constraint, delta);
  const std::size_t total = count_grid_states(num_vars, parts);
  if (total > 100'000'000) throw std::invalid_argument("grid too large to enumerate");

  std::vector<std::vector<double>> states;
  states.reserve(total);
  const double unit = sum_constraint / static_cast<double>(parts);
  std::vector<double> current(num_vars, 0.0);

  // Depth-first over the leading coordinates; the last one takes the rest.
  auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == num_vars) {
      current[pos] = unit * static_cast<double>(left);
      states.push_back(current);
      return;
    }
    for (std::size_t u = 0; u <= left; ++u) {
      current[pos] = unit * static_cast<double>(u);
      self(self, pos + 1, left - u);
    }
  };
  fill(fill, 0, parts);
  return states;
}

DiscretizedEnsemble make_ensemble(const PolynomialProgram& program, double delta) {
  DiscretizedEnsemble ensemble;
  ensemble.states = enumerate_states(program.num_vars(), program.sum_constraint(), delta);
  const std::size_t n = ensemble.states.size();
  ensemble.probabilities.assign(n, 1.0 / static_cast<double>(n));
  ensemble.energies.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ensemble.energies[i] = evaluate(program, ensemble.states[i]);
  }
  return ensemble;
}

DiscretizedEnsemble evolve(const DiscretizedEnsemble& ensemble, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolution time must be >= 0");
  DiscretizedEnsemble out = ensemble;
  if (t == 0.0 || ensemble.energies.empty()) return out;
  const double e_min = *std::min_element(ensemble.energies.begin(), ensemble.energies.end());
  double total = 0.0;
  for (std::size_t i = 0; i < out.probabilities.size(); ++i) {
    out.probabilities[i] *= std::exp(-2.0 * (ensemble.energies[i] - e_min) * t);
    total += out.probabilities[i];
  }
  if (!(total > 0.0)) {
    // Every state with prior mass lies strictly above the minimum and has
    // underflowed. Fall back to the lowest-energy states that had mass.
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ensemble.energies.size(); ++i) {
      if (ensemble.probabilities[i] > 0.0) best = std::min(best, ensemble.energies[i]);
    }
    for (std::size_t i = 0; i < out.probabilities.size(); ++i) {
      out.probabilities[i] =
          ensemble.probabilities[i] > 0.0 && ensemble.energies[i] == best
              ? ensemble.probabilities[i]
              : 0.0;
      total += out.probabilities[i];
    }
  }
  for (auto& p : out.probabilities) p /= total;
  return out;
}

double expected_energy(const DiscretizedEnsemble& ensemble) {
  double e = 0.0;
  for (std::size_t i = 0; i < ensemble.energies.size(); ++i) {
    e += ensemble.probabilities[i] * ensemble.energies[i];
  }
  return e;
}

namespace {

template <typename F>
void for_each_ground(const DiscretizedEnsemble& ensemble, double tol, F&& f) {
  if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  if (ensemble.energies.empty()) return;
  const double e_min = *std::min_element(ensemble.energies.begin(), ensemble.energies.end());
  for (std::size_t i = 0; i < ensemble.energies.size(); ++i) {
    if (ensemble.energies[i] <= e_min + tol) f(i);
  }
}

}  // namespace

std::vector<std::vector<double>> ground_states(const DiscretizedEnsemble& ensemble, double tol) {
  std::vector<std::vector<double>> out;
  for_each_ground(ensemble, tol, [&](std::size_t i) { out.push_back(ensemble.states[i]); });
  return out;
}

double ground_state_mass(const DiscretizedEnsemble& ensemble, double tol) {
  double mass = 0.0;
  for_each_ground(ensemble, tol, [&](std::size_t i) { mass += ensemble.probabilities[i]; });
  return mass;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

std::vector<double> snap_to_grid(std::span<const double> v, double sum_constraint, double delta) {
  const std::size_t parts = grid_parts(sum_constraint, delta);
  const double unit = sum_constraint / static_cast<double>(parts);
  double total = 0.0;
  for (double x : v) total += std::max(x, 0.0);
  if (v.empty() || !(total > 0.0)) throw std::invalid_argument("cannot snap an empty point");

  std::vector<std::size_t> units(v.size());
  std::vector<double> remainder(v.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double scaled = std::max(v[i], 0.0) / total * static_cast<double>(parts);
    units[i] = static_cast<std::size_t>(std::floor(scaled));
    remainder[i] = scaled - static_cast<double>(units[i]);
    assigned += units[i];
  }
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < parts; ++k, ++assigned) ++units[order[k % order.size()]];

  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = unit * static_cast<double>(units[i]);
  return out;
}

}  // namespace ecomp
