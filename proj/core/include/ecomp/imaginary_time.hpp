#pragma once

// Exact relaxation on a discretized simplex. Every grid point is treated as
// an energy eigenstate; a mixture P_n evolves in imaginary time as
// P_n(t) ~ P_n exp(-2 E_n t). Small instances only: the grid grows as
// C(R/delta + N - 1, N - 1).

#include <cstddef>
#include <span>
#include <vector>

#include "ecomp/polynomial.hpp"

namespace ecomp {

struct DiscretizedEnsemble {
  std::vector<std::vector<double>> states;
  std::vector<double> probabilities;
  std::vector<double> energies;
};

// Number of grid points, saturating at SIZE_MAX on overflow.
std::size_t count_grid_states(std::size_t num_vars, std::size_t parts);

// R / delta as an integer. Throws std::invalid_argument unless it is a
// positive integer to within 1e-9.
std::size_t grid_parts(double sum_constraint, double delta);

// All compositions of R into N multiples of delta, in lexicographic order of
// the unit counts. Each state sums to R exactly up to rounding.
std::vector<std::vector<double>> enumerate_states(std::size_t num_vars, double sum_constraint,
                                                  double delta);

// Uniform prior over the grid of the program's simplex.
DiscretizedEnsemble make_ensemble(const PolynomialProgram& program, double delta);

DiscretizedEnsemble evolve(const DiscretizedEnsemble& ensemble, double t);

double expected_energy(const DiscretizedEnsemble& ensemble);

// States with E_n <= min E + tol.
std::vector<std::vector<double>> ground_states(const DiscretizedEnsemble& ensemble, double tol);

// Mass on states with E_n <= min E + tol.
double ground_state_mass(const DiscretizedEnsemble& ensemble, double tol);

double total_variation(std::span<const double> p, std::span<const double> q);

// Nearest grid point with the same sum: floor every coordinate to the grid,
// then hand the leftover units to the largest remainders.
std::vector<double> snap_to_grid(std::span<const double> v, double sum_constraint, double delta);

}  // namespace ecomp
