#pragma once

// Seeded batches of solver runs and the text formats they are written in.
// Run r of a batch uses seed base_seed + r, so every output is a pure
// function of the RunSpec.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecomp/baselines.hpp"
#include "ecomp/dynamics.hpp"
#include "ecomp/encoders.hpp"
#include "ecomp/polynomial.hpp"
#include "ecomp/schedule.hpp"

namespace ecomp {

enum class SolverKind { entropy, gd, brute_grid, brute_cut, imaginary_time };

std::string_view solver_name(SolverKind kind);
// Accepts entropy, gd, brute-grid, brute-cut, imaginary-time.
SolverKind parse_solver_kind(std::string_view name);

struct CutProblem {
  Graph graph;
  std::size_t colors = 2;
  double lambda = kDefaultLambda;
  double sum_constraint = 0.0;  // <= 0 means one unit per node
};

using ProblemSource = std::variant<PolynomialProgram, CutProblem>;

struct RunSpec {
  ProblemSource problem;
  SolverKind solver = SolverKind::entropy;
  ScheduleConfig schedule = preset_config("schedule4");
  std::size_t num_runs = 1;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;  // 0 means hardware concurrency

  GdConfig gd;
  // Grid spacing for brute-grid and imaginary-time; <= 0 means R / 20.
  double grid_delta = 0.0;
  // Imaginary time at which imaginary-time runs sample the ensemble.
  double evolve_time = 10.0;

  // Known optimum energy; enables the success fraction.
  std::optional<double> reference_energy;
  double success_tolerance = 1e-6;
  std::size_t histogram_bins = 10;
  bool keep_results = false;    // keep full SolverResults (traces) per run
  bool record_v_trace = false;  // entropy runs: keep v per loop in those results
};

struct RunRecord {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  double best_energy = 0.0;
  std::optional<double> cut;  // cut problems only
  std::size_t iterations = 0;
  double wall_seconds = 0.0;
  std::vector<double> best_v;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries, half-open [e_b, e_{b+1})
  std::vector<std::size_t> counts;

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

// Equal-width bins over [min, nextafter(max)); [min, min + 1) when all
// values coincide.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

struct BatchSummary {
  std::string solver;
  std::size_t num_runs = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> energies;
  double best_energy = 0.0;
  double mean_energy = 0.0;
  double std_energy = 0.0;
  Histogram histogram;
  std::optional<double> reference_energy;
  std::optional<double> success_fraction;
  std::vector<double> cuts;  // empty unless the problem is a cut problem
  std::optional<double> best_cut;
  std::optional<double> mean_cut;
  std::vector<double> wall_seconds;  // not part of equality

  friend bool operator==(const BatchSummary& a, const BatchSummary& b);
};

struct BatchResult {
  BatchSummary summary;
  std::vector<RunRecord> records;        // sorted by run index
  std::vector<SolverResult> results;     // filled when keep_results is set
};

// Runs spec.num_runs independent runs on a pool of spec.jobs threads.
// A failing run is reported as SolverError carrying the lowest failing index.
BatchResult run_batch(const RunSpec& spec);

BatchSummary summarize(const RunSpec& spec, const std::vector<RunRecord>& records);

struct SweepResult {
  std::vector<double> mu_grid;
  std::vector<std::uint64_t> budget_grid;
  // mean_energy[i][j] and std_energy[i][j] for mu_grid[i], budget_grid[j].
  std::vector<std::vector<double>> mean_energy;
  std::vector<std::vector<double>> std_energy;
};

// One run_batch per (mu, budget) cell with a constant mu and fixed budget.
SweepResult sweep_mu_fluctuation(const RunSpec& spec, const std::vector<double>& mu_grid,
                                 const std::vector<std::uint64_t>& budget_grid);

// iteration,energy[,v_0,...,v_{N-1}]
void emit_trace(std::ostream& out, const SolverResult& result);
void emit_trace(const std::filesystem::path& path, const SolverResult& result);

// `key = value` lines; vectors are comma separated. Wall-clock seconds are
// written only when include_timing is set.
void emit_summary(std::ostream& out, const BatchSummary& summary, bool include_timing = true);
void emit_summary(const std::filesystem::path& path, const BatchSummary& summary,
                  bool include_timing = true);
BatchSummary parse_summary(std::istream& in);
BatchSummary read_summary_file(const std::filesystem::path& path);

// run,seed,best_energy[,cut],iterations[,wall_seconds]
void emit_records(std::ostream& out, const std::vector<RunRecord>& records,
                  bool include_timing = false);

// mu,budget,mean_energy,std_energy
void emit_sweep(std::ostream& out, const SweepResult& sweep);

}  // namespace ecomp
