// ecomp: command-line front end for the entropy-computing simulator.
//
// Exit codes: 0 success, 2 bad input (parse or usage), 3 solver failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ecomp/baselines.hpp"
#include "ecomp/dynamics.hpp"
#include "ecomp/encoders.hpp"
#include "ecomp/errors.hpp"
#include "ecomp/generators.hpp"
#include "ecomp/harness.hpp"
#include "ecomp/imaginary_time.hpp"
#include "ecomp/program_io.hpp"
#include "ecomp/schedule.hpp"

namespace fs = std::filesystem;
using namespace ecomp;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;

// Flags shared by every subcommand that reads a problem.
struct ProblemArgs {
  std::string problem_path;
  std::string graph_path;
  std::size_t colors = 2;
  double lambda = kDefaultLambda;
  double sum_constraint = 0.0;
};

void add_problem_flags(CLI::App* cmd, ProblemArgs& args) {
  auto* problem = cmd->add_option("--problem,-p", args.problem_path, "polynomial program file");
  auto* graph = cmd->add_option("--graph,-g", args.graph_path, "graph file (max-k-cut)");
  problem->excludes(graph);
  cmd->add_option("--colors,-k", args.colors, "number of cut classes")->check(CLI::Range(2, 64));
  cmd->add_option("--lambda", args.lambda, "Potts regularization strength")->check(CLI::NonNegativeNumber);
  cmd->add_option("--sum-constraint,-R", args.sum_constraint,
                  "override R (default: file value, or node count for graphs)");
}

ProblemSource load_problem(const ProblemArgs& args) {
  if (!args.graph_path.empty()) {
    return CutProblem{read_graph_file(args.graph_path), args.colors, args.lambda,
                      args.sum_constraint};
  }
  if (args.problem_path.empty()) throw CLI::ValidationError("one of --problem or --graph is required");
  auto program = read_program_file(args.problem_path);
  if (args.sum_constraint > 0.0) program = with_sum_constraint(program, args.sum_constraint);
  return program;
}

const PolynomialProgram& program_of(const ProblemSource& source,
                                    std::optional<EncodedProblem>& storage) {
  if (const auto* p = std::get_if<PolynomialProgram>(&source)) return *p;
  const auto& cut = std::get<CutProblem>(source);
  const double r = cut.sum_constraint > 0.0 ? cut.sum_constraint : default_cut_sum(cut.graph);
  storage = encode_max_k_cut(cut.graph, cut.colors, cut.lambda, r);
  return storage->program;
}

struct BatchArgs {
  std::string schedule = "schedule4";
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out_dir;
  bool traces = false;
  bool v_trace = false;
  bool timing = false;
  std::optional<double> reference;
  double tolerance = 1e-6;
  std::size_t bins = 10;
  double dark_rate = -1.0;
};

void add_batch_flags(CLI::App* cmd, BatchArgs& args, bool with_schedule) {
  if (with_schedule) {
    cmd->add_option("--schedule,-s", args.schedule, "preset name (schedule1..4) or schedule file");
    cmd->add_option("--dark-rate", args.dark_rate, "override the schedule's dark count rate");
    cmd->add_flag("--traces", args.traces, "write one trace CSV per run into --out/traces");
    cmd->add_flag("--v-trace", args.v_trace, "include variable columns in traces");
  }
  cmd->add_option("--runs,-n", args.runs, "number of seeded runs")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "base seed; run r uses seed + r");
  cmd->add_option("--jobs,-j", args.jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out,-o", args.out_dir, "output directory");
  cmd->add_option("--reference", args.reference, "known optimum energy for the success fraction");
  cmd->add_option("--tolerance", args.tolerance, "success tolerance around --reference");
  cmd->add_option("--bins", args.bins, "histogram bins")->check(CLI::PositiveNumber);
  cmd->add_flag("--timing", args.timing, "include wall-clock seconds in the outputs");
}

RunSpec make_spec(ProblemSource problem, SolverKind solver, const BatchArgs& args) {
  RunSpec spec;
  spec.problem = std::move(problem);
  spec.solver = solver;
  spec.schedule = resolve_schedule_config(args.schedule);
  if (args.dark_rate >= 0.0) spec.schedule.dark_rate = args.dark_rate;
  spec.num_runs = args.runs;
  spec.base_seed = args.seed;
  spec.jobs = args.jobs;
  spec.reference_energy = args.reference;
  spec.success_tolerance = args.tolerance;
  spec.histogram_bins = args.bins;
  spec.keep_results = args.traces;
  spec.record_v_trace = args.v_trace;
  return spec;
}

void write_batch(const BatchResult& batch, const BatchArgs& args) {
  emit_summary(std::cout, batch.summary, args.timing);
  if (args.out_dir.empty()) return;
  const fs::path dir(args.out_dir);
  fs::create_directories(dir);
  emit_summary(dir / "summary.txt", batch.summary, args.timing);
  std::ofstream records(dir / "records.csv");
  emit_records(records, batch.records, args.timing);
  if (!batch.results.empty()) {
    fs::create_directories(dir / "traces");
    for (std::size_t r = 0; r < batch.results.size(); ++r) {
      emit_trace(dir / "traces" / ("run_" + std::to_string(r) + ".csv"), batch.results[r]);
    }
  }
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto next = list.find(',', pos);
    const auto item = list.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw CLI::ValidationError("bad number '" + item + "'");
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-computing simulator: measurement-feedback solver, oracles and baselines"};
  app.require_subcommand(1);

  // solve
  ProblemArgs solve_problem;
  BatchArgs solve_batch;
  std::string solver_name_arg = "entropy";
  double solve_delta = 0.0;
  double solve_time = 10.0;
  auto* solve_cmd = app.add_subcommand("solve", "run a seeded batch of one solver");
  add_problem_flags(solve_cmd, solve_problem);
  add_batch_flags(solve_cmd, solve_batch, true);
  solve_cmd->add_option("--solver", solver_name_arg,
                        "entropy, gd, brute-grid, brute-cut or imaginary-time");
  solve_cmd->add_option("--delta", solve_delta, "grid spacing for grid solvers (default R/20)");
  solve_cmd->add_option("--time", solve_time, "imaginary time for imaginary-time runs");

  // encode-maxkcut
  std::string enc_graph;
  std::size_t enc_nodes = 0;
  double enc_p = 0.5;
  std::uint64_t enc_seed = 0;
  std::size_t enc_colors = 2;
  double enc_lambda = kDefaultLambda;
  double enc_r = 0.0;
  std::string enc_out;
  std::string enc_graph_out;
  auto* enc_cmd = app.add_subcommand("encode-maxkcut", "write the Potts program for a graph");
  auto* enc_graph_opt = enc_cmd->add_option("--graph,-g", enc_graph, "graph file");
  auto* enc_nodes_opt =
      enc_cmd->add_option("--random", enc_nodes, "generate G(n, p) with this many nodes");
  enc_graph_opt->excludes(enc_nodes_opt);
  enc_cmd->add_option("--edge-prob", enc_p, "edge probability for --random")->check(CLI::Range(0.0, 1.0));
  enc_cmd->add_option("--seed", enc_seed, "seed for --random");
  enc_cmd->add_option("--colors,-k", enc_colors, "number of cut classes")->check(CLI::Range(2, 64));
  enc_cmd->add_option("--lambda", enc_lambda, "Potts regularization strength")->check(CLI::NonNegativeNumber);
  enc_cmd->add_option("--sum-constraint,-R", enc_r, "R (default: node count)");
  enc_cmd->add_option("--out,-o", enc_out, "program file (default stdout)");
  enc_cmd->add_option("--graph-out", enc_graph_out, "also write the graph here");

  // gen
  std::string gen_kind;
  QpConfig gen_qp;
  std::uint64_t gen_seed = 0;
  double gen_p = 0.5;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
  gen_cmd->add_option("kind", gen_kind, "nonconvex-qp or graph")
      ->required()
      ->check(CLI::IsMember({"nonconvex-qp", "graph"}));
  gen_cmd->add_option("--vars", gen_qp.vars, "variables (nonconvex-qp) or nodes (graph)")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--nonconvexity", gen_qp.nonconvexity, "fraction of negative eigenvalues")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--sum-constraint,-R", gen_qp.sum_constraint, "R")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--slack", gen_qp.slack, "append a slack variable");
  gen_cmd->add_option("--edge-prob", gen_p, "edge probability (graph)")->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out,-o", gen_out, "output file (default stdout)");

  // oracle-it
  ProblemArgs it_problem;
  double it_delta = 0.0;
  std::string it_times = "0,0.1,0.5,1,2,5,10";
  double it_tol = 1e-9;
  auto* it_cmd = app.add_subcommand("oracle-it", "exact imaginary-time relaxation report");
  add_problem_flags(it_cmd, it_problem);
  it_cmd->add_option("--delta", it_delta, "grid spacing (default R/20)");
  it_cmd->add_option("--times", it_times, "comma separated evolution times");
  it_cmd->add_option("--tolerance", it_tol, "energy tolerance defining ground states");

  // baseline-gd
  ProblemArgs gd_problem;
  BatchArgs gd_batch;
  GdConfig gd_config;
  auto* gd_cmd = app.add_subcommand("baseline-gd", "projected gradient descent from random simplex points");
  add_problem_flags(gd_cmd, gd_problem);
  add_batch_flags(gd_cmd, gd_batch, false);
  gd_cmd->add_option("--step", gd_config.step_size, "fixed step size")->check(CLI::PositiveNumber);
  gd_cmd->add_option("--iterations", gd_config.iterations, "iteration cap")->check(CLI::PositiveNumber);
  gd_cmd->add_option("--tol", gd_config.tolerance, "stop when a step moves less than this");

  // brute
  ProblemArgs brute_problem;
  double brute_delta = 0.0;
  std::size_t brute_jobs = 0;
  auto* brute_cmd = app.add_subcommand("brute", "exact grid minimum, or exact max-k-cut for --graph");
  add_problem_flags(brute_cmd, brute_problem);
  brute_cmd->add_option("--delta", brute_delta, "grid spacing (default R/20)");
  brute_cmd->add_option("--jobs,-j", brute_jobs, "worker threads (0 = all cores)");

  // sweep
  ProblemArgs sweep_problem;
  BatchArgs sweep_batch;
  std::string sweep_mu = "0.0003,0.003,0.03";
  std::string sweep_budget = "1000,10000,100000";
  auto* sweep_cmd = app.add_subcommand("sweep", "mean energy over a mu x budget grid");
  add_problem_flags(sweep_cmd, sweep_problem);
  add_batch_flags(sweep_cmd, sweep_batch, true);
  sweep_cmd->add_option("--mu", sweep_mu, "comma separated mean photon numbers");
  sweep_cmd->add_option("--budget", sweep_budget, "comma separated detection budgets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) {
      auto spec = make_spec(load_problem(solve_problem), parse_solver_kind(solver_name_arg), solve_batch);
      spec.grid_delta = solve_delta;
      spec.evolve_time = solve_time;
      auto batch = run_batch(spec);
      write_batch(batch, solve_batch);
    } else if (*enc_cmd) {
      Graph graph;
      if (!enc_graph.empty()) {
        graph = read_graph_file(enc_graph);
      } else if (enc_nodes > 0) {
        graph = random_graph(enc_nodes, enc_p, enc_seed);
      } else {
        throw CLI::ValidationError("one of --graph or --random is required");
      }
      const double r = enc_r > 0.0 ? enc_r : default_cut_sum(graph);
      const auto encoded = encode_max_k_cut(graph, enc_colors, enc_lambda, r);
      const std::string comment = "max-" + std::to_string(enc_colors) + "-cut, lambda " +
                                  format_double(enc_lambda) + ", dropped constant " +
                                  format_double(encoded.encoding.constant);
      if (enc_out.empty()) {
        write_program(std::cout, encoded.program, comment);
      } else {
        write_program_file(enc_out, encoded.program, comment);
      }
      if (!enc_graph_out.empty()) {
        std::ofstream out(enc_graph_out);
        write_graph(out, graph);
      }
    } else if (*gen_cmd) {
      std::ofstream file;
      std::ostream& out = gen_out.empty() ? std::cout : (file.open(gen_out), file);
      if (!out) throw std::runtime_error("cannot open '" + gen_out + "'");
      if (gen_kind == "nonconvex-qp") {
        write_program(out, generate_nonconvex_qp(gen_qp, gen_seed),
                      "nonconvex QP, " + std::to_string(gen_qp.vars) + " vars, seed " +
                          std::to_string(gen_seed));
      } else {
        write_graph(out, random_graph(gen_qp.vars, gen_p, gen_seed));
      }
    } else if (*it_cmd) {
      std::optional<EncodedProblem> storage;
      const auto source = load_problem(it_problem);
      const auto& program = program_of(source, storage);
      const double delta = it_delta > 0.0 ? it_delta : program.sum_constraint() / 20.0;
      const auto ensemble = make_ensemble(program, delta);
      const auto ground = ground_states(ensemble, it_tol);
      std::printf("states = %zu\nground_states = %zu\nmin_energy = %s\n", ensemble.states.size(),
                  ground.size(),
                  format_double(*std::min_element(ensemble.energies.begin(), ensemble.energies.end()))
                      .c_str());
      std::printf("time,expected_energy,ground_mass\n");
      for (double t : parse_doubles(it_times)) {
        const auto evolved = evolve(ensemble, t);
        std::printf("%s,%s,%s\n", format_double(t).c_str(),
                    format_double(expected_energy(evolved)).c_str(),
                    format_double(ground_state_mass(evolved, it_tol)).c_str());
      }
    } else if (*gd_cmd) {
      auto spec = make_spec(load_problem(gd_problem), SolverKind::gd, gd_batch);
      spec.gd = gd_config;
      write_batch(run_batch(spec), gd_batch);
    } else if (*brute_cmd) {
      const auto source = load_problem(brute_problem);
      if (const auto* cut = std::get_if<CutProblem>(&source)) {
        const auto opt = brute_force_cut(cut->graph, cut->colors);
        std::printf("max_cut = %s\ncolors =", format_double(opt.value).c_str());
        for (auto c : opt.colors) std::printf(" %zu", c);
        std::printf("\n");
      } else {
        const auto& program = std::get<PolynomialProgram>(source);
        const double delta = brute_delta > 0.0 ? brute_delta : program.sum_constraint() / 20.0;
        const auto opt = brute_force_grid(program, delta, brute_jobs);
        std::printf("best_energy = %s\nstates = %zu\nbest_v =", format_double(opt.best_energy).c_str(),
                    opt.states_checked);
        for (double x : opt.best_v) std::printf(" %s", format_double(x).c_str());
        std::printf("\n");
      }
    } else if (*sweep_cmd) {
      auto spec = make_spec(load_problem(sweep_problem), SolverKind::entropy, sweep_batch);
      std::vector<std::uint64_t> budgets;
      for (double b : parse_doubles(sweep_budget)) {
        if (!(b >= 1.0)) throw CLI::ValidationError("budgets must be >= 1");
        budgets.push_back(static_cast<std::uint64_t>(b));
      }
      const auto sweep = sweep_mu_fluctuation(spec, parse_doubles(sweep_mu), budgets);
      emit_sweep(std::cout, sweep);
      if (!sweep_batch.out_dir.empty()) {
        fs::create_directories(sweep_batch.out_dir);
        std::ofstream out(fs::path(sweep_batch.out_dir) / "sweep.csv");
        emit_sweep(out, sweep);
      }
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
