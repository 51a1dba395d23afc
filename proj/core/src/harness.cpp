#include "ecomp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "ecomp/errors.hpp"
#include "ecomp/imaginary_time.hpp"
#include "ecomp/program_io.hpp"
#include "text_util.hpp"

namespace ecomp {

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::entropy: return "entropy";
    case SolverKind::gd: return "gd";
    case SolverKind::brute_grid: return "brute-grid";
    case SolverKind::brute_cut: return "brute-cut";
    case SolverKind::imaginary_time: return "imaginary-time";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  for (auto kind : {SolverKind::entropy, SolverKind::gd, SolverKind::brute_grid,
                    SolverKind::brute_cut, SolverKind::imaginary_time}) {
    if (solver_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

bool operator==(const BatchSummary& a, const BatchSummary& b) {
  return a.solver == b.solver && a.num_runs == b.num_runs && a.base_seed == b.base_seed &&
         a.energies == b.energies && a.best_energy == b.best_energy &&
         a.mean_energy == b.mean_energy && a.std_energy == b.std_energy &&
         a.histogram == b.histogram && a.reference_energy == b.reference_energy &&
         a.success_fraction == b.success_fraction && a.cuts == b.cuts &&
         a.best_cut == b.best_cut && a.mean_cut == b.mean_cut;
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) {
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = static_cast<double>(b);
    return h;
  }
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it;
  const double hi = *max_it == lo ? lo + 1.0 : std::nextafter(*max_it, HUGE_VAL);
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b < bins; ++b) {
    h.edges[b] = lo + (hi - lo) * (static_cast<double>(b) / static_cast<double>(bins));
  }
  h.edges[bins] = hi;
  for (double x : values) {
    // First edge strictly above x closes x's bin.
    const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
    const auto bin = static_cast<std::size_t>(it - h.edges.begin()) - 1;
    ++h.counts[std::min(bin, bins - 1)];
  }
  return h;
}

namespace {

struct Prepared {
  PolynomialProgram program;
  double constant = 0.0;
  std::optional<EncodedProblem> encoded;
  std::optional<Graph> graph;
  double delta = 0.0;
  std::optional<DiscretizedEnsemble> evolved;
  std::optional<CutOptimum> cut_optimum;
  std::optional<GridOptimum> grid_optimum;
  FeedbackSchedule schedule;
};

Prepared prepare(const RunSpec& spec) {
  Prepared p;
  if (const auto* program = std::get_if<PolynomialProgram>(&spec.problem)) {
    p.program = *program;
  } else {
    const auto& cut = std::get<CutProblem>(spec.problem);
    const double r = cut.sum_constraint > 0.0 ? cut.sum_constraint : default_cut_sum(cut.graph);
    p.encoded = encode_max_k_cut(cut.graph, cut.colors, cut.lambda, r);
    p.program = p.encoded->program;
    p.constant = p.encoded->encoding.constant;
    p.graph = cut.graph;
  }
  p.delta = spec.grid_delta > 0.0 ? spec.grid_delta : p.program.sum_constraint() / 20.0;

  switch (spec.solver) {
    case SolverKind::entropy:
      p.schedule = build_schedule(spec.schedule);
      break;
    case SolverKind::gd:
      break;
    case SolverKind::brute_grid:
      // Deterministic, so every run would repeat the same search.
      p.grid_optimum = brute_force_grid(p.program, p.delta, spec.jobs);
      break;
    case SolverKind::brute_cut:
      if (!p.graph) throw std::invalid_argument("brute-cut needs a graph problem");
      p.cut_optimum = brute_force_cut(*p.graph, std::get<CutProblem>(spec.problem).colors);
      break;
    case SolverKind::imaginary_time:
      p.evolved = evolve(make_ensemble(p.program, p.delta), spec.evolve_time);
      break;
  }
  return p;
}

SolverResult run_one(const RunSpec& spec, const Prepared& p, std::uint64_t seed) {
  switch (spec.solver) {
    case SolverKind::entropy:
      return solve(p.program, p.schedule, seed,
                   {spec.keep_results && spec.record_v_trace, std::nullopt});
    case SolverKind::gd: {
      Rng rng(seed);
      const auto v0 = random_simplex_point(p.program.num_vars(), p.program.sum_constraint(), rng);
      auto result = projected_gradient_descent(p.program, v0, spec.gd);
      result.seed = seed;
      return result;
    }
    case SolverKind::brute_grid: {
      SolverResult r;
      r.best_energy = p.grid_optimum->best_energy;
      r.best_v = p.grid_optimum->best_v;
      r.energy_trace = {r.best_energy};
      r.seed = seed;
      return r;
    }
    case SolverKind::brute_cut: {
      SolverResult r;
      r.best_v = one_hot(p.cut_optimum->colors, p.encoded->encoding.num_colors);
      r.best_energy = evaluate(p.program, r.best_v);
      r.energy_trace = {r.best_energy};
      r.seed = seed;
      return r;
    }
    case SolverKind::imaginary_time: {
      // One draw from the evolved mixture per run.
      Rng rng(seed);
      std::discrete_distribution<std::size_t> pick(p.evolved->probabilities.begin(),
                                                   p.evolved->probabilities.end());
      const std::size_t n = pick(rng);
      SolverResult r;
      r.best_v = p.evolved->states[n];
      r.best_energy = p.evolved->energies[n];
      r.energy_trace = {r.best_energy};
      r.seed = seed;
      return r;
    }
  }
  throw std::logic_error("unhandled solver kind");
}

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

BatchSummary summarize(const RunSpec& spec, const std::vector<RunRecord>& records) {
  BatchSummary s;
  s.solver = std::string(solver_name(spec.solver));
  s.num_runs = records.size();
  s.base_seed = spec.base_seed;
  bool all_cut = !records.empty();
  for (const auto& r : records) {
    s.energies.push_back(r.best_energy);
    s.wall_seconds.push_back(r.wall_seconds);
    if (r.cut) {
      s.cuts.push_back(*r.cut);
    } else {
      all_cut = false;
    }
  }
  if (!all_cut) s.cuts.clear();
  s.best_energy = s.energies.empty() ? 0.0 : *std::min_element(s.energies.begin(), s.energies.end());
  s.mean_energy = mean_of(s.energies);
  s.std_energy = std_of(s.energies);
  s.histogram = make_histogram(s.energies, spec.histogram_bins);
  if (spec.reference_energy) {
    s.reference_energy = spec.reference_energy;
    std::size_t hits = 0;
    for (double e : s.energies) hits += e <= *spec.reference_energy + spec.success_tolerance;
    s.success_fraction = s.energies.empty()
                             ? 0.0
                             : static_cast<double>(hits) / static_cast<double>(s.energies.size());
  }
  if (!s.cuts.empty()) {
    s.best_cut = *std::max_element(s.cuts.begin(), s.cuts.end());
    s.mean_cut = mean_of(s.cuts);
  }
  return s;
}

BatchResult run_batch(const RunSpec& spec) {
  if (spec.num_runs < 1) throw std::invalid_argument("a batch needs at least one run");
  const Prepared prepared = prepare(spec);

  BatchResult out;
  out.records.resize(spec.num_runs);
  if (spec.keep_results) out.results.resize(spec.num_runs);
  std::vector<std::exception_ptr> errors(spec.num_runs);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < spec.num_runs; r = next++) {
      const std::uint64_t seed = spec.base_seed + r;
      try {
        const auto start = std::chrono::steady_clock::now();
        SolverResult result = run_one(spec, prepared, seed);
        const auto stop = std::chrono::steady_clock::now();

        RunRecord& rec = out.records[r];
        rec.run_index = r;
        rec.seed = seed;
        rec.best_energy = result.best_energy + prepared.constant;
        rec.iterations = result.iterations_run;
        rec.wall_seconds = std::chrono::duration<double>(stop - start).count();
        rec.best_v = result.best_v;
        if (prepared.graph) {
          rec.cut = cut_size(*prepared.graph, decode(result.best_v, prepared.encoded->encoding));
        }
        if (spec.keep_results) out.results[r] = std::move(result);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };

  std::size_t jobs = spec.jobs == 0 ? std::thread::hardware_concurrency() : spec.jobs;
  jobs = std::clamp<std::size_t>(jobs, 1, spec.num_runs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  for (std::size_t r = 0; r < spec.num_runs; ++r) {
    if (!errors[r]) continue;
    try {
      std::rethrow_exception(errors[r]);
    } catch (const std::exception& e) {
      throw SolverError(e.what(), r);
    }
  }
  out.summary = summarize(spec, out.records);
  return out;
}

SweepResult sweep_mu_fluctuation(const RunSpec& spec, const std::vector<double>& mu_grid,
                                 const std::vector<std::uint64_t>& budget_grid) {
  if (mu_grid.empty() || budget_grid.empty()) throw std::invalid_argument("sweep grids must be non-empty");
  SweepResult sweep{mu_grid, budget_grid, {}, {}};
  for (double mu : mu_grid) {
    std::vector<double> means;
    std::vector<double> stds;
    for (std::uint64_t budget : budget_grid) {
      RunSpec cell = spec;
      cell.schedule.mu = mu;
      cell.schedule.mu_end.reset();
      cell.schedule.budget = budget;
      cell.schedule.fluctuation.reset();
      const auto batch = run_batch(cell);
      means.push_back(batch.summary.mean_energy);
      stds.push_back(batch.summary.std_energy);
    }
    sweep.mean_energy.push_back(std::move(means));
    sweep.std_energy.push_back(std::move(stds));
  }
  return sweep;
}

void emit_trace(std::ostream& out, const SolverResult& result) {
  const bool with_v = !result.v_trace.empty();
  out << "iteration,energy";
  if (with_v) {
    for (std::size_t i = 0; i < result.v_trace.front().size(); ++i) out << ",v_" << i;
  }
  out << '\n';
  for (std::size_t t = 0; t < result.energy_trace.size(); ++t) {
    out << t << ',' << format_double(result.energy_trace[t]);
    if (with_v) {
      for (double x : result.v_trace.at(t)) out << ',' << format_double(x);
    }
    out << '\n';
  }
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += fmt(xs[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double>& xs) {
  return join(xs, [](double x) { return format_double(x); });
}

}  // namespace

void emit_trace(const std::filesystem::path& path, const SolverResult& result) {
  auto out = open_for_write(path);
  emit_trace(out, result);
}

void emit_summary(std::ostream& out, const BatchSummary& s, bool include_timing) {
  out << "solver = " << s.solver << '\n'
      << "num_runs = " << s.num_runs << '\n'
      << "base_seed = " << s.base_seed << '\n'
      << "best_energy = " << format_double(s.best_energy) << '\n'
      << "mean_energy = " << format_double(s.mean_energy) << '\n'
      << "std_energy = " << format_double(s.std_energy) << '\n'
      << "energies = " << join_doubles(s.energies) << '\n'
      << "histogram_edges = " << join_doubles(s.histogram.edges) << '\n'
      << "histogram_counts = "
      << join(s.histogram.counts, [](std::size_t c) { return std::to_string(c); }) << '\n';
  if (s.reference_energy) out << "reference_energy = " << format_double(*s.reference_energy) << '\n';
  if (s.success_fraction) out << "success_fraction = " << format_double(*s.success_fraction) << '\n';
  if (!s.cuts.empty()) out << "cuts = " << join_doubles(s.cuts) << '\n';
  if (s.best_cut) out << "best_cut = " << format_double(*s.best_cut) << '\n';
  if (s.mean_cut) out << "mean_cut = " << format_double(*s.mean_cut) << '\n';
  if (include_timing) out << "wall_seconds = " << join_doubles(s.wall_seconds) << '\n';
}

void emit_summary(const std::filesystem::path& path, const BatchSummary& summary,
                  bool include_timing) {
  auto out = open_for_write(path);
  emit_summary(out, summary, include_timing);
}

BatchSummary parse_summary(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::size_t>> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    std::string key(detail::trim(body.substr(0, eq)));
    if (!fields.emplace(key, std::pair{std::string(detail::trim(body.substr(eq + 1))), line_no})
             .second) {
      throw ParseError("duplicate key '" + key + "'", line_no);
    }
  }

  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = fields.find(key);
    if (it == fields.end()) return std::nullopt;
    auto value = it->second;
    fields.erase(it);
    return value;
  };
  auto require = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ParseError("summary is missing '" + key + "'");
    return *v;
  };
  auto doubles = [](const std::pair<std::string, std::size_t>& f) {
    std::vector<double> xs;
    for (const auto& item : detail::split_list(f.first)) xs.push_back(detail::parse_double(item, f.second));
    return xs;
  };
  auto one_double = [](const std::pair<std::string, std::size_t>& f) {
    return detail::parse_double(f.first, f.second);
  };

  BatchSummary s;
  s.solver = require("solver").first;
  auto runs = require("num_runs");
  s.num_runs = detail::parse_size(runs.first, runs.second);
  auto seed = require("base_seed");
  s.base_seed = std::stoull(std::string(seed.first));
  s.best_energy = one_double(require("best_energy"));
  s.mean_energy = one_double(require("mean_energy"));
  s.std_energy = one_double(require("std_energy"));
  s.energies = doubles(require("energies"));
  s.histogram.edges = doubles(require("histogram_edges"));
  auto counts = require("histogram_counts");
  for (const auto& item : detail::split_list(counts.first)) {
    s.histogram.counts.push_back(detail::parse_size(item, counts.second));
  }
  if (auto f = take("reference_energy")) s.reference_energy = one_double(*f);
  if (auto f = take("success_fraction")) s.success_fraction = one_double(*f);
  if (auto f = take("cuts")) s.cuts = doubles(*f);
  if (auto f = take("best_cut")) s.best_cut = one_double(*f);
  if (auto f = take("mean_cut")) s.mean_cut = one_double(*f);
  if (auto f = take("wall_seconds")) s.wall_seconds = doubles(*f);
  if (!fields.empty()) {
    const auto& [key, value] = *fields.begin();
    throw ParseError("unknown summary key '" + key + "'", value.second);
  }
  if (s.energies.size() != s.num_runs) throw ParseError("energies do not match num_runs");
  return s;
}

BatchSummary read_summary_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open summary '" + path.string() + "'");
  return parse_summary(in);
}

void emit_records(std::ostream& out, const std::vector<RunRecord>& records, bool include_timing) {
  const bool with_cut = !records.empty() && records.front().cut.has_value();
  out << "run,seed,best_energy";
  if (with_cut) out << ",cut";
  out << ",iterations";
  if (include_timing) out << ",wall_seconds";
  out << '\n';
  for (const auto& r : records) {
    out << r.run_index << ',' << r.seed << ',' << format_double(r.best_energy);
    if (with_cut) out << ',' << format_double(r.cut.value_or(0.0));
    out << ',' << r.iterations;
    if (include_timing) out << ',' << format_double(r.wall_seconds);
    out << '\n';
  }
}

void emit_sweep(std::ostream& out, const SweepResult& sweep) {
  out << "mu,budget,mean_energy,std_energy\n";
  for (std::size_t i = 0; i < sweep.mu_grid.size(); ++i) {
    for (std::size_t j = 0; j < sweep.budget_grid.size(); ++j) {
      out << format_double(sweep.mu_grid[i]) << ',' << sweep.budget_grid[j] << ','
          << format_double(sweep.mean_energy[i][j]) << ','
          << format_double(sweep.std_energy[i][j]) << '\n';
    }
  }
}

}  // namespace ecomp
