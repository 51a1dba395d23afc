#pragma once

// Feedback schedules: how many loops to run, how many photons to collect per
// loop, and how strongly the measured losses damp each time bin.
//
// Schedule files are `key = value` lines ('#' comments allowed):
//
//   preset     = schedule4      # optional base, later keys override it
//   iterations = 1000
//   budget     = 100000         # expected detected photons per loop
//   eta_start  = 0
//   eta_end    = 8
//   eta_shape  = linear         # or geometric (needs eta_start > 0)
//   gain_mode  = adaptive       # or absolute
//   dark_rate  = 0              # dark counts per bin per loop at mu = 0.01
//   mu         = 0.001
//   mu_end     = 0.001          # optional, linear ramp from mu
//   fluctuation = 0.05          # optional per-bin 1/sqrt(n) target; overrides budget

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecomp {

// Mean photon number at which dark_count_rate is quoted. Collecting the same
// photon budget at a lower mu takes proportionally more pulses, so the dark
// counts accumulated per loop scale as kReferenceMu / mu.
inline constexpr double kReferenceMu = 0.01;

enum class GainShape { linear, geometric };

enum class GainMode {
  // eta_t = gain_t / mean_i(L_i - min L): the gain is dimensionless and the
  // damping adapts to the current spread of loss rates.
  adaptive,
  // eta_t = gain_t, in inverse loss units.
  absolute,
};

struct FeedbackSchedule {
  std::size_t iterations = 1;
  std::uint64_t detection_budget = 1;
  std::vector<double> mean_photon_number;  // one entry per iteration, in (0, 1)
  std::vector<double> loss_gain;           // one entry per iteration, >= 0
  double dark_count_rate = 0.0;
  std::vector<double> fluctuation_target;  // empty, or one entry per iteration
  GainMode gain_mode = GainMode::adaptive;

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  double mu_at(std::size_t t) const { return mean_photon_number.at(t); }
  double gain_at(std::size_t t) const { return loss_gain.at(t); }
  // Expected photons for loop t over num_bins bins. A fluctuation target f
  // asks for 1/f^2 photons per bin.
  double budget_at(std::size_t t, std::size_t num_bins) const;
  // Expected dark counts per bin in loop t.
  double dark_mean_at(std::size_t t) const;
};

// Scalar description of a schedule, as read from a schedule file.
struct ScheduleConfig {
  std::size_t iterations = 1000;
  std::uint64_t budget = 100000;
  double eta_start = 0.0;
  double eta_end = 8.0;
  GainShape eta_shape = GainShape::linear;
  GainMode gain_mode = GainMode::adaptive;
  double dark_rate = 0.0;
  double mu = 0.001;
  std::optional<double> mu_end;
  std::optional<double> fluctuation;

  friend bool operator==(const ScheduleConfig&, const ScheduleConfig&) = default;
};

FeedbackSchedule build_schedule(const ScheduleConfig& config);

// schedule1 ... schedule4. Higher numbers run more loops with lower mean
// photon number and larger budgets, so less shot noise per loop.
bool is_preset_name(std::string_view name);
ScheduleConfig preset_config(std::string_view name);
FeedbackSchedule preset_schedule(std::string_view name);

ScheduleConfig read_schedule_config(std::istream& in);
void write_schedule_config(std::ostream& out, const ScheduleConfig& config);

// A preset name or a path to a schedule file.
ScheduleConfig resolve_schedule_config(const std::string& preset_or_path);

}  // namespace ecomp
