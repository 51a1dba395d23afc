#include "ecomp/schedule.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ecomp/errors.hpp"
#include "ecomp/program_io.hpp"
#include "text_util.hpp"

namespace ecomp {

void FeedbackSchedule::validate() const {
  if (iterations < 1) throw std::invalid_argument("schedule needs at least one iteration");
  if (detection_budget < 1) throw std::invalid_argument("detection budget must be >= 1");
  if (mean_photon_number.size() != iterations || loss_gain.size() != iterations) {
    throw std::invalid_argument("mu and gain trajectories need one entry per iteration");
  }
  if (!fluctuation_target.empty() && fluctuation_target.size() != iterations) {
    throw std::invalid_argument("fluctuation target needs one entry per iteration");
  }
  for (double mu : mean_photon_number) {
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("mean photon number must be in (0, 1)");
  }
  for (double g : loss_gain) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("loss gain must be finite and >= 0");
  }
  for (double f : fluctuation_target) {
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("fluctuation target must be positive");
  }
  if (!(dark_count_rate >= 0.0) || !std::isfinite(dark_count_rate)) {
    throw std::invalid_argument("dark count rate must be finite and >= 0");
  }
}

double FeedbackSchedule::budget_at(std::size_t t, std::size_t num_bins) const {
  if (!fluctuation_target.empty()) {
    const double f = fluctuation_target.at(t);
    return static_cast<double>(num_bins) / (f * f);
  }
  return static_cast<double>(detection_budget);
}

double FeedbackSchedule::dark_mean_at(std::size_t t) const {
  if (dark_count_rate == 0.0) return 0.0;
  return dark_count_rate * kReferenceMu / mu_at(t);
}

FeedbackSchedule build_schedule(const ScheduleConfig& config) {
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.eta_shape == GainShape::geometric && !(config.eta_start > 0.0)) {
    throw std::invalid_argument("geometric gain ramp needs eta_start > 0");
  }
  if (config.eta_start < 0.0 || config.eta_end < 0.0) {
    throw std::invalid_argument("gain ramp endpoints must be >= 0");
  }

  FeedbackSchedule schedule;
  schedule.iterations = config.iterations;
  schedule.detection_budget = config.budget;
  schedule.dark_count_rate = config.dark_rate;
  schedule.gain_mode = config.gain_mode;

  const std::size_t n = config.iterations;
  const double mu_end = config.mu_end.value_or(config.mu);
  schedule.loss_gain.resize(n);
  schedule.mean_photon_number.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double frac = n == 1 ? 1.0 : static_cast<double>(t) / static_cast<double>(n - 1);
    schedule.loss_gain[t] =
        config.eta_shape == GainShape::linear
            ? config.eta_start + (config.eta_end - config.eta_start) * frac
            : config.eta_start * std::pow(config.eta_end / config.eta_start, frac);
    schedule.mean_photon_number[t] = config.mu + (mu_end - config.mu) * frac;
  }
  if (config.fluctuation) schedule.fluctuation_target.assign(n, *config.fluctuation);

  schedule.validate();
  return schedule;
}

namespace {

struct Preset {
  std::string_view name;
  ScheduleConfig config;
};

ScheduleConfig make_preset(std::size_t iterations, std::uint64_t budget, double eta_end,
                           double mu) {
  ScheduleConfig c;
  c.iterations = iterations;
  c.budget = budget;
  c.eta_start = 0.0;
  c.eta_end = eta_end;
  c.mu = mu;
  return c;
}

const std::array<Preset, 4>& presets() {
  static const std::array<Preset, 4> table{{
      {"schedule1", make_preset(100, 10'000, 2.0, 0.0133)},
      {"schedule2", make_preset(300, 100'000, 4.0, 0.005)},
      {"schedule3", make_preset(600, 300'000, 6.0, 0.001)},
      {"schedule4", make_preset(1000, 1'000'000, 8.0, 0.0003)},
  }};
  return table;
}

std::string_view shape_name(GainShape s) {
  return s == GainShape::linear ? "linear" : "geometric";
}

std::string_view mode_name(GainMode m) {
  return m == GainMode::adaptive ? "adaptive" : "absolute";
}

}  // namespace

bool is_preset_name(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return true;
  }
  return false;
}

ScheduleConfig preset_config(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p.config;
  }
  throw std::invalid_argument("unknown schedule preset '" + std::string(name) + "'");
}

FeedbackSchedule preset_schedule(std::string_view name) {
  return build_schedule(preset_config(name));
}

ScheduleConfig read_schedule_config(std::istream& in) {
  ScheduleConfig config = preset_config("schedule4");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no);

    if (key == "preset") {
      if (!is_preset_name(value)) throw ParseError("unknown preset '" + value + "'", line_no);
      config = preset_config(value);
    } else if (key == "iterations") {
      config.iterations = detail::parse_size(value, line_no);
    } else if (key == "budget") {
      // accept 1e6 style as well as plain integers
      const double b = detail::parse_double(value, line_no);
      if (!(b >= 1.0) || b != std::floor(b)) throw ParseError("budget must be a positive integer", line_no);
      config.budget = static_cast<std::uint64_t>(b);
    } else if (key == "eta_start") {
      config.eta_start = detail::parse_double(value, line_no);
    } else if (key == "eta_end") {
      config.eta_end = detail::parse_double(value, line_no);
    } else if (key == "eta_shape") {
      if (value == "linear") {
        config.eta_shape = GainShape::linear;
      } else if (value == "geometric") {
        config.eta_shape = GainShape::geometric;
      } else {
        throw ParseError("eta_shape must be linear or geometric", line_no);
      }
    } else if (key == "gain_mode") {
      if (value == "adaptive") {
        config.gain_mode = GainMode::adaptive;
      } else if (value == "absolute") {
        config.gain_mode = GainMode::absolute;
      } else {
        throw ParseError("gain_mode must be adaptive or absolute", line_no);
      }
    } else if (key == "dark_rate") {
      config.dark_rate = detail::parse_double(value, line_no);
    } else if (key == "mu") {
      config.mu = detail::parse_double(value, line_no);
    } else if (key == "mu_end") {
      config.mu_end = detail::parse_double(value, line_no);
    } else if (key == "fluctuation") {
      config.fluctuation = detail::parse_double(value, line_no);
    } else {
      throw ParseError("unknown schedule key '" + key + "'", line_no);
    }
  }
  try {
    build_schedule(config);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid schedule: ") + e.what());
  }
  return config;
}

void write_schedule_config(std::ostream& out, const ScheduleConfig& c) {
  out << "iterations = " << c.iterations << '\n'
      << "budget = " << c.budget << '\n'
      << "eta_start = " << format_double(c.eta_start) << '\n'
      << "eta_end = " << format_double(c.eta_end) << '\n'
      << "eta_shape = " << shape_name(c.eta_shape) << '\n'
      << "gain_mode = " << mode_name(c.gain_mode) << '\n'
      << "dark_rate = " << format_double(c.dark_rate) << '\n'
      << "mu = " << format_double(c.mu) << '\n';
  if (c.mu_end) out << "mu_end = " << format_double(*c.mu_end) << '\n';
  if (c.fluctuation) out << "fluctuation = " << format_double(*c.fluctuation) << '\n';
}

ScheduleConfig resolve_schedule_config(const std::string& preset_or_path) {
  if (is_preset_name(preset_or_path)) return preset_config(preset_or_path);
  std::ifstream in(preset_or_path);
  if (!in) throw ParseError("'" + preset_or_path + "' is neither a preset nor a readable file");
  return read_schedule_config(in);
}

}  // namespace ecomp
