#pragma once

// Command implementations behind the `matraj` executable. Kept in the library
// so they can be driven in-process; tools/matraj.cpp only parses flags.
//
// Files written (UTF-8, LF, doubles at 17 significant digits):
//   trajectory_<scheme>.csv        k,time_s,position_m,gain,rate_bpshz
//   gain_landscape.csv             grid_index,position_m,gain
//   sweep_<variable>.csv           sweep_name,sweep_value,scheme,mean_rate_bpshz,std_rate_bpshz,n_realizations,seed
//   sweep_<variable>_realizations.csv
//                                  sweep_name,sweep_value,realization,scheme,rate_bpshz
//   summary.json                   resolved config, channel and per-scheme rates

#include <concepts>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "matraj/montecarlo.hpp"

namespace matraj::cli {

inline constexpr const char* kOutputDirEnv = "MATRAJ_OUTPUT_DIR";

inline constexpr const char* kTrajectoryHeader = "k,time_s,position_m,gain,rate_bpshz";
inline constexpr const char* kLandscapeHeader = "grid_index,position_m,gain";
inline constexpr const char* kSweepHeader =
    "sweep_name,sweep_value,scheme,mean_rate_bpshz,std_rate_bpshz,n_realizations,seed";
inline constexpr const char* kSweepRealizationHeader =
    "sweep_name,sweep_value,realization,scheme,rate_bpshz";

struct RunConfig {
  ExperimentConfig experiment;
  /// Unset: the start is a random grid center drawn from the seed.
  std::optional<double> start_pos_m;
  std::vector<Scheme> schemes{kSweepSchemes.begin(), kSweepSchemes.end()};
  SweepVariable sweep_variable = SweepVariable::duration_T;
  std::vector<double> sweep_values;
  int num_realizations = 1000;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  unsigned threads = 0;

  void validate() const {
    experiment.channel.validate();
    SystemParams p = experiment.system;
    if (start_pos_m) p.start_pos_m = *start_pos_m;
    else p.start_pos_m = p.region_length_m / 2;  // sampled later; any in-range value
    p.validate();
    if (p.num_grids < 2) throw std::invalid_argument("SystemParams: num_grids must be >= 2");
    if (schemes.empty()) throw std::invalid_argument("RunConfig: at least one scheme required");
    if (num_realizations < 1)
      throw std::invalid_argument("RunConfig: num_realizations must be >= 1");
  }
};

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::filesystem::path prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::invalid_argument("RunConfig: output directory not writable: " + dir.string());
  return dir;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const char* header)
      : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << header << '\n';
  }

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }

  ~CsvWriter() { out_.flush(); }

 private:
  static std::string cell(double v) { return format_double(v); }
  template <std::integral T>
  static std::string cell(T v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(std::string_view v) { return std::string(v); }

  std::ofstream out_;
  std::filesystem::path path_;
};

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const std::vector<TraceRow>& rows) {
  CsvWriter w(path, kTrajectoryHeader);
  for (const auto& r : rows) w.row(r.k, r.time_s, r.position_m, r.gain, r.rate_bpshz);
}

inline void write_landscape_csv(const std::filesystem::path& path,
                                const std::vector<LandscapeRow>& rows) {
  CsvWriter w(path, kLandscapeHeader);
  for (const auto& r : rows) w.row(r.grid_index, r.position_m, r.gain);
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& res) {
  CsvWriter w(path, kSweepHeader);
  for (std::size_t v = 0; v < res.sweep_values.size(); ++v) {
    if (!res.errors[v].empty()) continue;
    for (std::size_t s = 0; s < res.schemes.size(); ++s)
      w.row(res.sweep_name, res.sweep_values[v], scheme_name(res.schemes[s]),
            res.mean_rate[s][v], res.std_rate[s][v], res.num_realizations, res.seed);
  }
}

inline void write_sweep_realizations_csv(const std::filesystem::path& path,
                                         const SweepResult& res) {
  CsvWriter w(path, kSweepRealizationHeader);
  for (std::size_t v = 0; v < res.sweep_values.size(); ++v) {
    if (!res.errors[v].empty()) continue;
    for (int r = 0; r < res.num_realizations; ++r)
      for (std::size_t s = 0; s < res.schemes.size(); ++s)
        w.row(res.sweep_name, res.sweep_values[v], r, scheme_name(res.schemes[s]),
              res.rates[v][s][static_cast<std::size_t>(r)]);
  }
}

inline nlohmann::json config_json(const RunConfig& c, const SystemParams& resolved) {
  const auto& ch = c.experiment.channel;
  nlohmann::json schemes = nlohmann::json::array();
  for (Scheme s : c.schemes) schemes.push_back(std::string(scheme_name(s)));
  return {
      {"wavelength_m", resolved.wavelength_m},
      {"region_length_m", resolved.region_length_m},
      {"v_max_mps", resolved.v_max_mps},
      {"slot_s", resolved.slot_s},
      {"num_slots", resolved.num_slots},
      {"duration_s", resolved.duration_s()},
      {"num_grids", resolved.num_grids},
      {"tx_power_w", resolved.tx_power_w},
      {"noise_power_w", resolved.noise_power_w},
      {"start_pos_m", resolved.start_pos_m},
      {"num_paths", ch.num_paths},
      {"link_distance_m", ch.link_distance_m},
      {"pathloss_exponent", ch.pathloss_exponent},
      {"reference_gain", ch.reference_gain},
      {"coeff_model", ch.coeff_model == CoeffModel::complex_gaussian ? "complex_gaussian"
                                                                      : "uniform_phase"},
      {"schemes", schemes},
      {"seed", c.seed},
  };
}

/// Start position and channel of the single realization used by solve/trace.
inline Realization resolve_realization(const RunConfig& c) {
  Realization real = draw_realization(c.experiment, c.seed, 0);
  if (c.start_pos_m) real.params.start_pos_m = *c.start_pos_m;
  real.params.validate();
  return real;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

/// One realization, every selected scheme: trajectory CSVs plus summary.json.
inline int cmd_solve(const RunConfig& c) {
  c.validate();
  const auto dir = prepare_output_dir(c.output_dir);
  const Realization real = resolve_realization(c);
  const SystemParams& p = real.params;
  const ChannelRealization& ch = real.channel;

  nlohmann::json rates = nlohmann::json::object();
  for (Scheme s : c.schemes) {
    if (s == Scheme::closed_form && ch.num_paths() != 2)
      throw std::invalid_argument("RunConfig: scheme closed_form requires num_paths = 2");
    const Trajectory t = solve_scheme(s, ch, p);
    write_trajectory_csv(dir / ("trajectory_" + std::string(scheme_name(s)) + ".csv"),
                         trace_rows(t, ch, p));
    rates[std::string(scheme_name(s))] = {
        {"average_rate_bpshz", average_rate(t, ch, p)},
        {"final_position_m", t.positions_m().back()},
    };
  }

  const Grid g = discretize(p);
  nlohmann::json channel = {{"aod_rad", ch.aod_rad()}};
  std::vector<double> re, im;
  for (const auto& a : ch.coeff()) {
    re.push_back(a.real());
    im.push_back(a.imag());
  }
  channel["coeff_re"] = re;
  channel["coeff_im"] = im;

  nlohmann::json summary = {
      {"command", "solve"},
      {"config", config_json(c, p)},
      {"channel", channel},
      {"start_index", g.start_index()},
      {"d_max", max_hop_distance(p)},
      {"schemes", rates},
  };

  if (ch.num_paths() == 2) {
    const double cf = average_rate(solve_twopath(ch, p), ch, p);
    const double dp = average_rate(solve_graph(ch, p).trajectory, ch, p);
    const CoherentSet cs = coherent_positions(ch, p);
    summary["two_path"] = {
        {"closed_form_rate_bpshz", cf},
        {"dp_rate_bpshz", dp},
        {"relative_gap", std::abs(dp - cf) / std::max(std::abs(cf), 1e-300)},
        {"coherent_positions_m", cs.positions_m},
        {"destination_m", twopath_destination(ch, p)},
    };
  }
  write_json(dir / "summary.json", summary);
  return 0;
}

/// Per-slot traces of the selected schemes plus the gain landscape.
inline int cmd_trace(const RunConfig& c) {
  c.validate();
  const auto dir = prepare_output_dir(c.output_dir);
  const Realization real = resolve_realization(c);
  for (Scheme s : c.schemes) {
    if (s == Scheme::closed_form && real.channel.num_paths() != 2)
      throw std::invalid_argument("RunConfig: scheme closed_form requires num_paths = 2");
    const Trajectory t = solve_scheme(s, real.channel, real.params);
    write_trajectory_csv(dir / ("trajectory_" + std::string(scheme_name(s)) + ".csv"),
                         trace_rows(t, real.channel, real.params));
  }
  write_landscape_csv(dir / "gain_landscape.csv", landscape_rows(real.channel, real.params));
  return 0;
}

/// Monte-Carlo sweep. Values whose parameters are invalid are reported on
/// stderr, left out of the CSVs, and make the exit status nonzero.
inline int cmd_sweep(const RunConfig& c, std::ostream& err = std::cerr) {
  c.validate();
  if (c.sweep_values.empty()) throw std::invalid_argument("RunConfig: sweep values required");
  const auto dir = prepare_output_dir(c.output_dir);
  const SweepResult res = run_sweep(c.sweep_variable, c.sweep_values, c.experiment,
                                    c.num_realizations, c.seed, c.threads);
  const std::string name(sweep_name(c.sweep_variable));
  write_sweep_csv(dir / ("sweep_" + name + ".csv"), res);
  write_sweep_realizations_csv(dir / ("sweep_" + name + "_realizations.csv"), res);
  for (std::size_t v = 0; v < res.errors.size(); ++v)
    if (!res.errors[v].empty())
      err << "error: " << name << " = " << format_double(res.sweep_values[v]) << ": "
          << res.errors[v] << '\n';
  return res.ok() ? 0 : 1;
}

}  // namespace matraj::cli
