// matraj: movable-antenna trajectory solver and Monte-Carlo sweeps.
//
//   matraj solve  [options]                      one realization, all schemes
//   matraj trace  [options]                      per-slot traces + gain landscape
//   matraj sweep  --variable V --values ... --seed S [options]

#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matraj/cli.hpp"

namespace {

struct Flags {
  double wavelength = 0.06;
  double region = 0.36;
  double v_max = 0.12;
  double slot = 0.01;
  double duration = 2.0;
  std::optional<int> slots;
  int grids = 600;
  double power = 40.0;
  double noise = 1e-11;
  std::optional<double> start;
  int paths = 4;
  double distance = 100.0;
  double pathloss = 2.8;
  std::optional<double> ref_gain;
  std::string coeff_model = "complex_gaussian";
  std::vector<std::string> schemes{"proposed", "myopic", "farsighted", "fpa"};
  int realizations = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 0;
  std::string variable;
  std::vector<double> values;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--wavelength", f.wavelength, "Carrier wavelength [m]")->capture_default_str();
  cmd->add_option("--region", f.region, "Movement region length D [m]")->capture_default_str();
  cmd->add_option("--vmax", f.v_max, "Maximum antenna speed [m/s]")->capture_default_str();
  cmd->add_option("--slot", f.slot, "Slot length tau [s]")->capture_default_str();
  cmd->add_option("--duration", f.duration, "Horizon T [s]; K = round(T / tau)")
      ->capture_default_str();
  cmd->add_option("--slots", f.slots, "Number of slots K (overrides --duration)");
  cmd->add_option("--grids", f.grids, "Number of grid points N")->capture_default_str();
  cmd->add_option("--power", f.power, "Transmit power [W]")->capture_default_str();
  cmd->add_option("--noise", f.noise, "Noise power [W]")->capture_default_str();
  cmd->add_option("--start", f.start, "Start position [m] (default: random grid center)");
  cmd->add_option("--paths", f.paths, "Number of channel paths L_t")->capture_default_str();
  cmd->add_option("--distance", f.distance, "Link distance [m]")->capture_default_str();
  cmd->add_option("--pathloss", f.pathloss, "Path-loss exponent")->capture_default_str();
  cmd->add_option("--ref-gain", f.ref_gain, "Power gain at 1 m (default (lambda/4pi)^2)");
  cmd->add_option("--coeff-model", f.coeff_model, "Path coefficient model")
      ->check(CLI::IsMember({"complex_gaussian", "uniform_phase"}))
      ->capture_default_str();
  cmd->add_option("--schemes", f.schemes,
                  "Schemes: proposed, myopic, farsighted, fpa, closed_form")
      ->capture_default_str();
  cmd->add_option("--out", f.out, "Output directory (default $MATRAJ_OUTPUT_DIR or .)");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

matraj::cli::RunConfig to_config(const Flags& f) {
  matraj::cli::RunConfig c;
  auto& sys = c.experiment.system;
  sys.wavelength_m = f.wavelength;
  sys.region_length_m = f.region;
  sys.v_max_mps = f.v_max;
  sys.slot_s = f.slot;
  sys.num_slots = f.slots ? *f.slots : static_cast<int>(std::lround(f.duration / f.slot));
  sys.num_grids = f.grids;
  sys.tx_power_w = f.power;
  sys.noise_power_w = f.noise;
  c.start_pos_m = f.start;

  auto& ch = c.experiment.channel;
  ch.num_paths = f.paths;
  ch.link_distance_m = f.distance;
  ch.pathloss_exponent = f.pathloss;
  ch.reference_gain =
      f.ref_gain ? *f.ref_gain : std::pow(f.wavelength / (4.0 * std::numbers::pi), 2);
  ch.coeff_model = f.coeff_model == "uniform_phase" ? matraj::CoeffModel::uniform_phase
                                                    : matraj::CoeffModel::complex_gaussian;

  c.schemes.clear();
  for (const auto& name : f.schemes) {
    auto s = matraj::parse_scheme(name);
    if (!s) throw std::invalid_argument("RunConfig: unknown scheme '" + name + "'");
    c.schemes.push_back(*s);
  }
  c.num_realizations = f.realizations;
  if (f.seed) c.seed = *f.seed;
  c.threads = f.threads;

  if (!f.out.empty()) c.output_dir = f.out;
  else if (const char* env = std::getenv(matraj::cli::kOutputDirEnv); env && *env)
    c.output_dir = env;

  if (!f.variable.empty()) {
    auto v = matraj::parse_sweep_variable(f.variable);
    if (!v) throw std::invalid_argument("RunConfig: unknown sweep variable '" + f.variable + "'");
    c.sweep_variable = *v;
  }
  c.sweep_values = f.values;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna trajectory optimization and rate simulation"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "Solve one channel realization with every scheme");
  add_common(solve, f);
  solve->add_option("--seed", f.seed, "Seed for the realization (default 1)");

  auto* trace = app.add_subcommand("trace", "Per-slot trajectories plus the gain landscape");
  add_common(trace, f);
  trace->add_option("--seed", f.seed, "Seed for the realization (default 1)");

  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over T, L_t or v_max");
  add_common(sweep, f);
  sweep->add_option("--seed", f.seed, "Seed for the realizations")->required();
  sweep->add_option("--variable", f.variable, "Swept quantity")
      ->check(CLI::IsMember({"duration_T", "num_paths", "v_max"}))
      ->required();
  sweep->add_option("--values", f.values, "Sweep values")->required()->expected(1, -1);
  sweep->add_option("--realizations", f.realizations, "Channel realizations per value")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = to_config(f);
    if (solve->parsed()) return matraj::cli::cmd_solve(config);
    if (trace->parsed()) return matraj::cli::cmd_trace(config);
    return matraj::cli::cmd_sweep(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
