#pragma once

// Random channel generation, the average-rate objective, per-scheme solving
// and the Monte-Carlo sweeps behind the rate-vs-T / L_t / v_max experiments.
//
// Every realization r draws from its own generator seeded by (seed, r), so a
// realization is reproducible in isolation and all schemes and sweep values
// at index r share the same start position and channel (common random
// numbers). Work items may run on several threads; results are written to
// indexed slots and reduced in index order.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "matraj/baselines.hpp"
#include "matraj/core_model.hpp"
#include "matraj/graph_solver.hpp"
#include "matraj/twopath_solver.hpp"

namespace matraj {

enum class CoeffModel { complex_gaussian, uniform_phase };

struct ChannelModelConfig {
  int num_paths = 4;
  double link_distance_m = 100.0;
  double pathloss_exponent = 2.8;
  /// Power gain at 1 m; defaults to free space at lambda = 0.06 m.
  double reference_gain = std::pow(0.06 / (4.0 * std::numbers::pi), 2);
  CoeffModel coeff_model = CoeffModel::complex_gaussian;

  double total_gain() const {
    return reference_gain * std::pow(link_distance_m, -pathloss_exponent);
  }

  void validate() const {
    if (num_paths < 1) throw std::invalid_argument("ChannelModelConfig: num_paths must be >= 1");
    if (!(link_distance_m > 0.0))
      throw std::invalid_argument("ChannelModelConfig: link_distance_m must be > 0");
    if (!(pathloss_exponent >= 0.0))
      throw std::invalid_argument("ChannelModelConfig: pathloss_exponent must be >= 0");
    if (!(reference_gain > 0.0))
      throw std::invalid_argument("ChannelModelConfig: reference_gain must be > 0");
  }
};

using Rng = std::mt19937_64;

inline Rng realization_rng(std::uint64_t seed, std::uint64_t realization) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(realization),
                    static_cast<std::uint32_t>(realization >> 32)};
  return Rng(seq);
}

/// AoDs i.i.d. uniform on [0, pi]; the total gain g0 = beta0 * d^-alpha is
/// split equally over the paths. Draws are made path by path, so path l uses
/// the same random numbers whatever L_t is (nested across path counts).
inline ChannelRealization sample_channel(Rng& rng, const ChannelModelConfig& cfg) {
  cfg.validate();
  const auto L = static_cast<std::size_t>(cfg.num_paths);
  const double per_path = cfg.total_gain() / static_cast<double>(L);
  std::uniform_real_distribution<double> aod(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> theta(L);
  std::vector<Complex> a(L);
  for (std::size_t l = 0; l < L; ++l) {
    theta[l] = aod(rng);
    if (cfg.coeff_model == CoeffModel::complex_gaussian) {
      const double re = normal(rng);
      const double im = normal(rng);
      a[l] = std::sqrt(per_path / 2.0) * Complex(re, im);
    } else {
      a[l] = std::polar(std::sqrt(per_path), phase(rng));
    }
  }
  return ChannelRealization(std::move(theta), std::move(a));
}

/// Uniformly random grid index in [1, num_grids].
inline int sample_start_index(Rng& rng, int num_grids) {
  return std::uniform_int_distribution<int>(1, num_grids)(rng);
}

/// (1/K) * sum_{k=1..K} R(x[k]); x[0] is not part of the objective.
inline double average_rate(const Trajectory& t, const ChannelRealization& ch,
                           const SystemParams& p) {
  SystemParams q = p;
  q.start_pos_m = t.positions_m().front();
  t.check_feasible(q);
  double sum = 0.0;
  for (int k = 1; k <= p.num_slots; ++k) sum += achievable_rate(t[k], ch, p);
  return sum / p.num_slots;
}

enum class Scheme { proposed, myopic, farsighted, fpa, closed_form };

inline constexpr std::array<Scheme, 4> kSweepSchemes{Scheme::proposed, Scheme::myopic,
                                                     Scheme::farsighted, Scheme::fpa};

inline std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::myopic: return "myopic";
    case Scheme::farsighted: return "farsighted";
    case Scheme::fpa: return "fpa";
    case Scheme::closed_form: return "closed_form";
  }
  return "unknown";
}

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::proposed, Scheme::myopic, Scheme::farsighted, Scheme::fpa,
                   Scheme::closed_form})
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

/// Trajectory of one scheme. Grid-based schemes start from the grid center
/// nearest x0; closed_form (two paths only) starts from x0 itself.
inline Trajectory solve_scheme(Scheme s, const ChannelRealization& ch, const SystemParams& p) {
  p.validate();
  if (s == Scheme::closed_form) return solve_twopath(ch, p);
  const Grid g = discretize(p);
  switch (s) {
    case Scheme::proposed: return solve_graph(ch, p).trajectory;
    case Scheme::myopic: return myopic_trajectory(g, ch, p);
    case Scheme::farsighted: return farsighted_trajectory(g, ch, p);
    case Scheme::fpa: return fpa_trajectory(g, p);
    default: break;
  }
  throw std::invalid_argument("solve_scheme: unknown scheme");
}

struct TraceRow {
  int k;
  double time_s;
  double position_m;
  double gain;
  double rate_bpshz;
};

struct LandscapeRow {
  int grid_index;
  double position_m;
  double gain;
};

struct Trace {
  Scheme scheme;
  std::vector<TraceRow> rows;  // K + 1 rows
  std::vector<LandscapeRow> landscape;
};

inline std::vector<TraceRow> trace_rows(const Trajectory& t, const ChannelRealization& ch,
                                        const SystemParams& p) {
  std::vector<TraceRow> rows;
  rows.reserve(t.positions_m().size());
  for (int k = 0; k <= t.num_slots(); ++k) {
    const double x = t[k];
    const double gain = power_gain(x, ch, p.wavelength_m);
    rows.push_back({k, k * p.slot_s, x, gain, rate_from_gain(gain, p)});
  }
  return rows;
}

inline std::vector<LandscapeRow> landscape_rows(const ChannelRealization& ch,
                                                const SystemParams& p) {
  const Grid g = discretize(p);
  const std::vector<double> gain = gain_landscape(g, ch, p);
  std::vector<LandscapeRow> rows;
  rows.reserve(gain.size());
  for (int n = 1; n <= g.size(); ++n) rows.push_back({n, g.center(n), gain[n - 1]});
  return rows;
}

inline Trace trajectory_trace(Scheme s, const ChannelRealization& ch, const SystemParams& p) {
  return Trace{s, trace_rows(solve_scheme(s, ch, p), ch, p), landscape_rows(ch, p)};
}

struct ExperimentConfig {
  SystemParams system;
  ChannelModelConfig channel;
};

enum class SweepVariable { duration_T, num_paths, v_max };

inline std::string_view sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::duration_T: return "duration_T";
    case SweepVariable::num_paths: return "num_paths";
    case SweepVariable::v_max: return "v_max";
  }
  return "unknown";
}

inline std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
  for (SweepVariable v :
       {SweepVariable::duration_T, SweepVariable::num_paths, SweepVariable::v_max})
    if (sweep_name(v) == name) return v;
  return std::nullopt;
}

/// Base config with the swept quantity overridden. T is converted to
/// K = round(T / tau) slots.
inline ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepVariable var,
                                          double value) {
  ExperimentConfig c = base;
  switch (var) {
    case SweepVariable::duration_T:
      c.system.num_slots = static_cast<int>(std::lround(value / c.system.slot_s));
      break;
    case SweepVariable::num_paths:
      c.channel.num_paths = static_cast<int>(std::lround(value));
      break;
    case SweepVariable::v_max:
      c.system.v_max_mps = value;
      break;
  }
  return c;
}

struct Realization {
  SystemParams params;  // start_pos_m set to the sampled grid center
  ChannelRealization channel;
};

/// Start position and channel for realization r; depends only on (seed, r)
/// and the config, never on which thread runs it.
inline Realization draw_realization(const ExperimentConfig& c, std::uint64_t seed,
                                    std::uint64_t r) {
  Rng rng = realization_rng(seed, r);
  SystemParams p = c.system;
  const int s = sample_start_index(rng, p.num_grids);
  p.start_pos_m = s * p.region_length_m / p.num_grids;
  return Realization{p, sample_channel(rng, c.channel)};
}

/// Average rates of the four compared schemes, in kSweepSchemes order.
inline std::array<double, 4> evaluate_schemes(const ChannelRealization& ch,
                                              const SystemParams& p) {
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kSweepSchemes.size(); ++i)
    out[i] = average_rate(solve_scheme(kSweepSchemes[i], ch, p), ch, p);
  return out;
}

struct SweepResult {
  std::string sweep_name;
  std::vector<double> sweep_values;
  std::vector<Scheme> schemes{kSweepSchemes.begin(), kSweepSchemes.end()};
  /// [scheme][value]
  std::vector<std::vector<double>> mean_rate;
  std::vector<std::vector<double>> std_rate;
  /// [value][scheme][realization]
  std::vector<std::vector<std::vector<double>>> rates;
  /// Per value: empty when computed, otherwise why the value was skipped.
  std::vector<std::string> errors;
  int num_realizations = 0;
  std::uint64_t seed = 0;

  bool ok() const {
    return std::all_of(errors.begin(), errors.end(), [](const auto& e) { return e.empty(); });
  }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

inline SweepResult run_sweep(SweepVariable var, const std::vector<double>& values,
                             const ExperimentConfig& base, int num_realizations,
                             std::uint64_t seed, unsigned threads = 0) {
  if (values.empty()) throw std::invalid_argument("run_sweep: values must be non-empty");
  if (num_realizations < 1)
    throw std::invalid_argument("run_sweep: num_realizations must be >= 1");

  SweepResult res;
  res.sweep_name = std::string(sweep_name(var));
  res.sweep_values = values;
  res.num_realizations = num_realizations;
  res.seed = seed;
  const std::size_t nv = values.size(), ns = res.schemes.size();
  const auto nr = static_cast<std::size_t>(num_realizations);
  res.errors.assign(nv, {});
  res.rates.assign(nv, std::vector<std::vector<double>>(ns, std::vector<double>(nr, 0.0)));

  std::vector<ExperimentConfig> configs;
  for (std::size_t v = 0; v < nv; ++v) {
    configs.push_back(apply_sweep_value(base, var, values[v]));
    try {
      SystemParams probe = configs.back().system;
      probe.start_pos_m = probe.region_length_m / 2;  // resampled per realization
      probe.validate();
      configs.back().channel.validate();
      if (configs.back().system.num_grids < 2)
        throw std::invalid_argument("SystemParams: num_grids must be >= 2");
    } catch (const std::invalid_argument& e) {
      res.errors[v] = e.what();
    }
  }

  parallel_for(nr, threads, [&](std::size_t r) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (!res.errors[v].empty()) continue;
      const Realization real = draw_realization(configs[v], seed, r);
      const auto rates = evaluate_schemes(real.channel, real.params);
      for (std::size_t s = 0; s < ns; ++s) res.rates[v][s][r] = rates[s];
    }
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  res.mean_rate.assign(ns, std::vector<double>(nv, nan));
  res.std_rate.assign(ns, std::vector<double>(nv, nan));
  for (std::size_t v = 0; v < nv; ++v) {
    if (!res.errors[v].empty()) continue;
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& xs = res.rates[v][s];
      double sum = 0.0;
      for (double x : xs) sum += x;
      const double mean = sum / static_cast<double>(nr);
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      res.mean_rate[s][v] = mean;
      res.std_rate[s][v] = nr > 1 ? std::sqrt(ss / static_cast<double>(nr - 1)) : 0.0;
    }
  }
  return res;
}

}  // namespace matraj
