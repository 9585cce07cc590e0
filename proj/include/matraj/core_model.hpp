#pragma once

// Physical types and the channel/rate math shared by every solver.
//
// The channel follows the far-field field-response model: a single movable
// antenna at position x on a line segment [0, D] sees L_t paths, path l with
// angle of departure theta_l and complex coefficient a_l. The overall channel
// is h(x) = sum_l conj(a_l) * exp(j * 2*pi/lambda * x * cos(theta_l)).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matraj {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Slack allowed on the per-slot velocity constraint (meters).
inline constexpr double kFeasibilityEps = 1e-12;

/// Slack used when flooring ratios that are integers in exact arithmetic
/// (e.g. v_max*tau / delta_s = 2 at the default parameters).
inline constexpr double kRatioEps = 1e-9;

struct SystemParams {
  double wavelength_m = 0.06;
  double region_length_m = 0.36;
  double v_max_mps = 0.12;
  double slot_s = 0.01;
  int num_slots = 200;
  int num_grids = 600;
  double tx_power_w = 40.0;
  double noise_power_w = 1e-11;
  double start_pos_m = 0.18;

  double duration_s() const { return slot_s * num_slots; }
  double max_step_m() const { return v_max_mps * slot_s; }
  double grid_spacing_m() const { return region_length_m / num_grids; }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("SystemParams: ") + what);
    };
    require(wavelength_m > 0.0, "wavelength_m must be > 0");
    require(region_length_m > 0.0, "region_length_m must be > 0");
    require(v_max_mps > 0.0, "v_max_mps must be > 0");
    require(slot_s > 0.0, "slot_s must be > 0");
    require(num_slots > 0, "num_slots must be > 0");
    require(num_grids > 0, "num_grids must be > 0");
    require(tx_power_w > 0.0, "tx_power_w must be > 0");
    require(noise_power_w > 0.0, "noise_power_w must be > 0");
    require(start_pos_m >= 0.0 && start_pos_m <= region_length_m,
            "start_pos_m must lie in [0, region_length_m]");
    require(max_step_m() / grid_spacing_m() + kRatioEps >= 1.0,
            "v_max_mps * slot_s must be >= region_length_m / num_grids (d_max >= 1)");
  }
};

/// Multipath channel seen by the antenna. Angles are kept in radians for the
/// public view; their cosines are cached for the gain evaluations.
class ChannelRealization {
 public:
  ChannelRealization(std::vector<double> aod_rad, std::vector<Complex> coeff)
      : aod_rad_(std::move(aod_rad)), coeff_(std::move(coeff)) {
    if (aod_rad_.empty())
      throw std::invalid_argument("ChannelRealization: at least one path required");
    if (aod_rad_.size() != coeff_.size())
      throw std::invalid_argument("ChannelRealization: aod_rad and coeff lengths differ");
    cos_aod_.reserve(aod_rad_.size());
    for (double theta : aod_rad_) {
      if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw std::invalid_argument("ChannelRealization: aod_rad entries must lie in [0, pi]");
      cos_aod_.push_back(std::cos(theta));
    }
  }

  std::size_t num_paths() const { return aod_rad_.size(); }
  const std::vector<double>& aod_rad() const& { return aod_rad_; }
  std::vector<double> aod_rad() && { return std::move(aod_rad_); }
  const std::vector<double>& cos_aod() const& { return cos_aod_; }
  std::vector<double> cos_aod() && { return std::move(cos_aod_); }
  const std::vector<Complex>& coeff() const& { return coeff_; }
  std::vector<Complex> coeff() && { return std::move(coeff_); }

 private:
  std::vector<double> aod_rad_;
  std::vector<Complex> coeff_;
  std::vector<double> cos_aod_;
};

/// Position sequence x[0..K]. Construction enforces the start position, the
/// region bounds and the per-slot velocity cap of `params`.
class Trajectory {
 public:
  Trajectory(std::vector<double> positions_m, const SystemParams& params)
      : positions_m_(std::move(positions_m)), params_(params) {
    check_feasible(params_);
  }

  const std::vector<double>& positions_m() const& { return positions_m_; }
  std::vector<double> positions_m() && { return std::move(positions_m_); }
  const SystemParams& params() const { return params_; }
  int num_slots() const { return static_cast<int>(positions_m_.size()) - 1; }
  double operator[](std::size_t k) const { return positions_m_[k]; }

  /// Re-checks the trajectory against (possibly different) parameters.
  void check_feasible(const SystemParams& p) const {
    if (positions_m_.size() != static_cast<std::size_t>(p.num_slots) + 1)
      throw std::invalid_argument("Trajectory: expected num_slots + 1 positions");
    if (std::abs(positions_m_.front() - p.start_pos_m) > kFeasibilityEps)
      throw std::invalid_argument("Trajectory: positions_m[0] must equal start_pos_m");
    const double step = p.max_step_m() + kFeasibilityEps;
    for (std::size_t k = 0; k < positions_m_.size(); ++k) {
      const double x = positions_m_[k];
      if (!(x >= -kFeasibilityEps && x <= p.region_length_m + kFeasibilityEps))
        throw std::invalid_argument("Trajectory: position outside [0, region_length_m]");
      if (k > 0 && std::abs(x - positions_m_[k - 1]) > step)
        throw std::invalid_argument("Trajectory: step exceeds v_max_mps * slot_s");
    }
  }

 private:
  std::vector<double> positions_m_;
  SystemParams params_;
};

inline std::vector<Complex> field_response_vector(double x, const ChannelRealization& ch,
                                                  double wavelength_m) {
  const double k = kTwoPi / wavelength_m;
  std::vector<Complex> g;
  g.reserve(ch.num_paths());
  for (double c : ch.cos_aod()) g.push_back(std::polar(1.0, k * x * c));
  return g;
}

/// h(x) = a^H g(x).
inline Complex channel_gain(double x, const ChannelRealization& ch, double wavelength_m) {
  const double k = kTwoPi / wavelength_m;
  const auto& cs = ch.cos_aod();
  const auto& a = ch.coeff();
  Complex h{0.0, 0.0};
  for (std::size_t l = 0; l < cs.size(); ++l) h += std::conj(a[l]) * std::polar(1.0, k * x * cs[l]);
  return h;
}

/// |h(x)|^2
inline double power_gain(double x, const ChannelRealization& ch, double wavelength_m) {
  return std::norm(channel_gain(x, ch, wavelength_m));
}

inline double rate_from_gain(double gain, const SystemParams& p) {
  return std::log2(1.0 + p.tx_power_w * gain / p.noise_power_w);
}

inline double achievable_rate(double x, const ChannelRealization& ch, const SystemParams& p) {
  return rate_from_gain(power_gain(x, ch, p.wavelength_m), p);
}

/// Closed-form power gain for exactly two paths:
/// |a1|^2 + |a2|^2 + 2|a1||a2| cos(phi(x)),
/// phi(x) = 2*pi/lambda * x * (cos th1 - cos th2) + (arg a2 - arg a1).
inline double two_path_gain(double x, const ChannelRealization& ch, double wavelength_m) {
  if (ch.num_paths() != 2)
    throw std::invalid_argument("two_path_gain: channel must have exactly 2 paths");
  const auto& a = ch.coeff();
  const auto& c = ch.cos_aod();
  const double m1 = std::abs(a[0]);
  const double m2 = std::abs(a[1]);
  const double phi =
      kTwoPi / wavelength_m * x * (c[0] - c[1]) + (std::arg(a[1]) - std::arg(a[0]));
  return m1 * m1 + m2 * m2 + 2.0 * m1 * m2 * std::cos(phi);
}

}  // namespace matraj
