#pragma once

// Closed-form optimal trajectory when the channel has exactly two paths.
//
// The two-path gain is a cosine in x with period lambda / |cos th1 - cos th2|.
// Its maxima ("coherent positions") are
//   x_n = (2*n*pi - dphi) * lambda / (2*pi*(cos th1 - cos th2)),  n integer,
// and the optimal trajectory heads for the coherent position nearest x0 at
// full speed, then stays there.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "matraj/core_model.hpp"
#include "matraj/graph_solver.hpp"

namespace matraj {

/// Below this |cos th1 - cos th2| the gain is treated as constant in x.
inline constexpr double kDegenerateCosGap = 1e-12;

struct CoherentSet {
  std::vector<double> positions_m;
  /// Empty for a degenerate channel (gain constant in x).
  std::optional<double> period_m;

  bool degenerate() const { return !period_m.has_value(); }
};

inline CoherentSet coherent_positions(const ChannelRealization& ch, const SystemParams& p) {
  if (ch.num_paths() != 2)
    throw std::invalid_argument("coherent_positions: channel must have exactly 2 paths");
  const double dc = ch.cos_aod()[0] - ch.cos_aod()[1];
  CoherentSet out;
  if (std::abs(dc) < kDegenerateCosGap) return out;

  const double lambda = p.wavelength_m;
  const double dphi = std::arg(ch.coeff()[1]) - std::arg(ch.coeff()[0]);
  out.period_m = lambda / std::abs(dc);
  auto position = [&](double n) { return (kTwoPi * n - dphi) * lambda / (kTwoPi * dc); };

  // x_n is affine in n; invert at both region ends to get the integer range.
  const double n_at_0 = dphi / kTwoPi;
  const double n_at_d = dphi / kTwoPi + p.region_length_m * dc / lambda;
  const double tol_n = 1e-12 * std::abs(dc) / lambda;  // 1e-12 m expressed in n-units
  const auto n_lo = static_cast<long long>(std::ceil(std::min(n_at_0, n_at_d) - tol_n));
  const auto n_hi = static_cast<long long>(std::floor(std::max(n_at_0, n_at_d) + tol_n));
  for (long long n = n_lo; n <= n_hi; ++n)
    out.positions_m.push_back(std::clamp(position(static_cast<double>(n)), 0.0, p.region_length_m));
  std::sort(out.positions_m.begin(), out.positions_m.end());
  return out;
}

/// Closest coherent position to x0; equidistant ties go to the smaller one.
inline std::optional<double> nearest_coherent(double x0, const CoherentSet& cs) {
  std::optional<double> best;
  double best_dist = 0.0;
  for (double x : cs.positions_m) {  // ascending, so strict improvement keeps the smaller on ties
    const double dist = std::abs(x - x0);
    if (!best || dist < best_dist - 1e-12) {
      best = x;
      best_dist = dist;
    }
  }
  return best;
}

/// Move from x0 toward x_star at v_max, landing exactly on x_star (the last
/// step is clipped) and holding; if x_star is out of reach the ramp lasts all
/// K slots.
inline Trajectory closed_form_trajectory(double x0, double x_star, const SystemParams& p) {
  const double step = p.max_step_m();
  const double dist = std::abs(x_star - x0);
  const double dir = x_star >= x0 ? 1.0 : -1.0;
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(p.num_slots) + 1);
  for (int k = 0; k <= p.num_slots; ++k) {
    const double travelled = std::min(k * step, dist);
    xs.push_back(travelled == dist ? x_star : x0 + dir * travelled);
  }
  SystemParams q = p;
  q.start_pos_m = x0;
  return Trajectory(std::move(xs), q);
}

/// Destination the closed form heads for: nearest coherent position, x0 for a
/// constant-gain channel, or the region end uphill of x0 when no coherent
/// position falls inside the region.
inline double twopath_destination(const ChannelRealization& ch, const SystemParams& p) {
  const CoherentSet cs = coherent_positions(ch, p);
  const double x0 = p.start_pos_m;
  if (cs.degenerate()) return x0;
  if (auto x = nearest_coherent(x0, cs)) return *x;
  // No interior peak: x0 lies on a monotone piece of the cosine that ends at a
  // boundary. Climb to that boundary; at zero slope take the better boundary.
  const auto& a = ch.coeff();
  const auto& c = ch.cos_aod();
  const double phi = kTwoPi / p.wavelength_m * x0 * (c[0] - c[1]) +
                     (std::arg(a[1]) - std::arg(a[0]));
  const double slope = -std::sin(phi) * (c[0] - c[1]);
  if (slope > 0.0) return p.region_length_m;
  if (slope < 0.0) return 0.0;
  const double g0 = two_path_gain(0.0, ch, p.wavelength_m);
  const double gd = two_path_gain(p.region_length_m, ch, p.wavelength_m);
  return gd > g0 ? p.region_length_m : 0.0;
}

inline Trajectory solve_twopath(const ChannelRealization& ch, const SystemParams& p) {
  if (ch.num_paths() != 2)
    throw std::invalid_argument("solve_twopath: channel must have exactly 2 paths");
  p.validate();
  return closed_form_trajectory(p.start_pos_m, twopath_destination(ch, p), p);
}

/// The closed form restricted to the DP grid: ramp at d_max cells per slot
/// from the snapped start toward the grid center nearest the destination.
inline Trajectory solve_twopath_on_grid(const ChannelRealization& ch, const SystemParams& p,
                                        const Grid& g) {
  const double dest = twopath_destination(ch, snapped_params(p, g));
  return grid_ramp_trajectory(g, p, g.nearest_index(dest));
}

}  // namespace matraj
