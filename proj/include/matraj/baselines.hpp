#pragma once

// Benchmark movement policies, all evaluated on the DP grid so that every
// moving benchmark is a feasible path of the movement graph.
//   myopic      -> nearest crest (local maximum of |h|^2) to the start
//   far-sighted -> strongest grid point reachable within K slots
//   fpa         -> antenna fixed at the region center

#include <cmath>
#include <cstdlib>
#include <vector>

#include "matraj/core_model.hpp"
#include "matraj/graph_solver.hpp"

namespace matraj {

/// Relative tolerance under which neighbouring grid gains count as equal.
inline constexpr double kPlateauRelTol = 1e-12;

struct CrestSet {
  std::vector<int> indices;  // 1-based grid indices, ascending
};

inline std::vector<double> gain_landscape(const Grid& g, const ChannelRealization& ch,
                                          const SystemParams& p) {
  std::vector<double> out;
  out.reserve(g.centers_m().size());
  for (double x : g.centers_m()) out.push_back(power_gain(x, ch, p.wavelength_m));
  return out;
}

inline bool gains_equal(double a, double b) {
  return std::abs(a - b) <= kPlateauRelTol * std::max(std::abs(a), std::abs(b));
}

/// Local maxima of a sampled gain curve. Runs of equal values are scanned as
/// one plateau and report their (left) midpoint; region ends compare one-sided.
inline CrestSet find_crests(const std::vector<double>& gain) {
  CrestSet out;
  const int n = static_cast<int>(gain.size());
  int a = 0;
  while (a < n) {
    int b = a;
    while (b + 1 < n && gains_equal(gain[b + 1], gain[a])) ++b;
    const bool left_ok = a == 0 || gain[a - 1] < gain[a];
    const bool right_ok = b == n - 1 || gain[b + 1] < gain[b];
    if (left_ok && right_ok) out.indices.push_back((a + b) / 2 + 1);
    a = b + 1;
  }
  return out;
}

inline CrestSet find_crests(const Grid& g, const ChannelRealization& ch, const SystemParams& p) {
  return find_crests(gain_landscape(g, ch, p));
}

inline Trajectory myopic_trajectory(const Grid& g, const ChannelRealization& ch,
                                    const SystemParams& p) {
  const CrestSet crests = find_crests(g, ch, p);
  const int s = g.start_index();
  int target = s;
  int best = -1;
  for (int i : crests.indices) {
    const int dist = std::abs(i - s);
    if (best < 0 || dist < best) {
      best = dist;
      target = i;
    }
  }
  return grid_ramp_trajectory(g, p, target);
}

inline Trajectory farsighted_trajectory(const Grid& g, const ChannelRealization& ch,
                                        const SystemParams& p) {
  const std::vector<double> gain = gain_landscape(g, ch, p);
  const int s = g.start_index();
  const long long reach = static_cast<long long>(p.num_slots) * max_hop_distance(p);
  const int lo = static_cast<int>(std::max<long long>(1, s - reach));
  const int hi = static_cast<int>(std::min<long long>(g.size(), s + reach));
  // Ties go to the smaller coordinate, except that a start already at the
  // maximum stays put.
  int target = lo;
  for (int i = lo + 1; i <= hi; ++i)
    if (gain[i - 1] > gain[target - 1]) target = i;
  if (gains_equal(gain[target - 1], gain[s - 1])) target = s;
  return grid_ramp_trajectory(g, p, target);
}

inline int fpa_index(const Grid& g) { return std::max(1, g.size() / 2); }

/// Constant trajectory at the grid center nearest D/2. The antenna never
/// moves, so its start position is the center rather than x0.
inline Trajectory fpa_trajectory(const Grid& g, const SystemParams& p) {
  SystemParams q = p;
  q.start_pos_m = g.center(fpa_index(g));
  return Trajectory(std::vector<double>(static_cast<std::size_t>(p.num_slots) + 1, q.start_pos_m),
                    q);
}

}  // namespace matraj
