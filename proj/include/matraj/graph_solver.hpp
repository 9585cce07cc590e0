#pragma once

// Grid discretization of the movement region and the fixed-hop shortest path
// reformulation of the average-rate trajectory problem.
//
// Vertices 1..N are grid centers p_n = n*D/N, vertex N+1 is a dummy terminal.
// Grid vertices i, j are adjacent iff |i - j| <= d_max (self-loops included)
// and every grid vertex has an edge into the terminal. Edge (i, j) carries
// weight W_i = -log2(1 + P_t |h(p_i)|^2 / sigma^2), i.e. it depends only on the
// source vertex. A (K+1)-hop path s -> ... -> N+1 therefore visits K+1 grid
// vertices x[0] = p_s, x[1], ..., x[K] and costs -sum_{k=0..K} R(x[k]).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "matraj/core_model.hpp"

namespace matraj {

class Grid {
 public:
  Grid(double region_length_m, int num_grids, int start_index)
      : spacing_m_(region_length_m / num_grids), start_index_(start_index) {
    if (num_grids < 1) throw std::invalid_argument("Grid: num_grids must be >= 1");
    if (start_index < 1 || start_index > num_grids)
      throw std::invalid_argument("Grid: start_index must lie in [1, num_grids]");
    centers_m_.reserve(num_grids);
    for (int n = 1; n <= num_grids; ++n) centers_m_.push_back(n * region_length_m / num_grids);
  }

  double spacing_m() const { return spacing_m_; }
  int size() const { return static_cast<int>(centers_m_.size()); }
  int start_index() const { return start_index_; }
  const std::vector<double>& centers_m() const { return centers_m_; }
  /// 1-based.
  double center(int n) const { return centers_m_[static_cast<std::size_t>(n - 1)]; }

  /// Nearest center to x, ties toward the smaller index.
  int nearest_index(double x) const {
    const double r = x / spacing_m_;
    auto n = static_cast<int>(std::floor(r));
    if (r - n > 0.5) ++n;
    return std::clamp(n, 1, size());
  }

 private:
  double spacing_m_;
  int start_index_;
  std::vector<double> centers_m_;
};

/// Snaps the start position to the nearest grid center.
inline Grid discretize(const SystemParams& p) {
  if (p.num_grids < 2) throw std::invalid_argument("discretize: num_grids must be >= 2");
  Grid probe(p.region_length_m, p.num_grids, 1);
  return Grid(p.region_length_m, p.num_grids, probe.nearest_index(p.start_pos_m));
}

/// Copy of `p` whose start position is the grid center the DP starts from.
inline SystemParams snapped_params(const SystemParams& p, const Grid& g) {
  SystemParams q = p;
  q.start_pos_m = g.center(g.start_index());
  return q;
}

inline int max_hop_distance(const SystemParams& p) {
  return static_cast<int>(std::floor(p.max_step_m() / p.grid_spacing_m() + kRatioEps));
}

class MovementGraph {
 public:
  MovementGraph(std::vector<double> vertex_weight, int d_max, int start_index)
      : vertex_weight_(std::move(vertex_weight)), d_max_(d_max), start_index_(start_index) {
    if (vertex_weight_.empty()) throw std::invalid_argument("MovementGraph: no grid vertices");
    if (d_max_ < 1) throw std::invalid_argument("MovementGraph: d_max must be >= 1");
    if (start_index_ < 1 || start_index_ > num_grids())
      throw std::invalid_argument("MovementGraph: start_index out of range");
    for (double w : vertex_weight_)
      if (!(w <= 0.0)) throw std::invalid_argument("MovementGraph: vertex weights must be <= 0");
  }

  int num_grids() const { return static_cast<int>(vertex_weight_.size()); }
  int num_vertices() const { return num_grids() + 1; }
  int terminal() const { return num_grids() + 1; }
  int d_max() const { return d_max_; }
  int start_index() const { return start_index_; }
  const std::vector<double>& vertex_weight() const { return vertex_weight_; }
  /// 1-based; weight of every edge leaving grid vertex i.
  double weight(int i) const { return vertex_weight_[static_cast<std::size_t>(i - 1)]; }

  bool has_edge(int i, int j) const {
    const int n = num_grids();
    if (i < 1 || i > n) return false;
    if (j == terminal()) return true;
    return j >= 1 && j <= n && std::abs(i - j) <= d_max_;
  }

 private:
  std::vector<double> vertex_weight_;
  int d_max_;
  int start_index_;
};

inline MovementGraph build_graph(const Grid& g, const ChannelRealization& ch,
                                 const SystemParams& p) {
  const int d_max = max_hop_distance(p);
  if (d_max < 1)
    throw std::invalid_argument("build_graph: d_max = floor(v_max*tau/delta_s) must be >= 1");
  std::vector<double> w;
  w.reserve(g.centers_m().size());
  for (double x : g.centers_m()) w.push_back(-achievable_rate(x, ch, p));
  return MovementGraph(std::move(w), d_max, g.start_index());
}

struct HopPath {
  std::vector<int> vertices;
  double total_cost = 0.0;
};

/// Hop-layered DP. f_0(s) = 0, f_m(j) = min_{|i-j|<=d} f_{m-1}(i) + W_i and the
/// final hop lands on the terminal. Predecessor ties go to the smaller index,
/// so among equal-cost paths the one that is smallest read back-to-front wins.
/// O(hops * N * d_max) time, O(N) values plus O(hops * N) predecessors.
inline HopPath fixed_hop_shortest_path(const MovementGraph& mg, int hops) {
  if (hops < 1) throw std::invalid_argument("fixed_hop_shortest_path: hops must be >= 1");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = mg.num_grids();
  const int d = mg.d_max();
  const auto& w = mg.vertex_weight();

  // cur[j], j in [0, n): cost of the best (m)-hop walk from s ending on grid vertex j+1.
  std::vector<double> cur(n, kInf), next(n, kInf);
  cur[mg.start_index() - 1] = 0.0;
  // pred[(m-1)*n + j] for layers m = 1..hops-1.
  std::vector<std::int32_t> pred(static_cast<std::size_t>(hops - 1) * n, -1);
  int lo = mg.start_index() - 1, hi = mg.start_index() - 1;  // reachable band

  for (int m = 1; m < hops; ++m) {
    const int nlo = std::max(0, lo - d), nhi = std::min(n - 1, hi + d);
    std::int32_t* layer_pred = pred.data() + static_cast<std::size_t>(m - 1) * n;
    for (int j = nlo; j <= nhi; ++j) {
      double best = kInf;
      std::int32_t arg = -1;
      const int ilo = std::max(lo, j - d), ihi = std::min(hi, j + d);
      for (int i = ilo; i <= ihi; ++i) {
        const double c = cur[i] + w[i];
        if (c < best) {
          best = c;
          arg = i;
        }
      }
      next[j] = best;
      layer_pred[j] = arg;
    }
    std::fill(cur.begin() + lo, cur.begin() + hi + 1, kInf);
    std::swap(cur, next);
    lo = nlo;
    hi = nhi;
  }

  double best = kInf;
  int last = -1;
  for (int i = lo; i <= hi; ++i) {
    const double c = cur[i] + w[i];
    if (c < best) {
      best = c;
      last = i;
    }
  }
  if (last < 0) throw std::logic_error("fixed_hop_shortest_path: no feasible path");

  HopPath out;
  out.total_cost = best;
  out.vertices.assign(static_cast<std::size_t>(hops) + 1, 0);
  out.vertices[hops] = mg.terminal();
  int v = last;
  for (int m = hops - 1; m >= 1; --m) {
    out.vertices[m] = v + 1;
    v = pred[static_cast<std::size_t>(m - 1) * n + v];
  }
  out.vertices[0] = v + 1;
  return out;
}

/// Exhaustive enumeration of every `hops`-edge path from the start vertex to
/// the terminal. Same tie rule as the DP. Test oracle only.
inline HopPath brute_force_oracle(const MovementGraph& mg, int hops) {
  if (hops < 1) throw std::invalid_argument("brute_force_oracle: hops must be >= 1");
  const double branching = 2.0 * mg.d_max() + 1.0;
  const double size = std::pow(branching, hops - 1);
  if (size > 1e7)
    throw std::invalid_argument("brute_force_oracle: instance too large (" +
                                std::to_string(static_cast<long long>(size)) +
                                " candidate paths > 1e7)");
  const int n = mg.num_grids();
  const int d = mg.d_max();

  std::vector<int> walk(static_cast<std::size_t>(hops), 0);
  std::vector<int> best_walk;
  double best_cost = std::numeric_limits<double>::infinity();

  // True when `a` precedes `b` reading from the last vertex backwards.
  auto reverse_lex_less = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  };

  // Partial costs are accumulated front-to-back, like the DP, so equal paths
  // produce bit-identical totals.
  auto recurse = [&](auto&& self, int depth, double cost) -> void {
    if (depth == hops) {
      if (cost < best_cost || (cost == best_cost && reverse_lex_less(walk, best_walk))) {
        best_cost = cost;
        best_walk = walk;
      }
      return;
    }
    const int prev = walk[depth - 1];
    for (int v = std::max(1, prev - d); v <= std::min(n, prev + d); ++v) {
      walk[depth] = v;
      self(self, depth + 1, cost + mg.weight(v));
    }
  };
  walk[0] = mg.start_index();
  recurse(recurse, 1, 0.0 + mg.weight(mg.start_index()));

  HopPath out;
  out.total_cost = best_cost;
  out.vertices = best_walk;
  out.vertices.push_back(mg.terminal());
  return out;
}

/// Drops the terminal and maps grid vertex n to p_n. `p` supplies the timing
/// and velocity limits; the start position is taken from the path.
inline Trajectory path_to_trajectory(const HopPath& hp, const Grid& g, const SystemParams& p) {
  if (hp.vertices.size() < 2 || hp.vertices.back() != g.size() + 1)
    throw std::invalid_argument("path_to_trajectory: path must end on the terminal vertex");
  std::vector<double> xs;
  xs.reserve(hp.vertices.size() - 1);
  for (std::size_t m = 0; m + 1 < hp.vertices.size(); ++m) xs.push_back(g.center(hp.vertices[m]));
  SystemParams q = p;
  q.start_pos_m = xs.front();
  return Trajectory(std::move(xs), q);
}

/// Grid trajectory that moves d_max cells per slot from the start index toward
/// `target_index` and holds there. Always a feasible path of the movement graph.
inline Trajectory grid_ramp_trajectory(const Grid& g, const SystemParams& p, int target_index) {
  const int d = max_hop_distance(p);
  if (d < 1) throw std::invalid_argument("grid_ramp_trajectory: d_max must be >= 1");
  target_index = std::clamp(target_index, 1, g.size());
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(p.num_slots) + 1);
  int n = g.start_index();
  xs.push_back(g.center(n));
  for (int k = 1; k <= p.num_slots; ++k) {
    if (n < target_index)
      n = std::min(target_index, n + d);
    else if (n > target_index)
      n = std::max(target_index, n - d);
    xs.push_back(g.center(n));
  }
  return Trajectory(std::move(xs), snapped_params(p, g));
}

struct GraphSolution {
  Grid grid;
  MovementGraph graph;
  HopPath path;
  Trajectory trajectory;
};

/// Discretize, build the movement graph and run the DP with K+1 hops.
inline GraphSolution solve_graph(const ChannelRealization& ch, const SystemParams& p) {
  p.validate();
  Grid g = discretize(p);
  MovementGraph mg = build_graph(g, ch, p);
  HopPath hp = fixed_hop_shortest_path(mg, p.num_slots + 1);
  Trajectory t = path_to_trajectory(hp, g, p);
  return GraphSolution{std::move(g), std::move(mg), std::move(hp), std::move(t)};
}

}  // namespace matraj
