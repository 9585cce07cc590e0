#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "matraj/baselines.hpp"
#include "matraj/montecarlo.hpp"
#include "matraj/twopath_solver.hpp"
#include "test_support.hpp"

namespace matraj {
namespace {

using testing::paper_coeff_scale;
using testing::random_channel;

// Peaks of |h|^2 at every multiple of 0.06 m.
ChannelRealization wavelength_comb() {
  return ChannelRealization({0.0, std::numbers::pi / 2}, {Complex(1e-5, 0), Complex(1e-5, 0)});
}

// Two paths with a period of 0.6 m and its single peak at x = 0.2 m.
ChannelRealization single_peak_at(double x_peak) {
  const double dc = 0.1;
  const double th1 = 0.5;
  const double th2 = std::acos(std::cos(th1) - dc);
  const double dphi = -kTwoPi * x_peak * dc / 0.06;
  return ChannelRealization({th1, th2}, {std::polar(1e-5, 0.0), std::polar(0.7e-5, dphi)});
}

TEST(FindCrestsTest, SyntheticProfiles) {
  EXPECT_EQ(find_crests(std::vector<double>{1, 3, 2, 5, 4}).indices, (std::vector<int>{2, 4}));
  // Boundaries compare one-sided.
  EXPECT_EQ(find_crests(std::vector<double>{5, 3, 2, 4}).indices, (std::vector<int>{1, 4}));
  // Even plateau reports its left midpoint, odd plateau its middle.
  EXPECT_EQ(find_crests(std::vector<double>{1, 4, 4, 4, 4, 1}).indices, (std::vector<int>{3}));
  EXPECT_EQ(find_crests(std::vector<double>{1, 4, 4, 4, 1}).indices, (std::vector<int>{3}));
  // A plateau that is a shoulder is not a crest.
  EXPECT_EQ(find_crests(std::vector<double>{1, 2, 2, 3}).indices, (std::vector<int>{4}));
  EXPECT_EQ(find_crests(std::vector<double>{7}).indices, (std::vector<int>{1}));
}

TEST(FindCrestsTest, SinglePathIsOnePlateau) {
  SystemParams p;
  const ChannelRealization ch({1.0}, {Complex(3e-6, -4e-6)});
  EXPECT_EQ(find_crests(discretize(p), ch, p).indices, (std::vector<int>{300}));
}

TEST(FindCrestsTest, TwoPathCrestsSitOnCoherentPositions) {
  std::mt19937_64 rng(31);
  SystemParams p;
  const Grid g = discretize(p);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ch = random_channel(rng, 2);
    const CoherentSet cs = coherent_positions(ch, p);
    const CrestSet crests = find_crests(g, ch, p);
    for (double x : cs.positions_m) {
      double best = 1e9;
      for (int i : crests.indices) best = std::min(best, std::abs(g.center(i) - x));
      EXPECT_LE(best, g.spacing_m() + 1e-12) << "coherent position " << x;
    }
    for (int i : crests.indices) {
      if (i == 1 || i == g.size()) continue;  // region ends may be crests without a peak
      double best = 1e9;
      for (double x : cs.positions_m) best = std::min(best, std::abs(g.center(i) - x));
      EXPECT_LE(best, g.spacing_m() + 1e-12) << "crest " << i;
    }
  }
}

TEST(FindCrestsTest, CrestsDominateNeighboursOnFreshScan) {
  std::mt19937_64 rng(32);
  SystemParams p;
  const Grid g = discretize(p);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ch = random_channel(rng, 4);
    const CrestSet crests = find_crests(g, ch, p);
    EXPECT_FALSE(crests.indices.empty());
    for (int i : crests.indices) {
      const double gi = std::norm(channel_gain(g.center(i), ch, p.wavelength_m));
      for (int j : {i - 1, i + 1}) {
        if (j < 1 || j > g.size()) continue;
        const double gj = std::norm(channel_gain(g.center(j), ch, p.wavelength_m));
        EXPECT_GE(gi, gj * (1 - 1e-12)) << "crest " << i << " neighbour " << j;
      }
    }
  }
}

TEST(MyopicTrajectoryTest, StartOnCrestStaysPut) {
  SystemParams p = testing::paper_params(20, 0.06);
  const Grid g = discretize(p);
  ASSERT_EQ(g.start_index(), 100);
  for (double x : myopic_trajectory(g, wavelength_comb(), p).positions_m()) EXPECT_DOUBLE_EQ(x, g.center(100));
}

TEST(MyopicTrajectoryTest, AdjacentCrestIsOneStep) {
  SystemParams p = testing::paper_params(5, 101 * 0.0006);
  const Grid g = discretize(p);
  ASSERT_EQ(g.start_index(), 101);
  const Trajectory t = myopic_trajectory(g, wavelength_comb(), p);
  EXPECT_DOUBLE_EQ(t[0], g.center(101));
  for (int k = 1; k <= 5; ++k) EXPECT_DOUBLE_EQ(t[k], g.center(100));
}

TEST(MyopicTrajectoryTest, HeadsForNearestCrestAtFullGridSpeed) {
  SystemParams p = testing::paper_params(30, 130 * 0.0006);  // crests at 100 and 200
  const Grid g = discretize(p);
  const Trajectory t = myopic_trajectory(g, wavelength_comb(), p);
  for (int k = 1; k <= 15; ++k) EXPECT_DOUBLE_EQ(t[k], g.center(130 - 2 * k));
  for (int k = 16; k <= 30; ++k) EXPECT_DOUBLE_EQ(t[k], g.center(100));
}

TEST(FarsightedTrajectoryTest, UniformGainStaysPut) {
  SystemParams p = testing::paper_params(40, 0.2);
  const Grid g = discretize(p);
  const ChannelRealization ch({2.0}, {Complex(1e-5, 1e-5)});
  for (double x : farsighted_trajectory(g, ch, p).positions_m()) EXPECT_DOUBLE_EQ(x, g.center(g.start_index()));
}

TEST(FarsightedTrajectoryTest, RampsToReachableGlobalMaximum) {
  SystemParams p = testing::paper_params(100, 200 * 0.0006);
  const Grid g = discretize(p);
  const auto ch = single_peak_at(0.2);
  const Trajectory t = farsighted_trajectory(g, ch, p);
  EXPECT_DOUBLE_EQ(t.positions_m().back(), g.center(333));
  for (int k = 1; k <= 66; ++k) EXPECT_DOUBLE_EQ(t[k], g.center(200 + 2 * k));
  for (int k = 67; k <= 100; ++k) EXPECT_DOUBLE_EQ(t[k], g.center(333));
}

TEST(FarsightedTrajectoryTest, TargetLimitedByReach) {
  SystemParams p = testing::paper_params(10, 200 * 0.0006);
  const Grid g = discretize(p);
  const auto ch = single_peak_at(0.2);
  const Trajectory t = farsighted_trajectory(g, ch, p);
  // Only cells 180..220 are reachable; the gain rises toward the peak, so 220 wins.
  EXPECT_DOUBLE_EQ(t.positions_m().back(), g.center(220));
}

TEST(FpaTrajectoryTest, FixedAtRegionCenter) {
  SystemParams p = testing::paper_params(30, 0.01);
  const Grid g = discretize(p);
  const Trajectory t = fpa_trajectory(g, p);
  for (double x : t.positions_m()) EXPECT_NEAR(x, 0.18, 1e-15);
  std::mt19937_64 rng(33);
  const auto ch = random_channel(rng, 3, paper_coeff_scale());
  const auto rows = trace_rows(t, ch, p);
  for (const auto& r : rows) EXPECT_EQ(r.rate_bpshz, rows.front().rate_bpshz);
}

TEST(FpaTrajectoryTest, OddGridPicksLowerOfTwoCenters) {
  SystemParams p;
  p.num_grids = 5;
  p.region_length_m = 0.005;
  EXPECT_EQ(fpa_index(discretize(p)), 2);
}

TEST(BaselinesTest, SinglePathAllSchemesMatchGraphSolution) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    SystemParams p = testing::paper_params(100, (1 + trial * 50) * 0.0006);
    const auto ch = random_channel(rng, 1, paper_coeff_scale());
    const Grid g = discretize(p);
    const double dp = average_rate(solve_graph(ch, p).trajectory, ch, p);
    EXPECT_NEAR(average_rate(fpa_trajectory(g, p), ch, p), dp, 1e-12);
    EXPECT_NEAR(average_rate(myopic_trajectory(g, ch, p), ch, p), dp, 1e-12);
    EXPECT_NEAR(average_rate(farsighted_trajectory(g, ch, p), ch, p), dp, 1e-12);
  }
}

TEST(BaselinesTest, GraphSolutionDominatesMovingBaselines) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    const int s = std::uniform_int_distribution<int>(1, 600)(rng);
    const int paths = std::uniform_int_distribution<int>(2, 8)(rng);
    SystemParams p = testing::paper_params(std::uniform_int_distribution<int>(20, 200)(rng), s * 0.0006);
    const auto ch = random_channel(rng, paths, paper_coeff_scale());
    const Grid g = discretize(p);
    const double dp = average_rate(solve_graph(ch, p).trajectory, ch, p);
    EXPECT_GE(dp, average_rate(myopic_trajectory(g, ch, p), ch, p) - 1e-9);
    EXPECT_GE(dp, average_rate(farsighted_trajectory(g, ch, p), ch, p) - 1e-9);
  }
}

}  // namespace
}  // namespace matraj
