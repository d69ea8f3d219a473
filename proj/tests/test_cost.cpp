#include <gtest/gtest.h>

#include "qsa/cost.hpp"
#include "qsa/verify.hpp"

using namespace qsa;

namespace {

AnnealConfig ladder_config(int cols, double eps) {
  AnnealConfig config;
  config.eps = eps;
  IsingLadder ladder = IsingLadder::open(cols);
  for (double beta : {0.0, 0.3, 0.6, 0.9, 1.2})
    config.chains.push_back(build_glauber_chain(ladder, beta, true));
  return config;
}

}  // namespace

TEST(WocjanCost, FormulaPlugIn) {
  CostSummary cost = wocjan_cost(4, 1.0, M_PI / 2, 0.5, CostModel{});
  EXPECT_NEAR(cost.queries, (4.0 / (M_PI / 2)) * std::log(8.0), 1e-12);
  EXPECT_NEAR(cost.queries, 5.295, 5e-3);
}

TEST(WocjanCost, AncillasIncreaseAsEpsShrinks) {
  double prev = 0.0;
  for (double eps : {0.5, 0.1, 0.01, 1e-3, 1e-6}) {
    CostSummary cost = wocjan_cost(4, 0.5, 0.3, eps, CostModel{});
    EXPECT_GE(cost.ancillas, prev);
    prev = cost.ancillas;
  }
  EXPECT_GT(prev, wocjan_cost(4, 0.5, 0.3, 0.5, CostModel{}).ancillas);
}

TEST(OurCost, AncillaAlwaysOne) {
  AnnealReport report = run_anneal(ladder_config(2, 0.1));
  CostSummary cost = our_cost(report);
  EXPECT_DOUBLE_EQ(cost.ancillas, 1.0);
  EXPECT_DOUBLE_EQ(cost.queries, static_cast<double>(report.total_queries));
}

TEST(OurCost, TrivialRunIsFree) {
  MarkovChain chain = build_glauber_chain(IsingLadder::open(1), 0.2, true);
  AnnealConfig config;
  config.eps = 0.3;
  config.chains = {chain, chain};
  EXPECT_DOUBLE_EQ(our_cost(run_anneal(config)).queries, 0.0);
}

TEST(Benchmark, RowShapeAndAncillaColumns) {
  auto rows = benchmark_sweep(ladder_config(2, 0.1), {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  ASSERT_EQ(rows.size(), 6u);
  double prev_anc = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_NEAR(rows[i].log10_inv_eps, static_cast<double>(i + 1), 1e-12);
    EXPECT_DOUBLE_EQ(rows[i].our_ancillas, 1.0);
    EXPECT_GE(rows[i].wocjan_ancillas, prev_anc);
    prev_anc = rows[i].wocjan_ancillas;
  }
  EXPECT_GE(rows.back().wocjan_ancillas, 4.0);
}

TEST(Benchmark, FastModeMatchesFullRunsExactly) {
  AnnealConfig config = ladder_config(2, 0.1);
  std::vector<double> grid{1e-1, 1e-2};
  auto fast = benchmark_sweep(config, grid, true);
  auto full = benchmark_sweep(config, grid, false);
  ASSERT_EQ(fast.size(), full.size());
  for (std::size_t i = 0; i < fast.size(); ++i) {
    EXPECT_DOUBLE_EQ(fast[i].our_queries, full[i].our_queries);
    EXPECT_DOUBLE_EQ(fast[i].wocjan_queries, full[i].wocjan_queries);
  }
}

TEST(Benchmark, DeterministicAcrossCalls) {
  AnnealConfig config = ladder_config(2, 0.1);
  std::vector<double> grid{1e-1, 1e-3, 1e-6};
  auto a = benchmark_sweep(config, grid);
  auto b = benchmark_sweep(config, grid);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].our_queries, b[i].our_queries);
    EXPECT_EQ(a[i].wocjan_queries, b[i].wocjan_queries);
    EXPECT_EQ(a[i].wocjan_ancillas, b[i].wocjan_ancillas);
  }
}

TEST(Benchmark, QueriesGrowPolylogarithmically) {
  auto rows = benchmark_sweep(ladder_config(2, 0.1), {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6});
  // our counts grow with log(1/eps); successive ratios must shrink toward 1
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].our_queries, rows[i - 1].our_queries);
    EXPECT_LT(rows[i].our_queries / rows[i - 1].our_queries, 3.0);
  }
  // fitted slope of log(queries) against log(log(1/eps)) stays modest
  std::vector<double> xs, ys;
  for (const auto& row : rows) {
    xs.push_back(std::log(row.log10_inv_eps));
    ys.push_back(std::log(row.our_queries));
  }
  EXPECT_LT(least_squares_slope(xs, ys), 2.5);
}

TEST(Scaling, QuerySlopesSeparateFrameworks) {
  ScalingFits fits = scaling_fits();
  EXPECT_GE(fits.our_query_slope, 0.8);
  EXPECT_LE(fits.our_query_slope, 1.2);
  EXPECT_GE(fits.wocjan_query_slope, 1.8);
  EXPECT_LE(fits.wocjan_query_slope, 2.2);
  EXPECT_GE(fits.fpaa_length_slope, 0.8);
  EXPECT_LE(fits.fpaa_length_slope, 1.2);
  EXPECT_GE(fits.filter_degree_slope, 0.5);
  EXPECT_LE(fits.filter_degree_slope, 1.5);
}

TEST(Scaling, SyntheticGapSweepKeepsInverseGapScaling) {
  // queries against 1/Delta at fixed overlap: slope near 1 on log-log axes
  std::vector<double> xs, ys;
  const double eps = 1e-3;
  for (double c = 0.9; c >= 0.05; c *= 0.7) {
    MarkovChain a = two_state_chain(0.2, c);
    MarkovChain b = two_state_chain(0.8, c);
    AnnealConfig config;
    config.chains = {a, b};
    config.eps = eps;
    auto rows = benchmark_sweep(config, {eps}, true);
    xs.push_back(std::log(1.0 / walk_spectrum(a).phase_gap));
    ys.push_back(std::log(rows[0].our_queries));
  }
  double slope = least_squares_slope(xs, ys);
  EXPECT_GE(slope, 0.8);
  EXPECT_LE(slope, 1.2);
}
