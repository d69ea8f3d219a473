#include <gtest/gtest.h>

#include <complex>

#include "qsa/anneal.hpp"

using namespace qsa;
using cd = std::complex<double>;

namespace {

AnnealConfig ladder22_config(double eps, RunMode mode = RunMode::compiled) {
  AnnealConfig config;
  config.eps = eps;
  config.mode = mode;
  IsingLadder ladder = IsingLadder::open(2);
  for (double beta : {0.0, 0.3, 0.6, 0.9, 1.2})
    config.chains.push_back(build_glauber_chain(ladder, beta, true));
  return config;
}

}  // namespace

TEST(Budget, UniformSplitExamples) {
  std::vector<double> p_bounds{0.9, 0.9, 0.9, 0.9};
  auto budgets = budget_errors(0.04, 4, p_bounds);
  ASSERT_EQ(budgets.size(), 4u);
  for (const auto& b : budgets) {
    EXPECT_DOUBLE_EQ(b.eps_fp, 0.005);  // eps_i = 0.01, halved
    if (b.L > 1) {
      EXPECT_DOUBLE_EQ(b.eps_w, 0.01 / (4.0 * (b.L - 1)));
      EXPECT_LE(b.eps_fp + 2.0 * (b.L - 1) * b.eps_w, 0.01 + 1e-12);
    }
  }
}

TEST(Budget, ScheduleLengthFeedsWalkBudget) {
  auto budgets = budget_errors(0.04, 4, {0.25, 0.25, 0.25, 0.25});
  int L = make_schedule(0.25, 0.005).L;
  for (const auto& b : budgets) {
    EXPECT_EQ(b.L, L);
    EXPECT_DOUBLE_EQ(b.eps_w, 0.01 / (4.0 * (L - 1)));
  }
}

TEST(Budget, PerfectOverlapIsFree) {
  auto budgets = budget_errors(0.1, 2, {1.0, 1.0});
  for (const auto& b : budgets) {
    EXPECT_EQ(b.L, 1);
    EXPECT_DOUBLE_EQ(b.eps_w, 0.0);
  }
}

TEST(TraceDistance, PureStateExamples) {
  Eigen::VectorXcd a(2), b(2);
  a << 1.0, 0.0;
  b << 1.0, 0.0;
  EXPECT_DOUBLE_EQ(trace_distance(a, b), 0.0);
  b << 0.0, 1.0;
  EXPECT_DOUBLE_EQ(trace_distance(a, b), 1.0);
  b << 0.5, std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(trace_distance(a, b), std::sqrt(3.0) / 2.0, 1e-14);
  b << 0.5, 0.5;  // not normalized
  EXPECT_THROW(trace_distance(a, b), error);
}

TEST(TvDistance, Examples) {
  Eigen::VectorXd p(3), q(3);
  p << 0.2, 0.3, 0.5;
  EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
  p << 1.0, 0.0, 0.0;
  q << 0.0, 0.0, 1.0;
  EXPECT_DOUBLE_EQ(tv_distance(p, q), 1.0);
  q << 0.9, 0.1, 0.0;
  EXPECT_NEAR(tv_distance(p, q), 0.1, 1e-15);
  q << 0.5, 0.1, 0.1;  // not a distribution
  EXPECT_THROW(tv_distance(p, q), error);
}

TEST(RoundDown, ThreeSignificantFigures) {
  EXPECT_DOUBLE_EQ(round_down_sig3(0.93456), 0.934);
  EXPECT_DOUBLE_EQ(round_down_sig3(0.999999), 0.999);
  EXPECT_DOUBLE_EQ(round_down_sig3(1.0), 1.0);
  EXPECT_DOUBLE_EQ(round_down_sig3(0.0123456), 0.0123);
  EXPECT_LE(round_down_sig3(0.73456), 0.73456);
}

TEST(RunAnneal, SingleTrivialStage) {
  MarkovChain chain = build_glauber_chain(IsingLadder::open(1), 0.4, true);
  AnnealConfig config;
  config.eps = 0.1;
  config.chains = {chain, chain};
  AnnealReport report = run_anneal(config);
  EXPECT_EQ(report.total_queries, 0);
  EXPECT_LT(report.final_d_tr, 1e-12);
  EXPECT_EQ(report.stages.size(), 1u);
  EXPECT_EQ(report.stages[0].L, 1);
}

TEST(RunAnneal, BenchmarkScheduleMeetsBudget) {
  AnnealReport report = run_anneal(ladder22_config(0.1));
  EXPECT_LE(report.final_d_tr, 0.1);
  EXPECT_EQ(report.ancilla_count, 1);
  EXPECT_EQ(report.register_qubits, 9);  // 2 ceil(log2 16) + 1
  ASSERT_EQ(report.stages.size(), 4u);
  // per-stage recursion: distance grows by at most eps_i per stage
  double eps_i = 0.1 / 4.0;
  double prev = 0.0;
  long long total = 0;
  for (const auto& sr : report.stages) {
    EXPECT_LE(sr.d_tr_measured, prev + eps_i + 1e-8);
    prev = sr.d_tr_measured;
    // budget identity per stage
    if (sr.L > 1) EXPECT_LE(sr.eps_fp + 2.0 * (sr.L - 1) * sr.eps_w, eps_i + 1e-12);
    // query recount from the report itself
    long long expected =
        static_cast<long long>((sr.L - 1) / 2) * ((4LL * sr.d_source + 2) + (4LL * sr.d_target + 2));
    EXPECT_EQ(sr.queries, expected);
    total += sr.queries;
  }
  EXPECT_EQ(report.total_queries, total);
  EXPECT_LE(report.tvd_final, report.final_d_tr + 1e-8);
}

TEST(RunAnneal, ExactProjectorModeWithinFpaaBudgetAlone) {
  AnnealReport report = run_anneal(ladder22_config(0.1, RunMode::exact_projector));
  double fpaa_budget = 4 * (0.1 / 4.0 / 2.0);  // sum of eps_fp_i
  EXPECT_LE(report.final_d_tr, fpaa_budget + 1e-8);
  EXPECT_EQ(report.total_queries, 0);
}

TEST(RunAnneal, TighterEpsStillCertifies) {
  AnnealReport report = run_anneal(ladder22_config(0.01));
  EXPECT_LE(report.final_d_tr, 0.01);
  EXPECT_GT(report.total_queries, 0);
}

TEST(RunAnneal, OverlapBoundViolationNamesStage) {
  AnnealConfig config = ladder22_config(0.1);
  config.p_lower_overrides = {0.9, 0.9999, 0.9, 0.9};  // stage 1 bound too optimistic
  try {
    run_anneal(config);
    FAIL() << "expected precondition error";
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), errc::precondition);
    EXPECT_NE(std::string(e.what()).find("stage 1"), std::string::npos);
  }
}

TEST(RunAnneal, ConfigValidation) {
  AnnealConfig config;
  config.eps = 0.1;
  EXPECT_THROW(run_anneal(config), error);  // no chains
  config = ladder22_config(1.5);
  EXPECT_THROW(run_anneal(config), error);  // bad eps
  config = ladder22_config(0.1);
  config.chains.push_back(build_glauber_chain(IsingLadder::open(1), 0.0, true));
  EXPECT_THROW(run_anneal(config), error);  // mismatched state spaces
}

TEST(RunAnneal, MarginalIsNormalizedDistribution) {
  AnnealReport report = run_anneal(ladder22_config(0.2));
  EXPECT_NEAR(report.final_marginal.sum(), 1.0, 1e-10);
  EXPECT_GE(report.final_marginal.minCoeff(), 0.0);
}
