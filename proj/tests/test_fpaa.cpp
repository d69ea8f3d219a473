#include <gtest/gtest.h>

#include <complex>

#include "qsa/fpaa.hpp"
#include "qsa/verify.hpp"
#include "test_oracles.hpp"

using namespace qsa;
using cd = std::complex<double>;

namespace {

MarkovChain ladder22(double beta) { return build_glauber_chain(IsingLadder::open(2), beta, true); }

struct StagePieces {
  WalkSpectrum spec_s, spec_t;
  OracleUnitary oracle_s, oracle_t;
  double p_actual = 0.0;
};

StagePieces make_pieces(const MarkovChain& a, const MarkovChain& b) {
  StagePieces pieces{walk_spectrum(a), walk_spectrum(b), build_oracle_unitary(a),
                     build_oracle_unitary(b), 0.0};
  double ov = a.pi.cwiseSqrt().dot(b.pi.cwiseSqrt());
  pieces.p_actual = ov * ov;
  return pieces;
}

}  // namespace

TEST(Schedule, AnchorLengthSeven) {
  PhaseSchedule sched = make_schedule(0.25, 0.1);
  EXPECT_EQ(sched.L, 7);
  EXPECT_EQ(sched.alphas.size(), 3);
  EXPECT_EQ(sched.betas.size(), 3);
  // the L = 5 threshold is above sqrt(p) and L = 7 below, per the gamma rule
  double a = std::acosh(1.0 / 0.1);
  double g5 = 1.0 / std::cosh(a / 5), g7 = 1.0 / std::cosh(a / 7);
  EXPECT_NEAR(std::sqrt(1.0 - g5 * g5), 0.536, 2e-3);
  EXPECT_NEAR(std::sqrt(1.0 - g7 * g7), 0.403, 2e-3);
  EXPECT_GT(std::sqrt(1.0 - g5 * g5), 0.5);
  EXPECT_LE(std::sqrt(1.0 - g7 * g7), 0.5);
}

TEST(Schedule, PerfectOverlapGivesEmptyWord) {
  PhaseSchedule sched = make_schedule(1.0, 0.1);
  EXPECT_EQ(sched.L, 1);
  EXPECT_EQ(sched.alphas.size(), 0);
  Fpaa2dResult res = ideal_fpaa_2d(0.9, sched);
  EXPECT_NEAR(res.trace_distance, std::sqrt(1.0 - 0.9), 1e-12);
  EXPECT_NEAR(ideal_fpaa_2d(1.0, sched).trace_distance, 0.0, 1e-12);
}

TEST(Schedule, LengthScalingUnderOverlapHalving) {
  for (double p : {0.4, 0.1, 0.02}) {
    int L1 = make_schedule(p, 0.005).L;
    int L2 = make_schedule(p / 4.0, 0.005).L;  // doubles 1/sqrt(p)
    EXPECT_LE(L2 + 1, 2 * (L1 + 1));
    EXPECT_GT(L2, L1);
  }
}

TEST(Schedule, ParameterValidation) {
  EXPECT_THROW(make_schedule(0.0, 0.1), error);
  EXPECT_THROW(make_schedule(-0.2, 0.1), error);
  EXPECT_THROW(make_schedule(0.5, 0.0), error);
  EXPECT_THROW(make_schedule(0.5, 1.0), error);
}

TEST(Ideal2D, FixedPointSweepForAnchorSchedule) {
  PhaseSchedule sched = make_schedule(0.25, 0.1);
  for (int i = 0; i < 50; ++i) {
    double p = 0.25 + 0.75 * i / 49.0;
    EXPECT_LE(ideal_fpaa_2d(p, sched).trace_distance, 0.1 + 1e-12);
  }
  EXPECT_NEAR(ideal_fpaa_2d(1.0, sched).trace_distance, 0.0, 1e-10);
}

TEST(Ideal2D, MatchesClosedFormChebyshevProfile) {
  for (auto [p_lower, eps] : std::vector<std::pair<double, double>>{
           {0.25, 0.1}, {1.0 / 15.0, 0.005}, {0.5, 1e-3}}) {
    PhaseSchedule sched = make_schedule(p_lower, eps);
    for (int i = 0; i < 40; ++i) {
      double p = p_lower + (1.0 - p_lower) * i / 39.0;
      double expected = oracle::fpaa_closed_form(p, sched.L, eps, sched.gamma);
      EXPECT_NEAR(ideal_fpaa_2d(p, sched).trace_distance, expected, 1e-10)
          << "p_lower=" << p_lower << " eps=" << eps << " p=" << p;
    }
  }
}

TEST(Ideal2D, SoundnessOverParameterGrid) {
  for (double p_lower : {1.0 / 15.0, 0.1, 0.25, 0.5})
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      PhaseSchedule sched = make_schedule(p_lower, eps);
      EXPECT_LE(fpaa_worst_trace_distance(sched), eps + 1e-9)
          << "p_lower=" << p_lower << " eps=" << eps;
    }
}

TEST(CompiledStage, ExactProjectorModeMatchesIdealWord) {
  // two-state pair
  {
    Eigen::MatrixXd pa(2, 2), pb(2, 2);
    pa << 0.5, 0.5, 0.5, 0.5;
    pb << 0.85, 0.15, 0.35, 0.65;  // stationary (0.7, 0.3)
    StagePieces pieces = make_pieces(MarkovChain::from_matrix(pa), MarkovChain::from_matrix(pb));
    PhaseSchedule sched = make_schedule(round_down_sig3(pieces.p_actual), 0.05);
    GadgetBundle src{&pieces.spec_s, nullptr, &pieces.oracle_s, true};
    GadgetBundle tgt{&pieces.spec_t, nullptr, &pieces.oracle_t, true};
    JointState s0 = embed_clean(pieces.spec_s.chain.pi.cwiseSqrt());
    StageOutcome outcome = compiled_stage(s0, src, tgt, sched);
    EXPECT_EQ(outcome.queries, 0);
    EXPECT_NEAR(outcome.trace_distance, ideal_fpaa_2d(pieces.p_actual, sched).trace_distance,
                1e-9);
  }
  // Glauber 2x2 pair
  {
    StagePieces pieces = make_pieces(ladder22(0.3), ladder22(0.6));
    PhaseSchedule sched = make_schedule(round_down_sig3(pieces.p_actual), 0.02);
    GadgetBundle src{&pieces.spec_s, nullptr, &pieces.oracle_s, true};
    GadgetBundle tgt{&pieces.spec_t, nullptr, &pieces.oracle_t, true};
    JointState s0 = embed_clean(pieces.spec_s.chain.pi.cwiseSqrt());
    StageOutcome outcome = compiled_stage(s0, src, tgt, sched);
    EXPECT_NEAR(outcome.trace_distance, ideal_fpaa_2d(pieces.p_actual, sched).trace_distance,
                1e-9);
  }
}

TEST(CompiledStage, CorollaryBoundAndIdealGap) {
  StagePieces pieces = make_pieces(ladder22(0.3), ladder22(0.6));
  for (double eps_fp : {1e-1, 1e-2})
    for (double eps_w : {1e-1, 1e-2, 1e-3}) {
      PhaseSchedule sched = make_schedule(round_down_sig3(pieces.p_actual), eps_fp);
      ChebyshevFilter fs = synthesize_filter(pieces.spec_s.phase_gap, eps_w);
      ChebyshevFilter ft = synthesize_filter(pieces.spec_t.phase_gap, eps_w);
      GadgetBundle src{&pieces.spec_s, &fs, &pieces.oracle_s, false};
      GadgetBundle tgt{&pieces.spec_t, &ft, &pieces.oracle_t, false};
      JointState s0 = embed_clean(pieces.spec_s.chain.pi.cwiseSqrt());
      StageOutcome outcome = compiled_stage(s0, src, tgt, sched);
      double bound = 2.0 * (sched.L - 1) * eps_w + eps_fp + 1e-8;
      EXPECT_LE(outcome.trace_distance, bound) << "eps_fp=" << eps_fp << " eps_w=" << eps_w;
      double ideal = ideal_fpaa_2d(pieces.p_actual, sched).trace_distance;
      EXPECT_LE(outcome.trace_distance - ideal, 2.0 * (sched.L - 1) * eps_w + 1e-8);
      // query accounting: (L-1)/2 pairs at (4d + 2) queries per gadget
      long long expected_queries =
          static_cast<long long>((sched.L - 1) / 2) * ((4 * fs.d + 2) + (4 * ft.d + 2));
      EXPECT_EQ(outcome.queries, expected_queries);
    }
}

TEST(CompiledStage, EmptyWordIsNoop) {
  StagePieces pieces = make_pieces(ladder22(0.3), ladder22(0.3));
  PhaseSchedule sched = make_schedule(1.0, 0.1);
  GadgetBundle src{&pieces.spec_s, nullptr, &pieces.oracle_s, true};
  GadgetBundle tgt{&pieces.spec_t, nullptr, &pieces.oracle_t, true};
  JointState s0 = embed_clean(pieces.spec_s.chain.pi.cwiseSqrt());
  StageOutcome outcome = compiled_stage(s0, src, tgt, sched);
  EXPECT_EQ(outcome.queries, 0);
  EXPECT_LT((outcome.state.anc0 - s0.anc0).norm(), 1e-15);
  EXPECT_NEAR(outcome.trace_distance, 0.0, 1e-12);
}

TEST(CompiledStage, UnitaryOnRandomJointStates) {
  StagePieces pieces = make_pieces(ladder22(0.3), ladder22(0.6));
  PhaseSchedule sched = make_schedule(round_down_sig3(pieces.p_actual), 0.05);
  ChebyshevFilter fs = synthesize_filter(pieces.spec_s.phase_gap, 1e-2);
  ChebyshevFilter ft = synthesize_filter(pieces.spec_t.phase_gap, 1e-2);
  GadgetBundle src{&pieces.spec_s, &fs, &pieces.oracle_s, false};
  GadgetBundle tgt{&pieces.spec_t, &ft, &pieces.oracle_t, false};
  Rng rng(51);
  for (int trial = 0; trial < 5; ++trial) {
    JointState s{rng.complex_grid(16, 16), rng.complex_grid(16, 16)};
    double norm = s.norm();
    s.anc0 /= norm;
    s.anc1 /= norm;
    StageOutcome outcome = compiled_stage(s, src, tgt, sched);
    EXPECT_NEAR(outcome.state.norm(), 1.0, 1e-9);
  }
}

TEST(Scaling, FpaaLengthSlope) {
  std::vector<double> xs, ys;
  const double eps_fp = 1e-2;
  for (double p = 1e-3; p <= 0.5 + 1e-12; p *= std::pow(500.0, 1.0 / 12.0)) {
    xs.push_back(std::log(1.0 / std::sqrt(p)));
    ys.push_back(std::log(make_schedule(p, eps_fp).L + 1.0));
  }
  double slope = least_squares_slope(xs, ys);
  EXPECT_GE(slope, 0.8);
  EXPECT_LE(slope, 1.2);
}
