#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "qsa/error.hpp"
#include "qsa/fpaa.hpp"

namespace qsa {

enum class RunMode { compiled, exact_projector };

struct AnnealConfig {
  std::vector<MarkovChain> chains;          // ell + 1 chains on the same state space
  double eps = 0.1;                         // total trace-distance budget
  std::vector<double> p_lower_overrides;    // optional, one per stage
  RunMode mode = RunMode::compiled;
};

struct StageBudget {
  double eps_fp = 0.0;
  double eps_w = 0.0;  // unused when L == 1
  int L = 1;
};

// Uniform split eps_i = eps/ell, then eps_fp = eps_i/2 and
// eps_w = eps_i/(4(L-1)) once the schedule length is known.
inline std::vector<StageBudget> budget_errors(double eps, int ell,
                                              const std::vector<double>& p_bounds) {
  require(eps > 0.0 && eps < 1.0, errc::invalid_parameter, "eps must be in (0, 1)");
  require(ell >= 1, errc::invalid_parameter, "need at least one stage");
  require(static_cast<int>(p_bounds.size()) == ell, errc::invalid_parameter,
          "need one overlap bound per stage");
  std::vector<StageBudget> budgets(ell);
  const double eps_i = eps / ell;
  for (int i = 0; i < ell; ++i) {
    require(p_bounds[i] > 0.0 && p_bounds[i] <= 1.0, errc::invalid_parameter,
            "overlap bound must be in (0, 1]");
    StageBudget b;
    b.eps_fp = eps_i / 2.0;
    b.L = make_schedule(p_bounds[i], b.eps_fp).L;
    b.eps_w = b.L > 1 ? eps_i / (4.0 * (b.L - 1)) : 0.0;
    budgets[i] = b;
  }
  return budgets;
}

struct StageReport {
  int i = 0;
  double p_bound = 1.0;
  double p_actual = 1.0;
  int L = 1;
  double eps_fp = 0.0;
  double eps_w = 0.0;
  int d_source = 0;
  int d_target = 0;
  long long queries = 0;
  double d_tr_measured = 0.0;
};

struct AnnealReport {
  std::vector<StageReport> stages;
  long long total_queries = 0;
  double final_d_tr = 0.0;
  int ancilla_count = 1;
  int register_qubits = 0;  // 2 ceil(log2 n) + 1
  double eps = 0.0;
  RunMode mode = RunMode::compiled;
  double tvd_final = 0.0;           // Born-marginal TVD against pi_ell
  Eigen::VectorXd final_marginal;   // measured distribution of the system register
};

inline double trace_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  require(a.size() == b.size(), errc::invalid_parameter, "dimension mismatch");
  require(std::abs(a.norm() - 1.0) <= 1e-8 && std::abs(b.norm() - 1.0) <= 1e-8,
          errc::invalid_state, "states must be normalized");
  double ov = std::min(std::abs(a.dot(b)), 1.0);
  return std::sqrt(std::max(0.0, 1.0 - ov * ov));
}

inline double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  require(p.size() == q.size(), errc::invalid_parameter, "dimension mismatch");
  require(std::abs(p.sum() - 1.0) <= 1e-8 && std::abs(q.sum() - 1.0) <= 1e-8,
          errc::invalid_state, "distributions must sum to 1");
  return 0.5 * (p - q).cwiseAbs().sum();
}

// Measurement distribution of the system register of a joint state.
inline Eigen::VectorXd born_marginal(const JointState& s) {
  return (s.anc0.cwiseAbs2() + s.anc1.cwiseAbs2()).rowwise().sum();
}

// Exact overlap bound rounded down to 3 significant figures; the default
// per-stage bound when no override is supplied.
inline double round_down_sig3(double p) {
  if (p >= 1.0) return 1.0;
  if (p <= 0.0) return 0.0;
  int k = 2 - static_cast<int>(std::floor(std::log10(p)));
  double scale = std::pow(10.0, k);
  return std::floor(p * scale) / scale;
}

inline AnnealReport run_anneal(const AnnealConfig& config) {
  const int ell = static_cast<int>(config.chains.size()) - 1;
  require(ell >= 1, errc::configuration, "need at least two chains");
  require(config.eps > 0.0 && config.eps < 1.0, errc::configuration, "eps must be in (0, 1)");
  const int n = config.chains.front().n;
  for (const auto& chain : config.chains)
    require(chain.n == n, errc::configuration, "all chains must share the state space");
  require(config.p_lower_overrides.empty() ||
              static_cast<int>(config.p_lower_overrides.size()) == ell,
          errc::configuration, "need one overlap override per stage");

  std::vector<double> p_actual(ell), p_bound(ell);
  for (int i = 0; i < ell; ++i) {
    double ov = config.chains[i].pi.cwiseSqrt().dot(config.chains[i + 1].pi.cwiseSqrt());
    p_actual[i] = std::min(ov * ov, 1.0);
    p_bound[i] = config.p_lower_overrides.empty() ? round_down_sig3(p_actual[i])
                                                  : config.p_lower_overrides[i];
    require(p_actual[i] >= p_bound[i] - 1e-15, errc::precondition,
            "stage " + std::to_string(i) + ": actual overlap " + std::to_string(p_actual[i]) +
                " below bound " + std::to_string(p_bound[i]));
  }

  std::vector<StageBudget> budgets = budget_errors(config.eps, ell, p_bound);

  std::vector<WalkSpectrum> spectra;
  std::vector<OracleUnitary> oracles;
  spectra.reserve(ell + 1);
  oracles.reserve(ell + 1);
  for (const auto& chain : config.chains) {
    spectra.push_back(walk_spectrum(chain));
    oracles.push_back(build_oracle_unitary(chain));
  }

  AnnealReport report;
  report.eps = config.eps;
  report.mode = config.mode;
  report.register_qubits = 2 * static_cast<int>(std::ceil(std::log2(n))) + 1;

  JointState state = embed_clean(config.chains.front().pi.cwiseSqrt());
  const double eps_i = config.eps / ell;
  for (int i = 0; i < ell; ++i) {
    const StageBudget& budget = budgets[i];
    PhaseSchedule sched = make_schedule(p_bound[i], budget.eps_fp);
    StageReport sr;
    sr.i = i;
    sr.p_bound = p_bound[i];
    sr.p_actual = p_actual[i];
    sr.L = sched.L;
    sr.eps_fp = budget.eps_fp;
    sr.eps_w = budget.eps_w;

    GadgetBundle source{&spectra[i], nullptr, &oracles[i], false};
    GadgetBundle target{&spectra[i + 1], nullptr, &oracles[i + 1], false};
    ChebyshevFilter fs, ft;
    if (config.mode == RunMode::exact_projector) {
      source.exact = target.exact = true;
    } else if (sched.L > 1) {
      fs = synthesize_filter(spectra[i].phase_gap, budget.eps_w);
      ft = synthesize_filter(spectra[i + 1].phase_gap, budget.eps_w);
      source.filter = &fs;
      target.filter = &ft;
      sr.d_source = fs.d;
      sr.d_target = ft.d;
    }

    StageOutcome outcome = compiled_stage(std::move(state), source, target, sched);
    state = std::move(outcome.state);
    sr.queries = outcome.queries;
    sr.d_tr_measured = outcome.trace_distance;
    report.total_queries += sr.queries;

    // Telescoping certificate: distance after stage i is at most (i+1) eps_i.
    require(sr.d_tr_measured <= (i + 1) * eps_i + 1e-8, errc::certification,
            "stage " + std::to_string(i) + " exceeded its error budget: " +
                std::to_string(sr.d_tr_measured));
    report.stages.push_back(sr);
  }

  report.final_d_tr = report.stages.back().d_tr_measured;
  report.final_marginal = born_marginal(state);
  report.tvd_final = tv_distance(report.final_marginal, config.chains.back().pi);
  return report;
}

}  // namespace qsa
