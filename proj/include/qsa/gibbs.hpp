#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qsa/anneal.hpp"
#include "qsa/error.hpp"
#include "qsa/markov.hpp"

namespace qsa {

// Gibbs distribution mu_beta(x) = exp(-beta H(x))/Z(beta) of the
// unsatisfied-bond count on an Ising ladder, with the H-level histogram
// precomputed once so Z(beta) is an O(n_max) evaluation.
struct GibbsModel {
  IsingLadder ladder;
  std::vector<double> betas;
  std::vector<long long> level_counts;  // N_k = #{x : H(x) = k}
  int n_max = 0;                        // bond count
};

inline GibbsModel make_gibbs_model(IsingLadder ladder, std::vector<double> betas) {
  require(ladder.spins() <= 20, errc::size_guard, "state space enumerable up to 20 spins");
  require(!betas.empty(), errc::invalid_parameter, "need at least one inverse temperature");
  for (double beta : betas)
    require(std::isfinite(beta) && beta >= 0.0, errc::invalid_parameter,
            "inverse temperatures must be finite and nonnegative");
  GibbsModel model;
  model.n_max = ladder.bond_count();
  model.level_counts.assign(model.n_max + 1, 0);
  const long long count = ladder.state_count();
  for (long long x = 0; x < count; ++x)
    ++model.level_counts[ladder.unsat_bonds(static_cast<std::uint32_t>(x))];
  model.ladder = std::move(ladder);
  model.betas = std::move(betas);
  return model;
}

inline double partition_function(const GibbsModel& model, double beta) {
  require(std::isfinite(beta), errc::invalid_parameter, "beta must be finite");
  long double z = 0.0L;
  for (int k = 0; k <= model.n_max; ++k)
    z += static_cast<long double>(model.level_counts[k]) * std::exp(-static_cast<long double>(beta) * k);
  return static_cast<double>(z);
}

// |<mu_i | mu_j>|^2 = Z((b_i+b_j)/2)^2 / (Z(b_i) Z(b_j)), cross-checked
// against the direct inner product of the two amplitude vectors.
inline double gibbs_overlap(const GibbsModel& model, double beta_i, double beta_j) {
  require(beta_i >= 0.0 && beta_j >= 0.0, errc::invalid_parameter, "betas must be nonnegative");
  double z_i = partition_function(model, beta_i);
  double z_j = partition_function(model, beta_j);
  double z_mid = partition_function(model, 0.5 * (beta_i + beta_j));
  double overlap = (z_mid / z_i) * (z_mid / z_j);

  long double dot = 0.0L;
  const long long count = model.ladder.state_count();
  for (long long x = 0; x < count; ++x) {
    long double h = model.ladder.unsat_bonds(static_cast<std::uint32_t>(x));
    dot += std::exp(-0.5L * (beta_i + beta_j) * h);
  }
  long double direct = dot / std::sqrt(static_cast<long double>(z_i) * z_j);
  double direct_sq = static_cast<double>(direct * direct);
  require(std::abs(direct_sq - overlap) <= 1e-12, errc::numeric_failure,
          "partition-function overlap identity violated by " +
              std::to_string(std::abs(direct_sq - overlap)));
  return overlap;
}

struct ScheduleCheck {
  double min_overlap = 1.0;
  bool pass = true;
  double ell_ratio = 0.0;  // ell / sqrt(ln|Omega| ln n_max), informational
};

inline ScheduleCheck verify_schedule(const GibbsModel& model) {
  for (std::size_t i = 0; i + 1 < model.betas.size(); ++i)
    require(model.betas[i] <= model.betas[i + 1], errc::precondition,
            "inverse temperatures must be nondecreasing");
  ScheduleCheck check;
  for (std::size_t i = 0; i + 1 < model.betas.size(); ++i)
    check.min_overlap =
        std::min(check.min_overlap, gibbs_overlap(model, model.betas[i], model.betas[i + 1]));
  check.pass = check.min_overlap >= 1.0 / 15.0;
  const double ell = static_cast<double>(model.betas.size()) - 1.0;
  double denom = std::sqrt(model.ladder.spins() * M_LN2 * std::log(std::max(model.n_max, 1)));
  check.ell_ratio = denom > 0.0 ? ell / denom : 0.0;
  return check;
}

inline Eigen::VectorXd gibbs_distribution(const GibbsModel& model, double beta) {
  const long long count = model.ladder.state_count();
  Eigen::VectorXd mu(count);
  for (long long x = 0; x < count; ++x)
    mu(x) = std::exp(-beta * model.ladder.unsat_bonds(static_cast<std::uint32_t>(x)));
  mu /= mu.sum();
  return mu;
}

// Full pipeline: lazified Glauber chains at each beta, annealed by run_anneal.
inline AnnealReport gibbs_qsample_run(const GibbsModel& model, double eps,
                                      RunMode mode = RunMode::compiled) {
  ScheduleCheck check = verify_schedule(model);
  require(check.pass, errc::precondition,
          "cooling schedule fails the 1/15 overlap threshold, min overlap " +
              std::to_string(check.min_overlap));
  if (model.betas.size() == 1) {
    // Single temperature: the initial QSample is already exact.
    MarkovChain chain = build_glauber_chain(model.ladder, model.betas.front(), true);
    AnnealReport report;
    report.eps = eps;
    report.mode = mode;
    report.register_qubits = 2 * static_cast<int>(std::ceil(std::log2(chain.n))) + 1;
    report.final_marginal = chain.pi;
    report.tvd_final = 0.0;
    return report;
  }
  AnnealConfig config;
  config.eps = eps;
  config.mode = mode;
  for (double beta : model.betas)
    config.chains.push_back(build_glauber_chain(model.ladder, beta, true));
  AnnealReport report = run_anneal(config);
  require(report.tvd_final <= report.final_d_tr + 1e-8, errc::certification,
          "measured TVD exceeds the trace-distance certificate");
  return report;
}

}  // namespace qsa
