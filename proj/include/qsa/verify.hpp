#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "qsa/cost.hpp"
#include "qsa/error.hpp"
#include "qsa/fpaa.hpp"
#include "qsa/gadget.hpp"
#include "qsa/random.hpp"

namespace qsa {

// Parallelism degree for the embarrassingly parallel sweeps; QSA_THREADS
// overrides, default 1. Work items are seeded independently of scheduling,
// so results do not depend on this value.
inline int parallelism() {
  if (const char* env = std::getenv("QSA_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

template <typename Fn>
inline void parallel_for(int count, Fn&& fn) {
  int threads = std::min(parallelism(), count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t item) {
  return seed ^ (0x9E3779B97F4A7C15ull * (item + 1));
}

// Least-squares slope of y against x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, errc::invalid_parameter, "need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  require(den > 0.0, errc::invalid_parameter, "degenerate abscissa");
  return num / den;
}

// ||Upsilon(W) - Pi_0|| evaluated spectrally: the maximum of |Upsilon| over
// the nonzero busy eigenphases and, when the swap-symmetric complement is
// nonempty, the complement phase pi. The antisymmetric complement sits in the
// 1-eigenspace where Upsilon(0) - 1 = 0.
inline double filter_operator_norm(const WalkSpectrum& spec, const ChebyshevFilter& filter) {
  double worst = 0.0;
  for (int k = 0; k < spec.busy_dim; ++k)
    if (spec.busy_phases(k) != 0.0)
      worst = std::max(worst, std::abs(filter.eval(spec.busy_phases(k))));
  if (spec.complement_sym_dim > 0) worst = std::max(worst, std::abs(filter.eval(M_PI)));
  return worst;
}

struct GadgetBoundSample {
  int chain_index = 0;
  int n = 0;
  double phi = 0.0;
  double eps_w = 0.0;
  double error_norm = 0.0;
};

// Proposition-1 sweep: gadget error norms over seeded random reversible
// chains crossed with phase angles and filter targets.
inline std::vector<GadgetBoundSample> gadget_bound_sweep(int trials,
                                                         const std::vector<double>& phis,
                                                         const std::vector<double>& eps_list,
                                                         std::uint64_t seed) {
  std::vector<GadgetBoundSample> rows(trials * phis.size() * eps_list.size());
  parallel_for(trials, [&](int t) {
    Rng rng(mix_seed(seed, t));
    int n = 2 + static_cast<int>(rng.raw() % 15);  // n in {2, ..., 16}
    MarkovChain chain = random_reversible_chain(n, rng);
    WalkSpectrum spec = walk_spectrum(chain);
    std::size_t base = static_cast<std::size_t>(t) * phis.size() * eps_list.size();
    for (std::size_t pi_idx = 0; pi_idx < phis.size(); ++pi_idx) {
      for (std::size_t e_idx = 0; e_idx < eps_list.size(); ++e_idx) {
        ChebyshevFilter filter = synthesize_filter(spec.phase_gap, eps_list[e_idx]);
        SelectivePhaseGadget g = build_gadget(spec, filter, phis[pi_idx]);
        GadgetBoundSample sample;
        sample.chain_index = t;
        sample.n = n;
        sample.phi = phis[pi_idx];
        sample.eps_w = filter.achieved_eps;
        sample.error_norm = gadget_error_norm(g);
        rows[base + pi_idx * eps_list.size() + e_idx] = sample;
      }
    }
  });
  return rows;
}

// Worst ideal 2D trace distance over a p grid of [p_lower, 1].
inline double fpaa_worst_trace_distance(const PhaseSchedule& sched, int grid_points = 50) {
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    double p = sched.p_lower + (1.0 - sched.p_lower) * i / (grid_points - 1.0);
    worst = std::max(worst, ideal_fpaa_2d(p, sched).trace_distance);
  }
  return worst;
}

// Busy-subspace engine against the dense walk matrix on random vectors;
// returns the largest entrywise deviation.
inline double walk_engine_vs_dense(const MarkovChain& chain, std::uint64_t seed, int vectors = 50) {
  WalkSpectrum spec = walk_spectrum(chain);
  Eigen::MatrixXcd W = dense_walk_matrix(chain);
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < vectors; ++k) {
    LiftedVector u = rng.complex_grid(chain.n, chain.n);
    u /= u.norm();
    LiftedVector via_engine = apply_spectral_function(
        spec, [](double th) { return std::exp(std::complex<double>(0.0, th)); }, u);
    LiftedVector via_dense = grid_unflatten(W * grid_flatten(u), chain.n);
    worst = std::max(worst, (via_engine - via_dense).cwiseAbs().maxCoeff());
  }
  return worst;
}

struct ScalingFits {
  double fpaa_length_slope = 0.0;    // log(L+1) vs log(1/sqrt(p))
  double filter_degree_slope = 0.0;  // d vs (1/Delta) ln(1/eps)
  double our_query_slope = 0.0;      // log(queries) vs log(1/sqrt(p_min))
  double wocjan_query_slope = 0.0;   // same axis, comparison model
};

// Two-state chain with stationary (q, 1-q) and eigenvalues {1, 1-c}: the
// synthetic family for the overlap-scaling fits. q steers the adjacent
// overlap while the phase gap stays fixed.
inline MarkovChain two_state_chain(double q, double c) {
  Eigen::MatrixXd P(2, 2);
  P << 1.0 - (1.0 - q) * c, (1.0 - q) * c, q * c, 1.0 - q * c;
  Eigen::VectorXd pi(2);
  pi << q, 1.0 - q;
  return MarkovChain::from_matrix(P, pi);
}

inline ScalingFits scaling_fits() {
  ScalingFits fits;
  {
    std::vector<double> xs, ys;
    const double eps_fp = 1e-2;
    for (double p = 1e-3; p <= 0.5 + 1e-12; p *= std::pow(500.0, 1.0 / 12.0)) {
      PhaseSchedule sched = make_schedule(p, eps_fp);
      xs.push_back(std::log(1.0 / std::sqrt(p)));
      ys.push_back(std::log(sched.L + 1.0));
    }
    fits.fpaa_length_slope = least_squares_slope(xs, ys);
  }
  {
    std::vector<double> xs, ys;
    for (double delta = 0.05; delta <= 1.0 + 1e-12; delta *= std::pow(20.0, 1.0 / 6.0)) {
      for (double eps = 1e-1; eps >= 1e-6 / 2; eps *= 1e-1) {
        ChebyshevFilter filter = synthesize_filter(delta, eps);
        xs.push_back(std::log(1.0 / eps) / delta);
        ys.push_back(static_cast<double>(filter.d));
      }
    }
    fits.filter_degree_slope = least_squares_slope(xs, ys);
  }
  {
    // One-stage anneal between mirrored two-state chains: p = 4 q (1 - q).
    std::vector<double> xs, our_ys, wocjan_ys;
    const double eps = 1e-3, c = 0.5;
    const CostModel model;
    for (double p = 1e-3; p <= 0.5 + 1e-12; p *= std::pow(500.0, 1.0 / 12.0)) {
      double q = (1.0 - std::sqrt(1.0 - p)) / 2.0;
      MarkovChain a = two_state_chain(q, c);
      MarkovChain b = two_state_chain(1.0 - q, c);
      AnnealConfig config;
      config.chains = {a, b};
      config.eps = eps;
      config.p_lower_overrides = {p};
      std::vector<BenchmarkRow> rows = benchmark_sweep(config, {eps}, true, model);
      xs.push_back(std::log(1.0 / std::sqrt(p)));
      our_ys.push_back(std::log(rows[0].our_queries));
      wocjan_ys.push_back(std::log(rows[0].wocjan_queries));
    }
    fits.our_query_slope = least_squares_slope(xs, our_ys);
    fits.wocjan_query_slope = least_squares_slope(xs, wocjan_ys);
  }
  return fits;
}

}  // namespace qsa
