#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qsa/error.hpp"
#include "qsa/random.hpp"

namespace qsa {

inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kStationaryTol = 1e-10;
inline constexpr double kDetailedBalanceTol = 1e-10;

// Row-stochastic matrix P together with its stationary distribution and the
// spectral data produced by the discriminant eigensolve. Instances are
// immutable after construction and validated against the reversibility and
// stationarity tolerances above.
struct MarkovChain {
  int n = 0;
  Eigen::MatrixXd P;
  Eigen::VectorXd pi;
  double lambda2 = 0.0;
  double delta = 0.0;

  static MarkovChain from_matrix(Eigen::MatrixXd P,
                                 std::optional<Eigen::VectorXd> pi = std::nullopt);
};

// Entrywise sqrt(P(x,y) P(y,x)); symmetric for reversible chains and similar
// to P via diag(sqrt(pi)).
inline Eigen::MatrixXd discriminant(const Eigen::MatrixXd& P) {
  return (P.array() * P.transpose().array()).sqrt().matrix();
}

inline double detailed_balance_residual(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  Eigen::MatrixXd flow = pi.asDiagonal() * P;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

// Left eigenvector of eigenvalue 1, normalized to sum 1. Dense bordered solve
// up to n = 4096, power iteration above.
inline Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  require(n >= 1 && P.cols() == n, errc::invalid_parameter, "P must be square");
  Eigen::VectorXd pi(n);
  if (n <= 4096) {
    // pi^T (P - I) = 0 with sum(pi) = 1: replace the last equation of the
    // transposed singular system by the normalization row.
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    pi = A.partialPivLu().solve(b);
  } else {
    pi.setConstant(1.0 / n);
    bool converged = false;
    for (int it = 0; it < 200000; ++it) {
      Eigen::VectorXd next = P.transpose() * pi;
      next /= next.sum();
      double diff = (next - pi).cwiseAbs().maxCoeff();
      pi = next;
      if (diff < 1e-14) {
        converged = true;
        break;
      }
    }
    require(converged, errc::numeric_failure, "power iteration did not converge");
  }
  double residual = ((pi.transpose() * P).transpose() - pi).cwiseAbs().maxCoeff();
  require(std::isfinite(residual) && residual <= kStationaryTol, errc::numeric_failure,
          "stationary solve residual " + std::to_string(residual));
  require(pi.minCoeff() > 0.0, errc::numeric_failure,
          "stationary distribution not entrywise positive (chain not irreducible?)");
  return pi;
}

struct SpectralGap {
  double lambda2;
  double delta;
};

namespace detail {

inline SpectralGap spectral_gap_impl(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  double rev = detailed_balance_residual(P, pi);
  require(rev <= kDetailedBalanceTol, errc::reversibility_violation,
          "detailed balance residual " + std::to_string(rev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(discriminant(P));
  require(es.info() == Eigen::Success, errc::numeric_failure, "discriminant eigensolve failed");
  const auto& ev = es.eigenvalues();  // ascending
  const int n = static_cast<int>(ev.size());
  require(n >= 2, errc::invalid_parameter, "chain needs at least 2 states");
  double lambda2 = ev(n - 2);
  return {lambda2, 1.0 - lambda2};
}

}  // namespace detail

inline SpectralGap spectral_gap(const MarkovChain& chain) {
  return detail::spectral_gap_impl(chain.P, chain.pi);
}

inline MarkovChain MarkovChain::from_matrix(Eigen::MatrixXd P,
                                            std::optional<Eigen::VectorXd> pi_opt) {
  const int n = static_cast<int>(P.rows());
  require(n >= 2 && P.cols() == n, errc::invalid_parameter,
          "transition matrix must be square with n >= 2");
  require(P.allFinite(), errc::invalid_parameter, "transition matrix has non-finite entries");
  require(P.minCoeff() >= 0.0, errc::invalid_parameter, "negative transition probability");
  for (int x = 0; x < n; ++x) {
    double rowsum = P.row(x).sum();
    require(std::abs(rowsum - 1.0) <= kRowSumTol, errc::invalid_parameter,
            "row " + std::to_string(x) + " sums to " + std::to_string(rowsum));
  }
  Eigen::VectorXd pi;
  if (pi_opt) {
    pi = std::move(*pi_opt);
    require(static_cast<int>(pi.size()) == n, errc::invalid_parameter, "pi has wrong length");
    require(pi.minCoeff() > 0.0 && std::abs(pi.sum() - 1.0) <= 1e-10, errc::invalid_parameter,
            "pi is not a positive distribution");
    double residual = ((pi.transpose() * P).transpose() - pi).cwiseAbs().maxCoeff();
    require(residual <= kStationaryTol, errc::invalid_parameter,
            "supplied pi is not stationary, residual " + std::to_string(residual));
  } else {
    pi = stationary_distribution(P);
  }
  SpectralGap gap = detail::spectral_gap_impl(P, pi);
  MarkovChain chain;
  chain.n = n;
  chain.P = std::move(P);
  chain.pi = std::move(pi);
  chain.lambda2 = gap.lambda2;
  chain.delta = gap.delta;
  return chain;
}

// P -> (I + P)/2. Stationary distribution is untouched and every eigenvalue
// maps through (1 + x)/2, so the spectrum becomes nonnegative.
inline MarkovChain lazify(const MarkovChain& chain) {
  MarkovChain out;
  out.n = chain.n;
  out.P = 0.5 * (chain.P + Eigen::MatrixXd::Identity(chain.n, chain.n));
  out.pi = chain.pi;
  out.lambda2 = 0.5 * (1.0 + chain.lambda2);
  out.delta = 0.5 * chain.delta;
  return out;
}

// Open-boundary 2 x cols ferromagnetic Ising ladder. Spin s of configuration
// x is bit s; H counts unsatisfied bonds, so H(all-up) = 0 and H is invariant
// under the global spin flip.
struct IsingLadder {
  int cols = 0;
  std::vector<std::pair<int, int>> bonds;

  static IsingLadder open(int cols) {
    require(cols >= 1, errc::invalid_parameter, "ladder needs at least one rung");
    IsingLadder ladder;
    ladder.cols = cols;
    for (int c = 0; c < cols; ++c) ladder.bonds.emplace_back(2 * c, 2 * c + 1);  // rungs
    for (int c = 0; c + 1 < cols; ++c) {
      ladder.bonds.emplace_back(2 * c, 2 * (c + 1));          // bottom rail
      ladder.bonds.emplace_back(2 * c + 1, 2 * (c + 1) + 1);  // top rail
    }
    return ladder;
  }

  int spins() const { return 2 * cols; }
  long long state_count() const { return 1LL << spins(); }
  int bond_count() const { return static_cast<int>(bonds.size()); }

  int unsat_bonds(std::uint32_t config) const {
    int h = 0;
    for (const auto& [a, b] : bonds) h += static_cast<int>((config >> a ^ config >> b) & 1u);
    return h;
  }
};

// Random-scan single-site heat-bath dynamics: G = (1/m) sum_s G_s where G_s
// resamples spin s from its conditional under the Gibbs distribution of the
// unsatisfied-bond count at inverse temperature beta.
inline MarkovChain build_glauber_chain(const IsingLadder& ladder, double beta, bool lazy) {
  require(std::isfinite(beta), errc::invalid_parameter, "beta must be finite");
  require(beta >= 0.0, errc::invalid_parameter, "beta must be nonnegative");
  const int m = ladder.spins();
  require(m <= 12, errc::size_guard, "dense Glauber chain limited to 12 spins");
  const int n = static_cast<int>(ladder.state_count());
  require(beta * ladder.bond_count() < 700.0, errc::invalid_parameter,
          "beta too large for exact Gibbs weights");

  std::vector<int> H(n);
  for (int x = 0; x < n; ++x) H[x] = ladder.unsat_bonds(static_cast<std::uint32_t>(x));

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int s = 0; s < m; ++s) {
      int xup = x | (1 << s);
      int xdn = x & ~(1 << s);
      // p(up | rest) = 1 / (1 + e^{-beta (H(dn) - H(up))}), stable for all beta
      double p_up = 1.0 / (1.0 + std::exp(-beta * static_cast<double>(H[xdn] - H[xup])));
      G(x, xup) += p_up / m;
      G(x, xdn) += (1.0 - p_up) / m;
    }
  }

  Eigen::VectorXd weights(n);
  for (int x = 0; x < n; ++x) weights(x) = std::exp(-beta * H[x]);
  Eigen::VectorXd pi = weights / weights.sum();

  MarkovChain chain = MarkovChain::from_matrix(std::move(G), pi);
  return lazy ? lazify(chain) : chain;
}

// Symmetric-weight recipe: P(x,y) = W(x,y)/w(x) with W symmetric positive is
// reversible for pi = w/sum(w), irreducible, and aperiodic. The result is
// lazified so the spectrum is nonnegative and delta stays in (0, 1]. Used by
// the randomized verification suites.
inline MarkovChain random_reversible_chain(int n, Rng& rng) {
  require(n >= 2, errc::invalid_parameter, "need n >= 2");
  Eigen::MatrixXd W(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      double v = rng.uniform(0.1, 1.0);
      W(x, y) = v;
      W(y, x) = v;
    }
  Eigen::VectorXd w = W.rowwise().sum();
  Eigen::MatrixXd P = w.cwiseInverse().asDiagonal() * W;
  // Renormalize rows exactly so validation sees row sums at machine precision.
  for (int x = 0; x < n; ++x) P.row(x) /= P.row(x).sum();
  return lazify(MarkovChain::from_matrix(std::move(P), std::nullopt));
}

}  // namespace qsa
