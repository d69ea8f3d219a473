#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "qsa/error.hpp"
#include "qsa/markov.hpp"

namespace qsa {

// Vector in the doubled walk space H_W = C^n (x) C^n, stored as the n x n
// amplitude grid u(x, y).
using LiftedVector = Eigen::MatrixXcd;

inline constexpr double kRankTol = 1e-10;
inline constexpr double kPhaseSnapTol = 1e-12;

// T: v |-> sum_x v(x) |x>|P(x,.)>, an isometry because rows of P sum to 1.
inline LiftedVector lift_state(const MarkovChain& chain, const Eigen::VectorXcd& v) {
  require(v.size() == chain.n, errc::invalid_parameter, "vector length mismatch");
  Eigen::MatrixXd sq = chain.P.cwiseSqrt();
  return v.asDiagonal() * sq.cast<std::complex<double>>();
}

// T^dagger: u |-> v with v(x) = sum_y sqrt(P(x,y)) u(x,y).
inline Eigen::VectorXcd unlift_state(const MarkovChain& chain, const LiftedVector& u) {
  require(u.rows() == chain.n && u.cols() == chain.n, errc::invalid_parameter,
          "grid shape mismatch");
  Eigen::MatrixXd sq = chain.P.cwiseSqrt();
  return (sq.cast<std::complex<double>>().cwiseProduct(u)).rowwise().sum();
}

// W = (2TT^dagger - I) S applied matrix-free: transpose the grid, then apply
// the rank-n reflection row by row. O(n^2).
inline LiftedVector apply_walk(const MarkovChain& chain, const LiftedVector& u) {
  require(u.rows() == chain.n && u.cols() == chain.n, errc::invalid_parameter,
          "grid shape mismatch");
  Eigen::MatrixXd sq = chain.P.cwiseSqrt();
  LiftedVector su = u.transpose();
  Eigen::VectorXcd a = (sq.cast<std::complex<double>>().cwiseProduct(su)).rowwise().sum();
  return 2.0 * (a.asDiagonal() * sq.cast<std::complex<double>>()) - su;
}

// Row-major flattening |x,y> -> x*n + y shared by the dense test oracles.
inline Eigen::VectorXcd grid_flatten(const LiftedVector& u) {
  const int n = static_cast<int>(u.rows());
  Eigen::VectorXcd v(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) v(x * n + y) = u(x, y);
  return v;
}

inline LiftedVector grid_unflatten(const Eigen::VectorXcd& v, int n) {
  LiftedVector u(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) u(x, y) = v(x * n + y);
  return u;
}

// Explicit N^2 x N^2 matrix of W for use as a small-n test oracle.
inline Eigen::MatrixXcd dense_walk_matrix(const MarkovChain& chain) {
  require(chain.n <= 16, errc::size_guard, "dense walk matrix limited to n <= 16");
  const int n = chain.n;
  const int N = n * n;
  Eigen::MatrixXcd W(N, N);
  for (int k = 0; k < N; ++k) {
    LiftedVector e = LiftedVector::Zero(n, n);
    e(k / n, k % n) = 1.0;
    W.col(k) = grid_flatten(apply_walk(chain, e));
  }
  return W;
}

// Spectral data of W on the busy subspace B = col(T) + S col(T), plus the
// closed-form treatment of the complement, where W = -S. Every vector of B is
// parameterized as T v + S T w by a pair (v, w) in C^{2n}; the induced Gram
// blocks are [[I, D], [D, I]] and W acts as (v, w) |-> (w + 2 D v, -v), so the
// whole reduction runs in the 2n-dimensional parameter space.
class WalkSpectrum {
 public:
  MarkovChain chain;
  Eigen::MatrixXd sqrtP;
  Eigen::MatrixXd D;

  Eigen::MatrixXd basis_v;        // n x r, column k holds v_k
  Eigen::MatrixXd basis_w;        // n x r, column k holds w_k
  int busy_dim = 0;               // r
  Eigen::VectorXd busy_phases;    // theta_k in (-pi, pi], snapped at 0
  Eigen::MatrixXcd busy_vectors;  // r x r eigenvectors in busy-basis coordinates
  double phase_gap = 0.0;
  int complement_sym_dim = 0;     // contributes eigenphase pi
  int complement_antisym_dim = 0; // contributes eigenphase 0 (part of the 1-eigenspace)

  const Eigen::VectorXd& sqrt_pi() const { return sqrt_pi_; }

  LiftedVector psi() const {
    return sqrt_pi_.cast<std::complex<double>>().asDiagonal() *
           sqrtP.cast<std::complex<double>>();
  }

  // Coefficients of the projection of u onto B in the orthonormal busy basis.
  Eigen::VectorXcd busy_coeffs(const LiftedVector& u) const {
    Eigen::MatrixXcd sqc = sqrtP.cast<std::complex<double>>();
    Eigen::VectorXcd t1 = sqc.cwiseProduct(u).rowwise().sum();
    Eigen::VectorXcd t2 = sqc.cwiseProduct(u.transpose()).rowwise().sum();
    return basis_v.transpose().cast<std::complex<double>>() * t1 +
           basis_w.transpose().cast<std::complex<double>>() * t2;
  }

  // Grid of sum_k e_k b_k for busy-basis coefficients e.
  LiftedVector materialize(const Eigen::VectorXcd& e) const {
    Eigen::VectorXcd vsum = basis_v.cast<std::complex<double>>() * e;
    Eigen::VectorXcd wsum = basis_w.cast<std::complex<double>>() * e;
    Eigen::MatrixXcd sqc = sqrtP.cast<std::complex<double>>();
    return vsum.asDiagonal() * sqc + (wsum.asDiagonal() * sqc).transpose();
  }

  LiftedVector basis_grid(int k) const {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(busy_dim);
    e(k) = 1.0;
    return materialize(e);
  }

 private:
  Eigen::VectorXd sqrt_pi_;
  friend WalkSpectrum walk_spectrum(const MarkovChain& chain);
};

namespace detail {

// Norm of T v + S T w computed entrywise over the grid. The Gram-form
// expression |v|^2 + |w|^2 + 2 Re<v, Dw> cancels catastrophically for
// parameters near the Gram nullspace, where this sum of squares stays exact.
inline double factored_grid_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& sq) {
  const int n = static_cast<int>(v.size());
  double s = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double a = v(x) * sq(x, y) + w(y) * sq(y, x);
      s += a * a;
    }
  return std::sqrt(s);
}

}  // namespace detail

inline WalkSpectrum walk_spectrum(const MarkovChain& chain) {
  require(chain.delta > 1e-12, errc::gap_too_small,
          "spectral gap too small for walk construction");
  const int n = chain.n;
  WalkSpectrum spec;
  spec.chain = chain;
  spec.sqrtP = chain.P.cwiseSqrt();
  spec.D = discriminant(chain.P);
  spec.sqrt_pi_ = chain.pi.cwiseSqrt();
  const Eigen::MatrixXd& D = spec.D;

  // Modified Gram-Schmidt with re-orthogonalization over the factored
  // candidates {(e_x, 0)} U {(0, e_x)}, rank tolerance 1e-10.
  std::vector<Eigen::VectorXd> vs, ws, Dvs, Dws;
  vs.reserve(2 * n);
  auto gdot = [&](int k, const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
    return vs[k].dot(v) + ws[k].dot(w) + Dvs[k].dot(w) + Dws[k].dot(v);
  };
  for (int cand = 0; cand < 2 * n; ++cand) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (cand < n)
      v(cand) = 1.0;
    else
      w(cand - n) = 1.0;
    double norm = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < vs.size(); ++k) {
        double c = gdot(static_cast<int>(k), v, w);
        v -= c * vs[k];
        w -= c * ws[k];
      }
      norm = detail::factored_grid_norm(v, w, spec.sqrtP);
    }
    if (norm <= kRankTol) continue;
    v /= norm;
    w /= norm;
    vs.push_back(v);
    ws.push_back(w);
    Dvs.push_back(D * v);
    Dws.push_back(D * w);
  }
  const int r = static_cast<int>(vs.size());
  require(r == 2 * n - 1, errc::structural,
          "busy-subspace rank " + std::to_string(r) + " inconsistent with ergodicity (expected " +
              std::to_string(2 * n - 1) + ")");

  spec.busy_dim = r;
  spec.basis_v.resize(n, r);
  spec.basis_w.resize(n, r);
  for (int k = 0; k < r; ++k) {
    spec.basis_v.col(k) = vs[k];
    spec.basis_w.col(k) = ws[k];
  }

  // Restriction of W to B is real orthogonal in this basis.
  Eigen::MatrixXd Wb(r, r);
  for (int l = 0; l < r; ++l) {
    Eigen::VectorXd iv = ws[l] + 2.0 * Dvs[l];
    Eigen::VectorXd iw = -vs[l];
    for (int k = 0; k < r; ++k) Wb(k, l) = gdot(k, iv, iw);
  }

  // Eigenphases via simultaneous diagonalization of the commuting Hermitian
  // cos and sin parts: cluster on cos, then split each cluster by sin.
  Eigen::MatrixXd H = 0.5 * (Wb + Wb.transpose());
  Eigen::MatrixXd A = 0.5 * (Wb - Wb.transpose());  // sin part = -i A
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hes(H);
  require(hes.info() == Eigen::Success, errc::numeric_failure, "walk eigensolve failed");
  const Eigen::VectorXd& cosv = hes.eigenvalues();
  const Eigen::MatrixXd& Q = hes.eigenvectors();

  spec.busy_phases.resize(r);
  spec.busy_vectors.resize(r, r);
  const std::complex<double> im(0.0, 1.0);
  int i = 0;
  while (i < r) {
    int j = i;
    while (j + 1 < r && cosv(j + 1) - cosv(i) < 1e-8) ++j;
    const int m = j - i + 1;
    Eigen::MatrixXd Qc = Q.middleCols(i, m);
    Eigen::MatrixXcd Kc = -im * (Qc.transpose() * A * Qc).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> kes(0.5 * (Kc + Kc.adjoint()));
    require(kes.info() == Eigen::Success, errc::numeric_failure, "walk eigensolve failed");
    Eigen::MatrixXcd Vc = Qc.cast<std::complex<double>>() * kes.eigenvectors();
    for (int t = 0; t < m; ++t) {
      double theta = std::atan2(kes.eigenvalues()(t), cosv(i + t));
      if (std::abs(theta) <= kPhaseSnapTol) theta = 0.0;
      spec.busy_phases(i + t) = theta;
      spec.busy_vectors.col(i + t) = Vc.col(t);
    }
    i = j + 1;
  }

  int zero_count = 0;
  int zero_index = -1;
  double min_nonzero = M_PI;
  for (int k = 0; k < r; ++k) {
    if (spec.busy_phases(k) == 0.0) {
      ++zero_count;
      zero_index = k;
    } else {
      min_nonzero = std::min(min_nonzero, std::abs(spec.busy_phases(k)));
    }
  }
  require(zero_count == 1, errc::structural,
          "expected a unique stationary eigenphase, found " + std::to_string(zero_count));

  // The zero-phase eigenvector must be psi = T|pi> up to global phase.
  Eigen::VectorXcd cpsi = spec.busy_coeffs(spec.psi());
  double overlap = std::abs(spec.busy_vectors.col(zero_index).dot(cpsi));
  require(overlap >= 1.0 - 1e-8, errc::structural,
          "stationary eigenvector does not match T|pi>, overlap " + std::to_string(overlap));

  // Swap acts on parameters as (v, w) |-> (w, v); the symmetric complement
  // sector carries eigenphase pi, the antisymmetric one eigenphase 0.
  double sym_b = 0.0;
  for (int k = 0; k < r; ++k)
    sym_b += 0.5 * (1.0 + gdot(k, ws[k], vs[k]));
  const long long total = static_cast<long long>(n) * n;
  const long long sym_total = static_cast<long long>(n) * (n + 1) / 2;
  spec.complement_sym_dim = static_cast<int>(sym_total - std::llround(sym_b));
  spec.complement_antisym_dim = static_cast<int>((total - r) - spec.complement_sym_dim);
  require(spec.complement_sym_dim >= 0 && spec.complement_antisym_dim >= 0, errc::structural,
          "inconsistent complement parity dimensions");

  spec.phase_gap = min_nonzero;
  if (spec.complement_sym_dim > 0) spec.phase_gap = std::min(spec.phase_gap, M_PI);
  return spec;
}

// f(W) u via the spectral decomposition: eigenphase-wise on B, f(pi) on the
// swap-symmetric complement, f(0) on the swap-antisymmetric complement.
inline LiftedVector apply_spectral_function(const WalkSpectrum& spec,
                                            const std::function<std::complex<double>(double)>& f,
                                            const LiftedVector& u) {
  Eigen::VectorXcd c = spec.busy_coeffs(u);
  Eigen::VectorXcd d = spec.busy_vectors.adjoint() * c;
  for (int k = 0; k < spec.busy_dim; ++k) d(k) *= f(spec.busy_phases(k));
  LiftedVector out = spec.materialize(spec.busy_vectors * d);
  LiftedVector perp = u - spec.materialize(c);
  LiftedVector sym = 0.5 * (perp + perp.transpose().eval());
  LiftedVector asym = perp - sym;
  out += f(M_PI) * sym + f(0.0) * asym;
  return out;
}

}  // namespace qsa
