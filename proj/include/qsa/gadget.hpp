#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qsa/error.hpp"
#include "qsa/filter.hpp"
#include "qsa/walk.hpp"

namespace qsa {

// State on ancilla (x) H_W: system amplitudes paired with ancilla |0> and |1>.
struct JointState {
  LiftedVector anc0;
  LiftedVector anc1;

  double squared_norm() const { return anc0.squaredNorm() + anc1.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  std::complex<double> dot(const JointState& other) const {
    return (anc0.conjugate().cwiseProduct(other.anc0)).sum() +
           (anc1.conjugate().cwiseProduct(other.anc1)).sum();
  }
};

inline JointState embed_clean(const Eigen::VectorXd& amplitudes) {
  const int n = static_cast<int>(amplitudes.size());
  JointState s;
  s.anc0 = LiftedVector::Zero(n, n);
  s.anc1 = LiftedVector::Zero(n, n);
  s.anc0.col(0) = amplitudes.cast<std::complex<double>>();
  return s;
}

// Unitary completion of the transition oracle O_P = sum_x |x><x| (x) U_x with
// U_x |0> = |P(x,.)>. Each U_x is a sign-fixed Householder 2qq^T - I with
// q = (e_0 + p_x)/||e_0 + p_x||, which maps e_0 to p_x exactly and is well
// conditioned for nonnegative p_x. The antipodal branch (impossible for
// nonnegative rows, kept as a guard) routes through an intermediate basis
// state with two such reflections.
class OracleUnitary {
 public:
  int n = 0;
  // Row x applies its steps left to right; a step q acts as u -> 2q(q.u) - u.
  std::vector<std::vector<Eigen::VectorXd>> row_steps;

  LiftedVector apply(const LiftedVector& u) const { return apply_impl(u, false); }
  LiftedVector apply_adjoint(const LiftedVector& u) const { return apply_impl(u, true); }

  JointState apply(const JointState& s) const { return {apply(s.anc0), apply(s.anc1)}; }
  JointState apply_adjoint(const JointState& s) const {
    return {apply_adjoint(s.anc0), apply_adjoint(s.anc1)};
  }

 private:
  LiftedVector apply_impl(const LiftedVector& u, bool adjoint) const {
    require(u.rows() == n && u.cols() == n, errc::invalid_parameter, "grid shape mismatch");
    LiftedVector out = u;
    for (int x = 0; x < n; ++x) {
      const auto& steps = row_steps[x];
      Eigen::VectorXcd row = out.row(x).transpose();
      if (!adjoint) {
        for (const auto& q : steps)
          row = 2.0 * q.cast<std::complex<double>>() * q.cast<std::complex<double>>().dot(row) -
                row;
      } else {
        for (auto it = steps.rbegin(); it != steps.rend(); ++it)
          row = 2.0 * it->cast<std::complex<double>>() * it->cast<std::complex<double>>().dot(row) -
                row;
      }
      out.row(x) = row.transpose();
    }
    return out;
  }
};

inline OracleUnitary build_oracle_unitary(const MarkovChain& chain) {
  OracleUnitary oracle;
  oracle.n = chain.n;
  oracle.row_steps.resize(chain.n);
  Eigen::MatrixXd sq = chain.P.cwiseSqrt();
  for (int x = 0; x < chain.n; ++x) {
    Eigen::VectorXd p = sq.row(x).transpose();
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(chain.n);
    e0(0) = 1.0;
    if ((p - e0).norm() <= 1e-12) continue;  // already aligned, identity row
    Eigen::VectorXd q = e0 + p;
    double qn = q.norm();
    if (qn > 1e-12) {
      oracle.row_steps[x].push_back(q / qn);
    } else {
      // p antipodal to e_0: two reflections via an intermediate basis state
      int m = 1;
      for (int k = 1; k < chain.n; ++k)
        if (1.0 + p(k) > 1.0 + p(m)) m = k;
      Eigen::VectorXd em = Eigen::VectorXd::Zero(chain.n);
      em(m) = 1.0;
      oracle.row_steps[x].push_back((e0 + em).normalized());
      oracle.row_steps[x].push_back((em + p).normalized());
    }
  }
  return oracle;
}

// One-ancilla selective-phase compiler C^dag (P_phi (x) I) C, realized per
// eigenphase sector by the 2x2 unitary
//   M_theta = C_theta^dag diag(e^{i phi}, 1) C_theta,
//   C_theta = [[u, -w], [w, u]],  u = Upsilon(theta),  w = sqrt(1 - u^2),
// which acts on the (ancilla-0, ancilla-1) coefficient pair of the sector.
struct SelectivePhaseGadget {
  const WalkSpectrum* spec = nullptr;
  double phi = 0.0;
  bool exact = false;  // Upsilon replaced by the indicator of theta = 0
  int d = 0;           // controlled-walk degree per compiler half (0 in exact mode)
  double achieved_eps = 0.0;
  std::optional<ChebyshevFilter> filter;

  Eigen::VectorXd upsilon;           // per busy eigenphase index
  std::vector<Eigen::Matrix2cd> blocks;
  Eigen::Matrix2cd block_sym;        // complement eigenphase pi
  Eigen::Matrix2cd block_antisym;    // complement eigenphase 0

  // Block for an explicit eigenphase value; complement phases included.
  Eigen::Matrix2cd block_for_phase(double theta) const {
    for (int k = 0; k < spec->busy_dim; ++k)
      if (std::abs(spec->busy_phases(k) - theta) <= 1e-12) return blocks[k];
    if (std::abs(theta - M_PI) <= 1e-12) return block_sym;
    if (std::abs(theta) <= 1e-12) return block_antisym;
    fail(errc::invalid_parameter, "theta is not an eigenphase of this walk");
  }
};

namespace detail {

inline Eigen::Matrix2cd phase_block(double upsilon, double phi) {
  double w2 = std::max(0.0, 1.0 - upsilon * upsilon);
  double w = std::sqrt(w2);
  std::complex<double> e = std::exp(std::complex<double>(0.0, phi));
  Eigen::Matrix2cd m;
  m(0, 0) = e * upsilon * upsilon + w2;
  m(0, 1) = upsilon * w * (1.0 - e);
  m(1, 0) = upsilon * w * (1.0 - e);
  m(1, 1) = e * w2 + upsilon * upsilon;
  return m;
}

}  // namespace detail

inline SelectivePhaseGadget build_gadget(const WalkSpectrum& spec, const ChebyshevFilter& filter,
                                         double phi) {
  require(filter.Delta <= spec.phase_gap + 1e-12, errc::gap_mismatch,
          "filter gap exceeds walk phase gap");
  SelectivePhaseGadget g;
  g.spec = &spec;
  g.phi = phi;
  g.d = filter.d;
  g.achieved_eps = filter.achieved_eps;
  g.filter = filter;
  g.upsilon.resize(spec.busy_dim);
  g.blocks.resize(spec.busy_dim);
  for (int k = 0; k < spec.busy_dim; ++k) {
    g.upsilon(k) = filter.eval(spec.busy_phases(k));
    g.blocks[k] = detail::phase_block(g.upsilon(k), phi);
  }
  g.block_sym = detail::phase_block(filter.eval(M_PI), phi);
  g.block_antisym = detail::phase_block(filter.eval(0.0), phi);
  return g;
}

// Oracle mode: the filter is the indicator of the full 1-eigenspace, making
// the gadget an exact selective phase. Used as the compiled pipeline's
// baseline.
inline SelectivePhaseGadget build_exact_gadget(const WalkSpectrum& spec, double phi) {
  SelectivePhaseGadget g;
  g.spec = &spec;
  g.phi = phi;
  g.exact = true;
  g.upsilon.resize(spec.busy_dim);
  g.blocks.resize(spec.busy_dim);
  for (int k = 0; k < spec.busy_dim; ++k) {
    g.upsilon(k) = spec.busy_phases(k) == 0.0 ? 1.0 : 0.0;
    g.blocks[k] = detail::phase_block(g.upsilon(k), phi);
  }
  g.block_sym = detail::phase_block(0.0, phi);
  g.block_antisym = detail::phase_block(1.0, phi);
  return g;
}

// C^dag (P_phi (x) I) C on a joint state: decompose both ancilla branches in
// the walk eigenbasis, rotate each sector's coefficient pair by its block,
// reassemble. Complement sectors are split by swap parity.
inline JointState apply_gadget(const SelectivePhaseGadget& g, const JointState& s) {
  const WalkSpectrum& spec = *g.spec;
  Eigen::VectorXcd c0 = spec.busy_coeffs(s.anc0);
  Eigen::VectorXcd c1 = spec.busy_coeffs(s.anc1);
  Eigen::VectorXcd d0 = spec.busy_vectors.adjoint() * c0;
  Eigen::VectorXcd d1 = spec.busy_vectors.adjoint() * c1;
  for (int k = 0; k < spec.busy_dim; ++k) {
    const Eigen::Matrix2cd& m = g.blocks[k];
    std::complex<double> a = d0(k), b = d1(k);
    d0(k) = m(0, 0) * a + m(0, 1) * b;
    d1(k) = m(1, 0) * a + m(1, 1) * b;
  }
  LiftedVector perp0 = s.anc0 - spec.materialize(c0);
  LiftedVector perp1 = s.anc1 - spec.materialize(c1);
  LiftedVector sym0 = 0.5 * (perp0 + perp0.transpose().eval());
  LiftedVector sym1 = 0.5 * (perp1 + perp1.transpose().eval());
  LiftedVector asym0 = perp0 - sym0;
  LiftedVector asym1 = perp1 - sym1;

  JointState out;
  out.anc0 = spec.materialize(spec.busy_vectors * d0) + g.block_sym(0, 0) * sym0 +
             g.block_sym(0, 1) * sym1 + g.block_antisym(0, 0) * asym0 +
             g.block_antisym(0, 1) * asym1;
  out.anc1 = spec.materialize(spec.busy_vectors * d1) + g.block_sym(1, 0) * sym0 +
             g.block_sym(1, 1) * sym1 + g.block_antisym(1, 0) * asym0 +
             g.block_antisym(1, 1) * asym1;
  return out;
}

// Operator norm of S~_phi (|0> (x) I) T - (|0> (x) I) T S_phi(Pi_pi) over
// H_pi, via the n x n Gram matrix of the difference columns.
inline double gadget_error_norm(const SelectivePhaseGadget& g) {
  const WalkSpectrum& spec = *g.spec;
  const int n = spec.chain.n;
  const std::complex<double> phase_shift =
      std::exp(std::complex<double>(0.0, g.phi)) - 1.0;
  std::vector<JointState> diffs;
  diffs.reserve(n);
  LiftedVector psi = spec.psi();
  for (int x = 0; x < n; ++x) {
    JointState in;
    in.anc0 = LiftedVector::Zero(n, n);
    in.anc0.row(x) = spec.sqrtP.row(x).cast<std::complex<double>>();  // T e_x
    in.anc1 = LiftedVector::Zero(n, n);
    JointState out = apply_gadget(g, in);
    // ideal: (|0> (x) I) T S_phi(Pi_pi) e_x = T e_x + (e^{i phi}-1) sqrt(pi_x) psi
    out.anc0 -= in.anc0 + phase_shift * spec.sqrt_pi()(x) * psi;
    diffs.push_back(std::move(out));
  }
  Eigen::MatrixXcd gram(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) gram(x, y) = diffs[x].dot(diffs[y]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gram + gram.adjoint()));
  require(es.info() == Eigen::Success, errc::numeric_failure, "gram eigensolve failed");
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

// (I_a (x) O^dag) S~_phi (I_a (x) O): the selective phase transported to the
// original register with clean workspace.
inline JointState apply_conjugated_gadget(const SelectivePhaseGadget& g, const OracleUnitary& O,
                                          const JointState& s) {
  return O.apply_adjoint(apply_gadget(g, O.apply(s)));
}

}  // namespace qsa
