#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <tuple>
#include <utility>

#include "qsa/error.hpp"
#include "qsa/gadget.hpp"

namespace qsa {

// Fixed-point amplification word. The stored angle lists are already in the
// artifact's assembly convention: for each pair j the target-side phase
// betas[j] is applied first, then the source-side phase alphas[j] (see
// make_schedule for how the convention is fixed).
struct PhaseSchedule {
  int L = 1;
  Eigen::VectorXd alphas;
  Eigen::VectorXd betas;
  double p_lower = 1.0;
  double eps_fp = 0.0;
  double gamma = 1.0;
};

struct Fpaa2dResult {
  double final_overlap = 1.0;
  double trace_distance = 0.0;
};

namespace detail {

// Word simulated exactly in span{|s>, |t>} with <t|s> = sqrt(p). Basis
// {t, t_perp}; the target-selective phase is diagonal there. The trace
// distance is read off the perpendicular amplitude |st(1)| rather than
// sqrt(1 - |<t|st>|^2), which loses half the significant digits near zero.
inline Fpaa2dResult run_word_2d(double p, const Eigen::VectorXd& alphas,
                                const Eigen::VectorXd& betas) {
  using cd = std::complex<double>;
  Eigen::Vector2cd st(std::sqrt(p), std::sqrt(std::max(0.0, 1.0 - p)));
  Eigen::Vector2cd s = st;
  for (int j = 0; j < alphas.size(); ++j) {
    st(0) *= std::exp(cd(0.0, betas(j)));                       // target phase first
    cd c = s.dot(st);                                           // then source phase
    st += (std::exp(cd(0.0, alphas(j))) - 1.0) * c * s;
  }
  double norm = st.norm();
  double ov = std::min(std::abs(st(0)) / norm, 1.0);
  return {ov, std::min(std::abs(st(1)) / norm, 1.0)};
}

inline bool validate_word(double p_lower, double eps_fp, const Eigen::VectorXd& alphas,
                          const Eigen::VectorXd& betas) {
  for (int i = 0; i < 50; ++i) {
    double p = p_lower + (1.0 - p_lower) * i / 49.0;
    if (run_word_2d(p, alphas, betas).trace_distance > eps_fp + 1e-9) return false;
  }
  return true;
}

struct AngleConvention {
  bool swap = false;
  bool reverse = false;
  bool negate_alphas = false;
  bool negate_betas = false;
};

inline std::pair<Eigen::VectorXd, Eigen::VectorXd> apply_convention(
    Eigen::VectorXd a, Eigen::VectorXd b, const AngleConvention& conv) {
  if (conv.swap) std::swap(a, b);
  if (conv.reverse) {
    a.reverseInPlace();
    b.reverseInPlace();
  }
  if (conv.negate_alphas) a = -a;
  if (conv.negate_betas) b = -b;
  return {std::move(a), std::move(b)};
}

}  // namespace detail

// Smallest odd L with sqrt(1 - gamma(L)^2) <= sqrt(p_lower), where
// gamma(L) = 1/cosh(arccosh(1/eps_fp)/L); then the closed-form angles
// a_j = 2 cot^{-1}(tan(2 pi j / L) sqrt(1 - gamma^2)), b_j = -a_{l-j+1}.
// The sign/ordering convention is fixed by the validation property: the
// first convention (in a fixed enumeration order) whose ideal 2D sweep stays
// below eps_fp on a 50-point grid of [p_lower, 1] is cached and reused.
inline PhaseSchedule make_schedule(double p_lower, double eps_fp) {
  require(p_lower > 0.0 && p_lower <= 1.0, errc::invalid_parameter, "p_lower must be in (0, 1]");
  require(eps_fp > 0.0 && eps_fp < 1.0, errc::invalid_parameter, "eps_fp must be in (0, 1)");

  const double acosh_inv_eps = std::acosh(1.0 / eps_fp);
  auto gamma_of = [&](int L) { return 1.0 / std::cosh(acosh_inv_eps / L); };
  int L = 1;
  while (true) {
    double g = gamma_of(L);
    if (1.0 - g * g <= p_lower + 1e-15) break;
    L += 2;
  }

  PhaseSchedule sched;
  sched.L = L;
  sched.p_lower = p_lower;
  sched.eps_fp = eps_fp;
  sched.gamma = gamma_of(L);
  if (L == 1) return sched;  // states already overlap enough; empty word

  const int ell = (L - 1) / 2;
  const double root = std::sqrt(std::max(0.0, 1.0 - sched.gamma * sched.gamma));
  Eigen::VectorXd base_a(ell), base_b(ell);
  for (int j = 1; j <= ell; ++j)
    base_a(j - 1) = 2.0 * (M_PI / 2 - std::atan(std::tan(2.0 * M_PI * j / L) * root));
  for (int j = 0; j < ell; ++j) base_b(j) = -base_a(ell - 1 - j);

  auto search = [](double p, double eps, const Eigen::VectorXd& ba, const Eigen::VectorXd& bb,
                   detail::AngleConvention& found) {
    for (int mask = 0; mask < 16; ++mask) {
      detail::AngleConvention conv{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0,
                                   (mask & 8) != 0};
      auto [a, b] = detail::apply_convention(ba, bb, conv);
      if (detail::validate_word(p, eps, a, b)) {
        found = conv;
        return true;
      }
    }
    return false;
  };

  // The passing convention does not depend on (p_lower, eps_fp); determine it
  // once from a fixed reference schedule and reuse it.
  static const detail::AngleConvention cached = [&search] {
    PhaseSchedule ref;
    Eigen::VectorXd ra(3), rb(3);
    const double eps = 0.1, gamma = 1.0 / std::cosh(std::acosh(1.0 / eps) / 7);
    const double rroot = std::sqrt(1.0 - gamma * gamma);
    for (int j = 1; j <= 3; ++j)
      ra(j - 1) = 2.0 * (M_PI / 2 - std::atan(std::tan(2.0 * M_PI * j / 7) * rroot));
    for (int j = 0; j < 3; ++j) rb(j) = -ra(2 - j);
    detail::AngleConvention conv;
    require(search(0.25, eps, ra, rb, conv), errc::numeric_failure,
            "no angle convention satisfies the fixed-point property");
    return conv;
  }();

  auto [a, b] = detail::apply_convention(base_a, base_b, cached);
  if (!detail::validate_word(p_lower, eps_fp, a, b)) {
    detail::AngleConvention conv;
    require(search(p_lower, eps_fp, base_a, base_b, conv), errc::numeric_failure,
            "no angle convention satisfies the fixed-point property");
    std::tie(a, b) = detail::apply_convention(base_a, base_b, conv);
  }
  sched.alphas = std::move(a);
  sched.betas = std::move(b);
  return sched;
}

// Exact 2D simulation of the word for a given actual squared overlap.
inline Fpaa2dResult ideal_fpaa_2d(double p_actual, const PhaseSchedule& sched) {
  require(p_actual > 0.0 && p_actual <= 1.0, errc::invalid_parameter, "p_actual must be in (0, 1]");
  return detail::run_word_2d(p_actual, sched.alphas, sched.betas);
}

// Everything compiled_stage needs about one chain: its walk, the stage
// filter (absent in exact-projector mode), and the transition oracle.
struct GadgetBundle {
  const WalkSpectrum* spec = nullptr;
  const ChebyshevFilter* filter = nullptr;
  const OracleUnitary* oracle = nullptr;
  bool exact = false;
};

struct StageOutcome {
  JointState state;
  long long queries = 0;
  double trace_distance = 0.0;  // against the embedded clean target
};

// The compiled word: for each pair, the conjugated selective phase about the
// target stationary state at betas[j], then about the source at alphas[j].
inline StageOutcome compiled_stage(JointState state, const GadgetBundle& source,
                                   const GadgetBundle& target, const PhaseSchedule& sched,
                                   int conjugation_overhead = 2) {
  require(source.spec != nullptr && target.spec != nullptr, errc::configuration,
          "stage bundles missing walk spectra");
  require(source.exact == target.exact, errc::configuration, "mixed stage modes");
  if (!source.exact && sched.L > 1)
    require(source.filter != nullptr && target.filter != nullptr, errc::configuration,
            "compiled mode requires synthesized filters for both walks");

  StageOutcome out;
  auto make = [&](const GadgetBundle& bundle, double phi) {
    return bundle.exact ? build_exact_gadget(*bundle.spec, phi)
                        : build_gadget(*bundle.spec, *bundle.filter, phi);
  };
  for (int j = 0; j < sched.alphas.size(); ++j) {
    SelectivePhaseGadget gt = make(target, sched.betas(j));
    state = apply_conjugated_gadget(gt, *target.oracle, state);
    SelectivePhaseGadget gs = make(source, sched.alphas(j));
    state = apply_conjugated_gadget(gs, *source.oracle, state);
    if (!source.exact)
      out.queries += (4LL * gt.d + conjugation_overhead) + (4LL * gs.d + conjugation_overhead);
  }

  // Distance to the embedded clean target, via the explicit perpendicular
  // component to avoid the sqrt(1 - |ov|^2) cancellation near zero.
  const Eigen::VectorXd& spi = target.spec->sqrt_pi();
  const int n = target.spec->chain.n;
  std::complex<double> ov = spi.cast<std::complex<double>>().dot(state.anc0.col(0));
  Eigen::VectorXcd head = state.anc0.col(0) - ov * spi.cast<std::complex<double>>();
  double perp2 = head.squaredNorm() + state.anc1.squaredNorm() +
                 state.anc0.rightCols(n - 1).squaredNorm();
  out.trace_distance = std::min(std::sqrt(std::max(0.0, perp2)) / state.norm(), 1.0);
  out.state = std::move(state);
  return out;
}

}  // namespace qsa
