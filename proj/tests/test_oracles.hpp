// Independent oracles used by the test suites. These deliberately avoid the
// library's own code paths: energies come from hand-written bond lists,
// partition sums from direct enumeration, walk actions from dense matrices,
// and the FPAA profile from its closed Chebyshev form.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

// Unsatisfied-bond count from an explicit bond list; spin s is bit s.
inline int energy(std::uint32_t config, const std::vector<std::pair<int, int>>& bonds) {
  int h = 0;
  for (auto [a, b] : bonds) h += static_cast<int>((config >> a ^ config >> b) & 1u);
  return h;
}

// Hand-written open-boundary 2 x cols ladder bond lists for small sizes.
inline std::vector<std::pair<int, int>> ladder_bonds(int cols) {
  std::vector<std::pair<int, int>> bonds;
  for (int c = 0; c < cols; ++c) bonds.emplace_back(2 * c, 2 * c + 1);
  for (int c = 0; c + 1 < cols; ++c) {
    bonds.emplace_back(2 * c, 2 * c + 2);
    bonds.emplace_back(2 * c + 1, 2 * c + 3);
  }
  return bonds;
}

// Gibbs distribution by exhaustive enumeration.
inline Eigen::VectorXd gibbs_enumeration(int spins, const std::vector<std::pair<int, int>>& bonds,
                                         double beta) {
  const int count = 1 << spins;
  Eigen::VectorXd mu(count);
  for (int x = 0; x < count; ++x) mu(x) = std::exp(-beta * energy(x, bonds));
  return mu / mu.sum();
}

inline double partition_enumeration(int spins, const std::vector<std::pair<int, int>>& bonds,
                                    double beta) {
  const int count = 1 << spins;
  long double z = 0.0L;
  for (int x = 0; x < count; ++x) z += std::exp(-static_cast<long double>(beta) * energy(x, bonds));
  return static_cast<double>(z);
}

// Chebyshev T_L for the closed-form FPAA trace-distance profile.
inline double chebyshev(int d, double x) {
  if (std::abs(x) <= 1.0) return std::cos(d * std::acos(x));
  double mag = std::cosh(d * std::acosh(std::abs(x)));
  return (x > 0.0 || d % 2 == 0) ? mag : -mag;
}

// Yoder-Low-Chuang profile: trace distance eps |T_L(sqrt(1-p)/gamma)|.
inline double fpaa_closed_form(double p, int L, double eps_fp, double gamma) {
  return eps_fp * std::abs(chebyshev(L, std::sqrt(std::max(0.0, 1.0 - p)) / gamma));
}

}  // namespace oracle
