#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace qsa {

// Seeded generator for all randomized suites. Uniform doubles are drawn from
// the top 53 bits of the raw engine output so sequences are pinned down to the
// engine spec rather than to a library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Marsaglia polar would branch on rejection; Box-Muller keeps the draw count
  // per call fixed, which keeps seeded sequences aligned across suites.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return eng_(); }

  Eigen::VectorXcd complex_vector(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = std::complex<double>(normal(), normal());
    return v;
  }

  Eigen::MatrixXcd complex_grid(int rows, int cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (int x = 0; x < rows; ++x)
      for (int y = 0; y < cols; ++y) g(x, y) = std::complex<double>(normal(), normal());
    return g;
  }

 private:
  std::mt19937_64 eng_;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed0001u;

}  // namespace qsa
