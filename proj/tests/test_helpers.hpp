#ifndef PKS_TEST_HELPERS_HPP
#define PKS_TEST_HELPERS_HPP

#include <cmath>
#include <random>
#include <vector>

#include "pks/field.hpp"

namespace pks_test {

// Smooth nonnegative density compatible with the Neumann boundary: a squared
// low-order cosine series (cell averages of cos modes have exact zero normal
// derivative at the walls).
inline pks::Field random_smooth_density(const pks::Grid& grid, std::uint64_t seed,
                                        int max_mode = 4, double floor = 0.05) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  struct Mode {
    int kx, ky;
    double a;
  };
  std::vector<Mode> modes;
  for (int kx = 0; kx <= max_mode; ++kx)
    for (int ky = 0; ky <= (grid.dim == 2 ? max_mode : 0); ++ky)
      modes.push_back({kx, ky, amp(rng) / (1.0 + kx + ky)});
  const double lx = grid.extent[0], ly = grid.extent[1];
  return pks::Field::from_function(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& m : modes)
      v += m.a * std::cos(M_PI * m.kx * x / lx) *
           (grid.dim == 2 ? std::cos(M_PI * m.ky * y / ly) : 1.0);
    return floor + v * v;
  });
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace pks_test

#endif
