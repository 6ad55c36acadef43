#include <random>

#include "doctest.h"
#include "pks/field.hpp"
#include "pks/parallel.hpp"
#include "pks/reference.hpp"
#include "test_helpers.hpp"

using namespace pks;

// The OpenMP kernels must match the serial reference implementations bitwise
// (maps) or to the deterministic-reduction guarantee (sums).

TEST_CASE("parallel kernels match the serial reference") {
  auto g = Grid::make_2d(96, 80, 1.1, 0.7);
  Field f = pks_test::random_smooth_density(g, 42);

  SUBCASE("integrate") {
    const double a = integrate(f);
    const double b = ref::integrate(f);
    CHECK(pks_test::rel_diff(a, b) < 1e-14);
  }
  SUBCASE("gradient and divergence are bitwise equal") {
    FaceField ga = gradient(f), gb = ref::gradient(f);
    REQUIRE(ga.comp[0].size() == gb.comp[0].size());
    for (std::size_t k = 0; k < ga.comp[0].size(); ++k)
      CHECK(ga.comp[0][k] == gb.comp[0][k]);
    for (std::size_t k = 0; k < ga.comp[1].size(); ++k)
      CHECK(ga.comp[1][k] == gb.comp[1][k]);
    Field da = divergence(ga), db = ref::divergence(gb);
    for (std::size_t k = 0; k < da.size(); ++k) CHECK(da[k] == db[k]);
  }
  SUBCASE("total variations") {
    CHECK(pks_test::rel_diff(tv_anisotropic(f), ref::tv_anisotropic(f)) < 1e-13);
    CHECK(pks_test::rel_diff(tv_isotropic(f), ref::tv_isotropic(f)) < 1e-13);
  }
}

TEST_CASE("deterministic reduction is independent of chunk boundaries") {
  // same data summed through the chunked reducer and plain Kahan
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> data(200003);
  for (auto& v : data) v = u(rng);
  const double a = par::sum(data.size(), [&](std::size_t k) { return data[k]; });
  double s = 0.0, c = 0.0;
  for (double v : data) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  CHECK(pks_test::rel_diff(a, s) < 1e-13);
  // repeated evaluation is bitwise stable
  const double b = par::sum(data.size(), [&](std::size_t k) { return data[k]; });
  CHECK(a == b);
}
