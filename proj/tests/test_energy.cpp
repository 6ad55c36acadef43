#include <cmath>

#include "doctest.h"
#include "pks/energy.hpp"
#include "pks/errors.hpp"
#include "pks/geometry.hpp"
#include "test_helpers.hpp"

using namespace pks;

namespace {

EnergyModel make_model(const Grid& g, double m = 3.0, double beta = 1.0,
                       double sigma = 1.0) {
  auto nl = Nonlinearity::power_law(m, beta, sigma);
  auto pc = compute_constants(nl);
  return EnergyModel(nl, pc, g);
}

}  // namespace

TEST_CASE("constant state rho_c has zero energy") {
  auto g = Grid::make_2d(64, 64, 2.0, 1.0);  // |Omega| = 2 = 1/rho_c
  EnergyModel model = make_model(g);
  const double rc = model.constants().rho_c;
  Field rho(g, rc);
  CHECK(std::abs(model.primal(rho, 0.05)) < 1e-12);
  EnergyReport rep = model.modica(rho, 0.05);
  CHECK(std::abs(rep.j_eps_modica) < 1e-12);
  CHECK(rep.mass == doctest::Approx(1.0).epsilon(1e-13));

  Field zero(g, 0.0);
  CHECK(model.primal(zero, 0.05) == 0.0);
}

TEST_CASE("primal and Modica forms agree to 1e-10 relative on random fields") {
  auto g = Grid::make_2d(128, 128, 1.0, 1.0);
  EnergyModel model = make_model(g);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Field rho = pks_test::random_smooth_density(g, 100 + seed);
    const double eps = 0.02 + 0.01 * static_cast<double>(seed % 3);
    EnergyReport rep = model.modica(rho, eps);
    CHECK(pks_test::rel_diff(rep.j_eps_primal, rep.j_eps_modica) < 1e-10);
    CHECK(rep.j_eps_modica ==
          rep.well_term + rep.coupling_term + rep.gradient_term);
  }
}

TEST_CASE("identity also holds away from sigma = beta = 1") {
  auto g = Grid::make_2d(96, 96, 1.0, 1.0);
  EnergyModel model = make_model(g, 3.0, 1.7, 0.8);
  Field rho = pks_test::random_smooth_density(g, 9);
  EnergyReport rep = model.modica(rho, 0.03);
  CHECK(pks_test::rel_diff(rep.j_eps_primal, rep.j_eps_modica) < 1e-10);
}

TEST_CASE("lower bound J >= F_eps(phi) and the BV surrogate bound") {
  auto g = Grid::make_2d(96, 96, 1.0, 1.0);
  EnergyModel model = make_model(g);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    Field rho = pks_test::random_smooth_density(g, 200 + seed);
    EnergyReport rep = model.modica(rho, 0.04);
    CHECK(rep.f_eps_of_phi <= rep.j_eps_modica + 1e-10);
    CHECK(rep.bv_surrogate <= rep.j_eps_modica + 1e-10 * (1.0 + rep.j_eps_modica));
  }
}

TEST_CASE("sharp indicator: well term vanishes exactly") {
  auto g = Grid::make_1d(512, 4.5);
  EnergyModel model = make_model(g);
  const double rc = model.constants().rho_c;
  Field rho = Field::from_function(g, [&](double x, double) {
    return (x > 0.25 && x < 2.25) ? rc : 0.0;
  });
  EnergyReport rep = model.modica(rho, 0.02);
  CHECK(rep.well_term == 0.0);
  CHECK(rep.coupling_term > 0.0);
}

TEST_CASE("energy of the naive 1D sharp sequence approaches rho_c^2/4 per interface") {
  // two interfaces; target 2 * rho_c^2 / 4 = 0.125 for normalized m = 3
  auto g = Grid::make_1d(8192, 4.5);
  EnergyModel model = make_model(g);
  const double rc = model.constants().rho_c;
  Field rho = Field::from_function(g, [&](double x, double) {
    return (x > 0.25 && x < 2.25) ? rc : 0.0;
  });
  EnergyReport rep = model.modica(rho, 0.01);
  CHECK(rep.j_eps_modica == doctest::Approx(0.125).epsilon(0.03));
}

TEST_CASE("energy_sharp matches gamma rho_c times the perimeter") {
  auto nl = Nonlinearity::power_law(3.0, 1.0, 1.0);
  auto pc = compute_constants(nl);

  SUBCASE("1D interval: two interior points") {
    auto g = Grid::make_1d(2048, 4.5);
    EnergyModel model(nl, pc, g);
    Field rho = Field::from_function(g, [&](double x, double) {
      return (x > 0.25 && x < 2.25) ? pc.rho_c : 0.0;
    });
    CHECK(model.sharp(rho) ==
          doctest::Approx(2.0 * pc.gamma * pc.rho_c).epsilon(0.02));
  }
  SUBCASE("full domain: no interface") {
    auto g = Grid::make_1d(256, 2.0);
    EnergyModel model(nl, pc, g);
    Field rho(g, pc.rho_c);
    CHECK(std::abs(model.sharp(rho)) < 1e-12);
  }
  SUBCASE("disk: analytic perimeter oracle") {
    auto g = Grid::make_2d(512, 512, 1.0, 1.0);
    EnergyModel model(nl, pc, g);
    const double r = 0.3;
    Field rho = Field::from_function(g, [&](double x, double y) {
      return std::hypot(x - 0.5, y - 0.5) < r ? pc.rho_c : 0.0;
    });
    CHECK(model.sharp(rho) ==
          doctest::Approx(pc.gamma * pc.rho_c * 2.0 * M_PI * r).epsilon(0.03));
  }
  SUBCASE("non-two-valued input is rejected") {
    auto g = Grid::make_1d(64, 1.0);
    EnergyModel model(nl, pc, g);
    Field rho(g, 0.3);
    CHECK_THROWS_AS(model.sharp(rho), domain_error);
  }
}

TEST_CASE("first variation: constant density gives zero for admissible xi") {
  auto g = Grid::make_2d(96, 96, 1.0, 1.0);
  EnergyModel model = make_model(g);
  const double rc = model.constants().rho_c;
  Field rho(g, rc);
  TestVectorField xi = TestVectorField::radial_cutoff(0.5, 0.5, 0.2, 0.4);
  xi.validate_on(g);
  // integrand is constant * div xi; int div xi = 0 since xi . n = 0
  CHECK(std::abs(model.first_variation_lhs(rho, 0.05, xi)) < 1e-10);
  CHECK(std::abs(model.first_variation_rhs_discrete(rho, 0.05, xi)) < 1e-10);
}

TEST_CASE("first variation identity (lhs vs rhs) converges at O(h^2)") {
  std::vector<double> resid;
  for (int n : {48, 96, 192}) {
    auto g = Grid::make_2d(n, n, 1.0, 1.0);
    EnergyModel model = make_model(g);
    Field rho = pks_test::random_smooth_density(g, 77, 2);
    TestVectorField xi = TestVectorField::radial_cutoff(0.45, 0.55, 0.15, 0.4);
    const double lhs = model.first_variation_lhs(rho, 0.08, xi);
    const double rhs = model.first_variation_rhs_discrete(rho, 0.08, xi);
    resid.push_back(std::abs(lhs - rhs));
  }
  const double order1 = std::log2(resid[0] / resid[1]);
  const double order2 = std::log2(resid[1] / resid[2]);
  CHECK(order1 > 1.5);
  CHECK(order2 > 1.5);
}

TEST_CASE("pressure field: zero at equilibrium, mean-zero always") {
  auto g = Grid::make_2d(64, 64, 1.0, 1.0);
  EnergyModel model = make_model(g);
  const double rc = model.constants().rho_c;
  Field rho(g, rc);
  Field p = model.pressure_field(rho, 0.05);
  for (double v : p.values) CHECK(std::abs(v) < 1e-10);

  Field rnd = pks_test::random_smooth_density(g, 5);
  Field p2 = model.pressure_field(rnd, 0.05);
  CHECK(std::abs(integrate(p2)) < 1e-13);
}

TEST_CASE("shear test field is divergence-free and boundary-admissible") {
  auto g = Grid::make_2d(64, 64, 1.0, 1.0);
  TestVectorField xi = TestVectorField::shear_x(0.2, 0.8);
  xi.validate_on(g);
  for (double y : {0.3, 0.5, 0.62}) {
    CHECK(xi.divergence(0.4, y) == 0.0);
    const double d = 1e-6;
    const double fd = (xi.value(0.4, y + d)[0] - xi.value(0.4, y - d)[0]) / (2 * d);
    CHECK(fd == doctest::Approx(xi.jacobian(0.4, y)[1]).epsilon(1e-5));
  }
}

TEST_CASE("radial cutoff jacobian matches finite differences") {
  TestVectorField xi = TestVectorField::radial_cutoff(0.5, 0.5, 0.2, 0.45);
  const double d = 1e-6;
  for (double x : {0.3, 0.55, 0.8}) {
    for (double y : {0.42, 0.66}) {
      const auto J = xi.jacobian(x, y);
      const double dxx = (xi.value(x + d, y)[0] - xi.value(x - d, y)[0]) / (2 * d);
      const double dxy = (xi.value(x, y + d)[0] - xi.value(x, y - d)[0]) / (2 * d);
      const double dyx = (xi.value(x + d, y)[1] - xi.value(x - d, y)[1]) / (2 * d);
      const double dyy = (xi.value(x, y + d)[1] - xi.value(x, y - d)[1]) / (2 * d);
      CHECK(dxx == doctest::Approx(J[0]).epsilon(1e-4));
      CHECK(dxy == doctest::Approx(J[1]).epsilon(1e-4));
      CHECK(dyx == doctest::Approx(J[2]).epsilon(1e-4));
      CHECK(dyy == doctest::Approx(J[3]).epsilon(1e-4));
      CHECK(xi.divergence(x, y) == doctest::Approx(J[0] + J[3]).epsilon(1e-12));
    }
  }
}

TEST_CASE("negative densities are rejected") {
  auto g = Grid::make_1d(64, 1.0);
  EnergyModel model = make_model(g);
  Field rho(g, 0.2);
  rho.at(10, 0) = -1e-6;
  CHECK_THROWS_AS(model.primal(rho, 0.05), domain_error);
}
