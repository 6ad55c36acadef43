#include <cmath>

#include "doctest.h"
#include "pks/errors.hpp"
#include "pks/helmholtz.hpp"
#include "test_helpers.hpp"

using namespace pks;

TEST_CASE("constant source: phi = c / sigma exactly") {
  auto g = Grid::make_2d(64, 64, 1.0, 1.0);
  const double sigma = 2.0, c = 0.8;
  HelmholtzSolver solver(g, sigma);
  Field rho(g, c);
  Field phi = solver.solve(rho, 0.05);
  for (double v : phi.values) CHECK(v == doctest::Approx(c / sigma).epsilon(1e-15));
  CHECK(solver.residual(rho, phi, 0.05) < 1e-13);
}

TEST_CASE("1D cosine mode: exact modal amplification") {
  const int n = 128;
  auto g = Grid::make_1d(n, M_PI);
  HelmholtzSolver solver(g, 1.0);
  const double eps = 0.2;
  Field rho = Field::from_function(g, [](double x, double) { return std::cos(x); });
  Field phi = solver.solve(rho, eps);
  const double h = g.spacing(0);
  const double lambda1 = (2.0 - 2.0 * std::cos(M_PI / n)) / (h * h);
  for (int i = 0; i < n; ++i) {
    const double expect = std::cos(g.x_center(i)) / (1.0 + eps * eps * lambda1);
    CHECK(phi.at(i, 0) == doctest::Approx(expect).epsilon(1e-12));
  }
  // discrete eigenvalue is within O(h^2) of the continuum one, so the modal
  // factor matches 1/(1+eps^2) to the same order
  CHECK(lambda1 == doctest::Approx(1.0).epsilon(2e-4));
}

TEST_CASE("manufactured solution converges at order 2") {
  const double eps = 0.1, sigma = 1.5;
  const double L = 1.0;
  auto exact = [&](double x, double y) {
    return std::cos(M_PI * x / L) * std::cos(M_PI * y / L);
  };
  const double lap_factor = 2.0 * (M_PI / L) * (M_PI / L);
  double prev_err = 0.0;
  std::vector<double> errs;
  for (int n : {64, 128, 256}) {
    auto g = Grid::make_2d(n, n, L, L);
    HelmholtzSolver solver(g, sigma);
    Field rho = Field::from_function(g, [&](double x, double y) {
      return (sigma + eps * eps * lap_factor) * exact(x, y);
    });
    Field phi = solver.solve(rho, eps);
    double ss = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double d = phi.at(i, j) - exact(g.x_center(i), g.y_center(j));
        ss += d * d;
      }
    errs.push_back(std::sqrt(ss * g.cell_volume()));
    (void)prev_err;
  }
  const double order1 = std::log2(errs[0] / errs[1]);
  const double order2 = std::log2(errs[1] / errs[2]);
  CHECK(order1 > 1.9);
  CHECK(order2 > 1.9);
}

TEST_CASE("mean preservation and limit behavior") {
  auto g = Grid::make_2d(128, 128, 1.0, 1.0);
  const double sigma = 1.0;
  HelmholtzSolver solver(g, sigma);
  Field rho = pks_test::random_smooth_density(g, 3);
  const double mass = integrate(rho);
  for (double eps : {0.3, 0.1, 0.01}) {
    Field phi = solver.solve(rho, eps);
    CHECK(std::abs(integrate(phi) - mass / sigma) <= 1e-12 * std::abs(mass));
  }
  // || phi_eps - rho/sigma ||_{L2} = O(eps^2) for a fixed smooth source
  Field smooth = Field::from_function(g, [](double x, double y) {
    return 1.5 + std::cos(M_PI * x) * std::cos(M_PI * y);
  });
  auto l2_to_rho = [&](double eps) {
    Field phi = solver.solve(smooth, eps);
    double ss = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double d = phi[k] - smooth[k] / sigma;
      ss += d * d;
    }
    return std::sqrt(ss * g.cell_volume());
  };
  const double e1 = l2_to_rho(0.04), e2 = l2_to_rho(0.02);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("maximum principle, comparison, reflection symmetry") {
  auto g = Grid::make_2d(96, 96, 1.0, 1.0);
  HelmholtzSolver solver(g, 1.3);
  Field rho1 = pks_test::random_smooth_density(g, 17);
  Field phi1 = solver.solve(rho1, 0.07);
  CHECK(field_min(phi1) >= -1e-12);
  CHECK(field_max(phi1) <= field_max(rho1) / 1.3 + 1e-12);

  // comparison: rho2 >= rho1 pointwise implies phi2 >= phi1
  Field rho2 = rho1;
  for (auto& v : rho2.values) v += 0.3;
  Field phi2 = solver.solve(rho2, 0.07);
  for (std::size_t k = 0; k < phi1.size(); ++k)
    CHECK(phi2[k] >= phi1[k] - 1e-12);

  // reflection symmetry for symmetric sources
  Field sym = Field::from_function(g, [&](double x, double y) {
    return std::cos(2 * M_PI * 0.0 + M_PI * x) * std::cos(M_PI * y) + 1.5;
  });
  Field phis = solver.solve(sym, 0.05);
  const int n = 96;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      CHECK(phis.at(i, j) ==
            doctest::Approx(phis.at(n - 1 - i, n - 1 - j)).epsilon(1e-11));
}

TEST_CASE("CG path agrees with the spectral path") {
  auto g = Grid::make_2d(48, 40, 1.0, 0.8);
  Field rho = pks_test::random_smooth_density(g, 23);
  HelmholtzSolver spectral(g, 1.0);
  HelmholtzSolver cg(g, 1.0, HelmholtzSolver::Method::conjugate_gradient, 1e-12);
  const double eps = 0.06;
  Field a = spectral.solve(rho, eps);
  Field b = cg.solve(rho, eps);
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
  CHECK(cg.residual(rho, b, eps) <= 1e-10 * std::sqrt(integrate(rho) * field_max(rho)));
}

TEST_CASE("solver rejects bad input") {
  auto g = Grid::make_1d(32, 1.0);
  CHECK_THROWS_AS(HelmholtzSolver(g, 0.0), invalid_parameter_error);
  HelmholtzSolver solver(g, 1.0);
  Field rho(g, 1.0);
  CHECK_THROWS_AS(solver.solve(rho, -1.0), invalid_parameter_error);
  auto g2 = Grid::make_1d(64, 1.0);
  Field wrong(g2, 1.0);
  CHECK_THROWS_AS(solver.solve(wrong, 0.1), invalid_parameter_error);
}
