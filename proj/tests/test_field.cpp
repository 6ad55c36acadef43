#include <cmath>
#include <random>

#include "doctest.h"
#include "pks/errors.hpp"
#include "pks/field.hpp"
#include "pks/geometry.hpp"
#include "test_helpers.hpp"

using namespace pks;

TEST_CASE("integrate: constants and aligned indicators are exact") {
  auto g2 = Grid::make_2d(64, 48, 1.0, 1.0);
  Field ones(g2, 1.0);
  CHECK(integrate(ones) == doctest::Approx(1.0).epsilon(1e-14));

  auto g1 = Grid::make_1d(64, 1.0);
  Field half(g1);
  for (int i = 0; i < 32; ++i) half.at(i, 0) = 1.0;
  CHECK(integrate(half) == doctest::Approx(0.5).epsilon(1e-14));

  // rho_c * chi_E with |E| = 1/rho_c has mass one
  const double rho_c = 0.5;
  auto g = Grid::make_1d(512, 4.0);
  Field f(g);
  for (int i = 0; i < 512; ++i)
    if (g.x_center(i) > 0.5 && g.x_center(i) < 2.5) f.at(i, 0) = rho_c;
  CHECK(integrate(f) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gradient: constants and linear profiles") {
  auto g = Grid::make_1d(64, 2.0);
  Field c(g, 3.7);
  FaceField gc = gradient(c);
  for (double v : gc.comp[0]) CHECK(v == 0.0);

  Field lin = Field::from_function(g, [](double x, double) { return x; });
  FaceField gl = gradient(lin);
  for (int i = 0; i <= 64; ++i) {
    if (i == 0 || i == 64)
      CHECK(gl.x(i, 0) == 0.0);  // Neumann closure
    else
      CHECK(gl.x(i, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("divergence of a constant interior flux telescopes to zero inside") {
  auto g = Grid::make_2d(32, 32, 1.0, 1.0);
  FaceField flux(g);
  for (auto& v : flux.comp[0]) v = 2.0;
  for (auto& v : flux.comp[1]) v = -1.0;
  // zero the boundary-normal fluxes
  for (int j = 0; j < 32; ++j) flux.x(0, j) = flux.x(32, j) = 0.0;
  for (int i = 0; i < 32; ++i) flux.y(i, 0) = flux.y(i, 32) = 0.0;
  Field div = divergence(flux);
  for (int j = 1; j < 31; ++j)
    for (int i = 1; i < 31; ++i) CHECK(div.at(i, j) == 0.0);
  CHECK(std::abs(integrate(div)) < 1e-13);
}

TEST_CASE("summation by parts: <grad u, grad v>_faces = -<u, div grad v>_cells") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  auto g = Grid::make_2d(24, 18, 1.3, 0.9);
  for (int rep = 0; rep < 5; ++rep) {
    Field u(g), v(g);
    for (auto& x : u.values) x = u01(rng);
    for (auto& x : v.values) x = u01(rng);
    FaceField gu = gradient(u), gv = gradient(v);
    const double vol = g.cell_volume();
    double faces = 0.0;
    for (std::size_t k = 0; k < gu.comp[0].size(); ++k)
      faces += gu.comp[0][k] * gv.comp[0][k];
    for (std::size_t k = 0; k < gu.comp[1].size(); ++k)
      faces += gu.comp[1][k] * gv.comp[1][k];
    faces *= vol;
    Field lap = divergence(gv);
    double cells = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) cells += u[k] * lap[k];
    cells *= vol;
    CHECK(std::abs(faces + cells) < 1e-13 * (1.0 + std::abs(faces)));
  }
}

TEST_CASE("integrate(divergence(flux with zero boundary normal)) = 0") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  auto g = Grid::make_2d(20, 20, 1.0, 1.0);
  FaceField flux(g);
  for (auto& v : flux.comp[0]) v = u01(rng);
  for (auto& v : flux.comp[1]) v = u01(rng);
  for (int j = 0; j < 20; ++j) flux.x(0, j) = flux.x(20, j) = 0.0;
  for (int i = 0; i < 20; ++i) flux.y(i, 0) = flux.y(i, 20) = 0.0;
  CHECK(std::abs(integrate(divergence(flux))) < 1e-13);
}

TEST_CASE("anisotropic TV counts aligned square edges exactly") {
  auto g = Grid::make_2d(64, 64, 1.0, 1.0);
  const double jump = 0.7;
  Field f(g);
  for (int j = 16; j < 48; ++j)
    for (int i = 16; i < 48; ++i) f.at(i, j) = jump;
  // side length 0.5, four sides
  CHECK(tv_anisotropic(f) == doctest::Approx(4 * 0.5 * jump).epsilon(1e-12));
  Field c(g, 2.0);
  CHECK(tv_anisotropic(c) == 0.0);
  CHECK(tv_isotropic(c) == 0.0);
}

TEST_CASE("isotropic TV of a smoothed disk converges to the perimeter") {
  const int n = 512;
  auto g = Grid::make_2d(n, n, 1.0, 1.0);
  const double r = 0.3, jump = 0.5;
  const double w = 6.0 * g.spacing(0);  // tanh profile over ~6 cells
  Field f = Field::from_function(g, [&](double x, double y) {
    const double d = r - std::hypot(x - 0.5, y - 0.5);
    return jump * 0.5 * (1.0 + std::tanh(2.0 * d / w));
  });
  const double tv = tv_isotropic(f);
  CHECK(std::abs(tv - 2.0 * M_PI * r * jump) < 0.02 * 2.0 * M_PI * r * jump);
}

TEST_CASE("TV scales linearly with jump height and is translation invariant") {
  auto g = Grid::make_1d(256, 2.0);
  auto make_step = [&](double x0, double jump) {
    return Field::from_function(g, [&](double x, double) {
      return x > x0 ? jump : 0.0;
    });
  };
  const double tv1 = tv_anisotropic(make_step(0.7, 1.0));
  const double tv3 = tv_anisotropic(make_step(0.7, 3.0));
  const double tv1_shift = tv_anisotropic(make_step(1.3, 1.0));
  CHECK(tv3 == doctest::Approx(3.0 * tv1).epsilon(1e-13));
  CHECK(tv1_shift == doctest::Approx(tv1).epsilon(1e-13));
}

TEST_CASE("interface width: sharp step floors at one cell") {
  auto g = Grid::make_1d(128, 1.0);
  const double rho_c = 0.5;
  Field f = Field::from_function(g, [&](double x, double) {
    return x > 0.5 ? rho_c : 0.0;
  });
  CHECK(interface_width(f, rho_c) == doctest::Approx(g.spacing(0)));

  Field flat(g, 0.25);
  CHECK_THROWS_AS(interface_width(flat, rho_c), not_found_error);
}

TEST_CASE("interface width: tanh profile halves with the width parameter") {
  auto g = Grid::make_1d(4096, 2.0);
  const double rho_c = 0.5;
  auto profile = [&](double w) {
    Field f = Field::from_function(g, [&](double x, double) {
      return rho_c * 0.5 * (1.0 + std::tanh((x - 1.0) / w));
    });
    return interface_width(f, rho_c);
  };
  const double w1 = profile(0.02), w2 = profile(0.01);
  CHECK(w1 / w2 == doctest::Approx(2.0).epsilon(0.02));
  // analytic 10-90 width of tanh((x)/w) in rho units: w * atanh(0.8) * 2
  CHECK(w1 == doctest::Approx(2.0 * 0.02 * std::atanh(0.8)).epsilon(0.01));
}

TEST_CASE("geometry measures and perimeters") {
  auto iv = Geometry::interval(0.25, 2.25, 4.5);
  CHECK(iv.measure == doctest::Approx(2.0));
  CHECK(iv.perimeter == 2.0);
  CHECK(iv.signed_distance(1.0, 0.0) == doctest::Approx(0.75));
  CHECK(iv.signed_distance(3.0, 0.0) == doctest::Approx(-0.75));

  auto touching = Geometry::interval(0.0, 1.0, 4.5);
  CHECK(touching.perimeter == 1.0);  // left endpoint sits on the boundary

  auto d = Geometry::disk(0.5, 0.5, 0.25);
  CHECK(d.measure == doctest::Approx(M_PI * 0.0625));
  CHECK(d.perimeter == doctest::Approx(M_PI * 0.5));

  auto e = Geometry::ellipse(0.5, 0.5, 0.3, 0.15);
  CHECK(e.measure == doctest::Approx(M_PI * 0.045));
  // Ramanujan's approximation is good to ~1e-5 here
  const double hsum = 3.0 * (0.3 + 0.15);
  const double rad = std::sqrt((3 * 0.3 + 0.15) * (0.3 + 3 * 0.15));
  CHECK(e.perimeter == doctest::Approx(M_PI * (hsum - rad)).epsilon(1e-4));
  // circle special case: signed distance is exact
  auto c = Geometry::ellipse(0.5, 0.5, 0.2, 0.2);
  CHECK(c.signed_distance(0.65, 0.5) == doctest::Approx(0.05).epsilon(1e-10));
}
