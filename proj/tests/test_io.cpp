#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "pks/errors.hpp"
#include "pks/grid_io.hpp"

using namespace pks;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const char* name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("pksgrid round-trip is bit-identical") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);

  SUBCASE("2D") {
    auto g = Grid::make_2d(37, 23, 1.25, 0.75);
    Field f(g);
    for (auto& v : f.values) v = u(rng);
    TempFile tmp("roundtrip2d.pksgrid");
    save_pksgrid(tmp.path, f, 0.125, 0.02);
    GridSnapshot snap = load_pksgrid(tmp.path);
    CHECK(snap.time == 0.125);
    CHECK(snap.epsilon == 0.02);
    CHECK(snap.field.grid.dim == 2);
    CHECK(snap.field.grid.cells == g.cells);
    CHECK(snap.field.grid.extent == g.extent);
    REQUIRE(snap.field.values.size() == f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k)
      CHECK(snap.field.values[k] == f.values[k]);
  }
  SUBCASE("1D with exotic doubles") {
    auto g = Grid::make_1d(64, 2.0);
    Field f(g);
    for (auto& v : f.values) v = u(rng);
    f.values[0] = 0.0;
    f.values[1] = -0.0;
    f.values[2] = 1e-308;
    f.values[3] = 1.7976931348623157e308;
    TempFile tmp("roundtrip1d.pksgrid");
    save_pksgrid(tmp.path, f, 3.0, 0.5);
    GridSnapshot snap = load_pksgrid(tmp.path);
    for (std::size_t k = 0; k < f.values.size(); ++k)
      CHECK(snap.field.values[k] == f.values[k]);
    CHECK(std::signbit(snap.field.values[1]));
  }
}

TEST_CASE("pksgrid loader rejects malformed headers") {
  TempFile tmp("bad.pksgrid");
  {
    std::FILE* fp = std::fopen(tmp.path.c_str(), "wb");
    std::fputs("dims 2\n", fp);
    std::fclose(fp);
  }
  CHECK_THROWS_AS(load_pksgrid(tmp.path), config_error);
  CHECK_THROWS_AS(load_pksgrid("/nonexistent/nope.pksgrid"), config_error);
}

TEST_CASE("1D CSV export carries the version header") {
  auto g = Grid::make_1d(8, 1.0);
  Field f(g, 0.25);
  TempFile tmp("field.csv");
  save_field_csv(tmp.path, f);
  std::FILE* fp = std::fopen(tmp.path.c_str(), "rb");
  REQUIRE(fp);
  char line[128];
  REQUIRE(std::fgets(line, sizeof line, fp));
  CHECK(std::string(line).find("pks-gamma-lab v1") != std::string::npos);
  std::fclose(fp);

  auto g2 = Grid::make_2d(4, 4, 1.0, 1.0);
  Field f2(g2, 1.0);
  CHECK_THROWS_AS(save_field_csv(tmp.path, f2), invalid_parameter_error);
}
