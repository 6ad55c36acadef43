#include "pks/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "pks/errors.hpp"

namespace pks {

namespace {

void write_doubles_le(std::ostream& os, const double* p, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t bits;
      std::memcpy(&bits, &p[k], 8);
      char buf[8];
      for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>(bits >> (8 * b));
      os.write(buf, 8);
    }
  }
}

void read_doubles_le(std::istream& is, double* p, std::size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    is.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      char buf[8];
      is.read(buf, 8);
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b])) << (8 * b);
      std::memcpy(&p[k], &bits, 8);
    }
  }
}

}  // namespace

void save_pksgrid(const std::string& path, const Field& field, double time,
                  double epsilon) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open for writing: " + path);
  const Grid& g = field.grid;
  os.precision(17);
  os << "dim " << g.dim << "\n";
  os << "cells " << g.cells[0];
  if (g.dim == 2) os << " " << g.cells[1];
  os << "\n";
  os << "extent " << g.extent[0];
  if (g.dim == 2) os << " " << g.extent[1];
  os << "\n";
  os << "time " << time << "\n";
  os << "epsilon " << epsilon << "\n";
  write_doubles_le(os, field.values.data(), field.values.size());
  if (!os) throw config_error("write failed: " + path);
}

GridSnapshot load_pksgrid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("cannot open: " + path);
  auto expect_key = [&](const char* key) {
    std::string line;
    if (!std::getline(is, line))
      throw config_error(path + ": truncated header (missing " + key + ")");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key)
      throw config_error(path + ": expected header key '" + key + "', got '" + k + "'");
    return ls;
  };

  GridSnapshot snap;
  int dim = 0;
  {
    auto ls = expect_key("dim");
    ls >> dim;
    if (dim != 1 && dim != 2) throw config_error(path + ": dim must be 1 or 2");
  }
  int nx = 0, ny = 1;
  {
    auto ls = expect_key("cells");
    ls >> nx;
    if (dim == 2) ls >> ny;
    if (nx < 1 || ny < 1) throw config_error(path + ": bad cell counts");
  }
  double lx = 0.0, ly = 1.0;
  {
    auto ls = expect_key("extent");
    ls >> lx;
    if (dim == 2) ls >> ly;
    if (!(lx > 0.0) || !(ly > 0.0)) throw config_error(path + ": bad extents");
  }
  {
    auto ls = expect_key("time");
    ls >> snap.time;
  }
  {
    auto ls = expect_key("epsilon");
    ls >> snap.epsilon;
  }

  Grid g = dim == 1 ? Grid::make_1d(nx, lx) : Grid::make_2d(nx, ny, lx, ly);
  snap.field = Field(g);
  read_doubles_le(is, snap.field.values.data(), snap.field.values.size());
  if (!is) throw config_error(path + ": truncated cell data");
  return snap;
}

void save_field_csv(const std::string& path, const Field& field) {
  if (field.grid.dim != 1)
    throw invalid_parameter_error("CSV export is for 1D fields; use .pksgrid for 2D");
  std::ofstream os(path);
  if (!os) throw config_error("cannot open for writing: " + path);
  os << kCsvVersionLine << "\n";
  os << "x,value\n";
  os.precision(17);
  for (int i = 0; i < field.grid.cells[0]; ++i)
    os << field.grid.x_center(i) << "," << field.at(i, 0) << "\n";
}

}  // namespace pks
