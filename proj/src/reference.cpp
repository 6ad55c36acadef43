#include "pks/reference.hpp"

#include <cmath>

namespace pks::ref {

double integrate(const Field& f) {
  // straight Kahan pass in index order
  double s = 0.0, c = 0.0;
  for (double v : f.values) {
    const double y = v - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s * f.grid.cell_volume();
}

FaceField gradient(const Field& f) {
  const Grid& g = f.grid;
  FaceField out(g);
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      out.x(i, j) = (f.at(i, j) - f.at(i - 1, j)) * inv_hx;
  if (g.dim == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        out.y(i, j) = (f.at(i, j) - f.at(i, j - 1)) * inv_hy;
  }
  return out;
}

Field divergence(const FaceField& flux) {
  const Grid& g = flux.grid;
  Field out(g);
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim == 2 ? 1.0 / g.spacing(1) : 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double d = (flux.x(i + 1, j) - flux.x(i, j)) * inv_hx;
      if (g.dim == 2) d += (flux.y(i, j + 1) - flux.y(i, j)) * inv_hy;
      out.at(i, j) = d;
    }
  return out;
}

double tv_anisotropic(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.cells[0], ny = g.cells[1];
  double total = 0.0;
  const double ax = g.dim == 2 ? g.spacing(1) : 1.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i)
      total += std::abs(f.at(i, j) - f.at(i - 1, j)) * ax;
  if (g.dim == 2) {
    const double ay = g.spacing(0);
    for (int j = 1; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        total += std::abs(f.at(i, j) - f.at(i, j - 1)) * ay;
  }
  return total;
}

double tv_isotropic(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim == 2 ? 1.0 / g.spacing(1) : 0.0;
  double total = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double gxl = i > 0 ? (f.at(i, j) - f.at(i - 1, j)) * inv_hx : 0.0;
      const double gxr = i + 1 < nx ? (f.at(i + 1, j) - f.at(i, j)) * inv_hx : 0.0;
      const double gx = 0.5 * (gxl + gxr);
      double g2 = gx * gx;
      if (g.dim == 2) {
        const double gyl = j > 0 ? (f.at(i, j) - f.at(i, j - 1)) * inv_hy : 0.0;
        const double gyr = j + 1 < ny ? (f.at(i, j + 1) - f.at(i, j)) * inv_hy : 0.0;
        const double gy = 0.5 * (gyl + gyr);
        g2 += gy * gy;
      }
      total += std::sqrt(g2);
    }
  return total * g.cell_volume();
}

}  // namespace pks::ref
