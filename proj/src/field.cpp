#include "pks/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pks/errors.hpp"
#include "pks/parallel.hpp"

namespace pks {

Grid Grid::make_1d(int nx, double lx) {
  if (nx < 1 || lx <= 0.0)
    throw invalid_parameter_error("grid: cells must be >=1 and extent positive");
  Grid g;
  g.dim = 1;
  g.cells = {nx, 1};
  g.extent = {lx, 1.0};
  return g;
}

Grid Grid::make_2d(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1 || lx <= 0.0 || ly <= 0.0)
    throw invalid_parameter_error("grid: cells must be >=1 and extents positive");
  Grid g;
  g.dim = 2;
  g.cells = {nx, ny};
  g.extent = {lx, ly};
  return g;
}

double Grid::min_spacing() const {
  double h = spacing(0);
  if (dim == 2) h = std::min(h, spacing(1));
  return h;
}

double Grid::cell_volume() const {
  double v = spacing(0);
  if (dim == 2) v *= spacing(1);
  return v;
}

Field Field::from_function(const Grid& g,
                           const std::function<double(double, double)>& fn) {
  Field out(g);
  const int nx = g.cells[0], ny = g.cells[1];
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      out.at(i, j) = fn(g.x_center(i), g.y_center(j));
  return out;
}

FaceField::FaceField(const Grid& g) : grid(g) {
  comp[0].assign(static_cast<std::size_t>(g.cells[0] + 1) * g.cells[1], 0.0);
  if (g.dim == 2)
    comp[1].assign(static_cast<std::size_t>(g.cells[0]) * (g.cells[1] + 1), 0.0);
}

double integrate(const Field& f) {
  const double vol = f.grid.cell_volume();
  return vol * par::sum(f.size(), [&](std::size_t k) { return f[k]; });
}

FaceField gradient(const Field& f) {
  const Grid& g = f.grid;
  FaceField out(g);
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  // interior x faces; boundary faces stay 0
  par::parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 1; i < nx; ++i)
      out.x(i, j) = (f.at(i, j) - f.at(i - 1, j)) * inv_hx;
  });
  if (g.dim == 2) {
    const double inv_hy = 1.0 / g.spacing(1);
    par::parallel_for(static_cast<std::size_t>(ny - 1), [&](std::size_t jj) {
      const int j = static_cast<int>(jj) + 1;
      for (int i = 0; i < nx; ++i)
        out.y(i, j) = (f.at(i, j) - f.at(i, j - 1)) * inv_hy;
    });
  }
  return out;
}

Field divergence(const FaceField& flux) {
  const Grid& g = flux.grid;
  Field out(g);
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim == 2 ? 1.0 / g.spacing(1) : 0.0;
  par::parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < nx; ++i) {
      double d = (flux.x(i + 1, j) - flux.x(i, j)) * inv_hx;
      if (g.dim == 2) d += (flux.y(i, j + 1) - flux.y(i, j)) * inv_hy;
      out.at(i, j) = d;
    }
  });
  return out;
}

Field laplacian(const Field& f) { return divergence(gradient(f)); }

double tv_anisotropic(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.cells[0], ny = g.cells[1];
  const double face_x = g.dim == 2 ? g.spacing(1) : 1.0;
  double total = par::sum(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    double acc = 0.0;
    for (int i = 1; i < nx; ++i) acc += std::abs(f.at(i, j) - f.at(i - 1, j));
    return acc * face_x;
  });
  if (g.dim == 2) {
    const double face_y = g.spacing(0);
    total += par::sum(static_cast<std::size_t>(ny - 1), [&](std::size_t jj) {
      const int j = static_cast<int>(jj) + 1;
      double acc = 0.0;
      for (int i = 0; i < nx; ++i) acc += std::abs(f.at(i, j) - f.at(i, j - 1));
      return acc * face_y;
    });
  }
  return total;
}

double tv_isotropic(const Field& f) {
  const Grid& g = f.grid;
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim == 2 ? 1.0 / g.spacing(1) : 0.0;
  const double vol = g.cell_volume();
  // cell gradient = average of the two adjacent face differences per axis,
  // with the Neumann closure (boundary face difference = 0)
  double total = par::sum(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
      const double gxl = i > 0 ? (f.at(i, j) - f.at(i - 1, j)) * inv_hx : 0.0;
      const double gxr = i + 1 < nx ? (f.at(i + 1, j) - f.at(i, j)) * inv_hx : 0.0;
      double gx = 0.5 * (gxl + gxr);
      double g2 = gx * gx;
      if (g.dim == 2) {
        const double gyl = j > 0 ? (f.at(i, j) - f.at(i, j - 1)) * inv_hy : 0.0;
        const double gyr =
            j + 1 < ny ? (f.at(i, j + 1) - f.at(i, j)) * inv_hy : 0.0;
        const double gy = 0.5 * (gyl + gyr);
        g2 += gy * gy;
      }
      acc += std::sqrt(g2);
    }
    return acc;
  });
  return total * vol;
}

double field_min(const Field& f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f.values) m = std::min(m, v);
  return m;
}

double field_max(const Field& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f.values) m = std::max(m, v);
  return m;
}

bool all_finite(const Field& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

Field mollify(const Field& f, int passes) {
  Field cur = f;
  const double h2 = f.grid.min_spacing() * f.grid.min_spacing();
  const double dt = 0.2 * h2;  // stable for the 5-point stencil in 2D
  for (int p = 0; p < passes; ++p) {
    Field lap = laplacian(cur);
    par::parallel_for(cur.size(),
                      [&](std::size_t k) { cur[k] += dt * lap[k]; });
  }
  return cur;
}

double perimeter_of_indicator(const Field& indicator, double jump) {
  if (jump <= 0.0) throw invalid_parameter_error("perimeter: jump must be positive");
  Field smooth = mollify(indicator, 24);
  return tv_isotropic(smooth) / jump;
}

namespace {

// positions where a linearly-interpolated cell-center profile crosses `level`
std::vector<double> crossings_1d(const std::vector<double>& vals,
                                 const std::vector<double>& xs, double level) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
    const double a = vals[i] - level, b = vals[i + 1] - level;
    if (a == 0.0) out.push_back(xs[i]);
    if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0))
      out.push_back(xs[i] + (xs[i + 1] - xs[i]) * (-a) / (b - a));
  }
  return out;
}

}  // namespace

double interface_width(const Field& rho, double rho_c) {
  const Grid& g = rho.grid;
  const double lo = 0.1 * rho_c, hi = 0.9 * rho_c;
  if (g.dim == 1) {
    std::vector<double> xs(g.cells[0]);
    for (int i = 0; i < g.cells[0]; ++i) xs[i] = g.x_center(i);
    auto clo = crossings_1d(rho.values, xs, lo);
    auto chi = crossings_1d(rho.values, xs, hi);
    if (clo.empty() || chi.empty())
      throw not_found_error("interface_width: level sets not found");
    // pair each hi crossing with the nearest lo crossing
    double acc = 0.0;
    for (double xh : chi) {
      double best = std::numeric_limits<double>::infinity();
      for (double xl : clo) best = std::min(best, std::abs(xh - xl));
      acc += best;
    }
    double w = acc / static_cast<double>(chi.size());
    return std::max(w, g.spacing(0));  // resolution floor
  }

  // 2D: rays from the density centroid
  const double mass = integrate(rho);
  if (mass <= 0.0) throw not_found_error("interface_width: empty field");
  double cx = 0.0, cy = 0.0;
  for (int j = 0; j < g.cells[1]; ++j)
    for (int i = 0; i < g.cells[0]; ++i) {
      const double w = rho.at(i, j);
      cx += w * g.x_center(i);
      cy += w * g.y_center(j);
    }
  cx *= g.cell_volume() / mass;
  cy *= g.cell_volume() / mass;

  const int n_rays = 64;
  const double r_max = std::max(g.extent[0], g.extent[1]);
  const double dr = 0.25 * g.min_spacing();
  double acc = 0.0;
  int found = 0;
  for (int r = 0; r < n_rays; ++r) {
    const double th = 2.0 * M_PI * r / n_rays;
    const double ux = std::cos(th), uy = std::sin(th);
    double x_hi = -1.0, x_lo = -1.0;
    double prev = sample_bilinear(rho, cx, cy);
    for (double s = dr; s < r_max; s += dr) {
      const double v = sample_bilinear(rho, cx + s * ux, cy + s * uy);
      if (x_hi < 0.0 && prev >= hi && v < hi)
        x_hi = s - dr + dr * (prev - hi) / (prev - v);
      if (x_hi >= 0.0 && prev >= lo && v < lo) {
        x_lo = s - dr + dr * (prev - lo) / (prev - v);
        break;
      }
      prev = v;
    }
    if (x_hi >= 0.0 && x_lo >= 0.0) {
      acc += x_lo - x_hi;
      ++found;
    }
  }
  if (found == 0) throw not_found_error("interface_width: no 10-90 transition on any ray");
  return std::max(acc / found, g.min_spacing());
}

double sample_bilinear(const Field& f, double x, double y) {
  const Grid& g = f.grid;
  const double hx = g.spacing(0);
  double u = x / hx - 0.5;
  u = std::clamp(u, 0.0, static_cast<double>(g.cells[0] - 1));
  const int i0 = std::min(static_cast<int>(u), g.cells[0] - 2 >= 0 ? g.cells[0] - 2 : 0);
  const double fx = u - i0;
  if (g.dim == 1) {
    if (g.cells[0] == 1) return f.at(0, 0);
    return (1.0 - fx) * f.at(i0, 0) + fx * f.at(i0 + 1, 0);
  }
  const double hy = g.spacing(1);
  double v = y / hy - 0.5;
  v = std::clamp(v, 0.0, static_cast<double>(g.cells[1] - 1));
  const int j0 = std::min(static_cast<int>(v), g.cells[1] - 2 >= 0 ? g.cells[1] - 2 : 0);
  const double fy = v - j0;
  if (g.cells[1] == 1) {
    return (1.0 - fx) * f.at(i0, 0) + fx * f.at(i0 + 1, 0);
  }
  return (1.0 - fx) * (1.0 - fy) * f.at(i0, j0) + fx * (1.0 - fy) * f.at(i0 + 1, j0) +
         (1.0 - fx) * fy * f.at(i0, j0 + 1) + fx * fy * f.at(i0 + 1, j0 + 1);
}

}  // namespace pks
