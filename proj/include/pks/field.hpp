#ifndef PKS_FIELD_HPP
#define PKS_FIELD_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace pks {

// Uniform cell-centered tensor grid on a rectangle. Cell centers sit at
// (i+1/2)h, so homogeneous Neumann conditions are imposed at cell faces.
struct Grid {
  int dim = 1;
  std::array<int, 2> cells{1, 1};      // cells[1] == 1 in 1D
  std::array<double, 2> extent{1.0, 1.0};

  Grid() = default;
  static Grid make_1d(int nx, double lx);
  static Grid make_2d(int nx, int ny, double lx, double ly);

  double spacing(int axis) const { return extent[axis] / cells[axis]; }
  double min_spacing() const;
  double cell_volume() const;
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells[0]) * static_cast<std::size_t>(cells[1]);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * cells[0] + i;
  }
  double x_center(int i) const { return (i + 0.5) * spacing(0); }
  double y_center(int j) const { return dim == 2 ? (j + 0.5) * spacing(1) : 0.0; }

  bool operator==(const Grid&) const = default;
};

// One scalar per cell, row-major (x fastest).
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(g.cell_count(), fill) {}

  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
  std::size_t size() const { return values.size(); }

  // Evaluates fn at every cell center.
  static Field from_function(const Grid& g,
                             const std::function<double(double, double)>& fn);
};

// Normal components sampled at cell faces, one array per axis.
// Axis 0 faces: (nx+1) x ny, axis 1 faces: nx x (ny+1). Boundary faces are
// stored so zero-flux closures can be written explicitly.
struct FaceField {
  Grid grid;
  std::array<std::vector<double>, 2> comp;

  FaceField() = default;
  explicit FaceField(const Grid& g);

  std::size_t index0(int i, int j) const {
    return static_cast<std::size_t>(j) * (grid.cells[0] + 1) + i;
  }
  std::size_t index1(int i, int j) const {
    return static_cast<std::size_t>(j) * grid.cells[0] + i;
  }
  double& x(int i, int j) { return comp[0][index0(i, j)]; }
  double x(int i, int j) const { return comp[0][index0(i, j)]; }
  double& y(int i, int j) { return comp[1][index1(i, j)]; }
  double y(int i, int j) const { return comp[1][index1(i, j)]; }
};

// Midpoint-rule integral: sum of values times cell volume.
double integrate(const Field& f);

// Centered difference at interior faces; boundary-face normal gradient is 0
// (Neumann closure). divergence() is the exact negative adjoint under the
// midpoint inner product, so <grad u, g>_faces = -<u, div g>_cells to roundoff.
FaceField gradient(const Field& f);
Field divergence(const FaceField& flux);

// div(grad(.)) with the closures above; the operator the spectral solver inverts.
Field laplacian(const Field& f);

// l1 (face-summed) total variation: sum over interior faces of |jump| * face area.
// Exact for cell-aligned axis-parallel interfaces, anisotropy-biased on
// smooth curved ones (4/pi on circles).
double tv_anisotropic(const Field& f);

// Isotropic total variation: cellwise |grad| (face-averaged components) times
// cell volume. Converges to the true perimeter for interfaces smoothed over
// several cells; the default estimator.
double tv_isotropic(const Field& f);

// min and max entries
double field_min(const Field& f);
double field_max(const Field& f);
bool all_finite(const Field& f);

// Heat-kernel mollifier: `passes` explicit diffusion sweeps, each stable; the
// effective smoothing width is about 0.63*sqrt(passes) cells.
Field mollify(const Field& f, int passes);

// Perimeter of a (possibly sharp) two-valued indicator field with the given
// jump height: mollifies over a few cells, then isotropic TV / jump.
double perimeter_of_indicator(const Field& indicator, double jump);

// Distance between the rho = 0.1*rho_c and rho = 0.9*rho_c level sets.
// 1D: along the axis, requires a single monotone transition region.
// 2D: averaged over rays cast from the density centroid.
// Throws not_found_error when the level sets are absent.
double interface_width(const Field& rho, double rho_c);

// Bilinear sample at physical coordinates (clamped to the domain).
double sample_bilinear(const Field& f, double x, double y);

}  // namespace pks

#endif
