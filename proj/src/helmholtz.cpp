#include "pks/helmholtz.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <string>

#include "pks/errors.hpp"
#include "pks/parallel.hpp"

namespace pks {

namespace {

// FFTW plan creation is not thread-safe; execution with the new-array
// interface is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

struct AlignedBuffer {
  double* p;
  explicit AlignedBuffer(std::size_t n)
      : p(static_cast<double*>(fftw_malloc(n * sizeof(double)))) {}
  ~AlignedBuffer() { fftw_free(p); }
  AlignedBuffer(const AlignedBuffer&) = delete;
};

}  // namespace

HelmholtzSolver::HelmholtzSolver(const Grid& grid, double sigma, Method method,
                                 double tolerance)
    : grid_(grid), sigma_(sigma), method_(method), tol_(tolerance) {
  if (!(sigma > 0.0))
    throw invalid_parameter_error("helmholtz: sigma must be positive");
  const int nx = grid.cells[0], ny = grid.cells[1];
  eig_x_.resize(nx);
  const double hx2 = grid.spacing(0) * grid.spacing(0);
  for (int k = 0; k < nx; ++k)
    eig_x_[k] = (2.0 - 2.0 * std::cos(M_PI * k / nx)) / hx2;
  if (grid.dim == 2) {
    eig_y_.resize(ny);
    const double hy2 = grid.spacing(1) * grid.spacing(1);
    for (int k = 0; k < ny; ++k)
      eig_y_[k] = (2.0 - 2.0 * std::cos(M_PI * k / ny)) / hy2;
  }

  std::lock_guard<std::mutex> lock(plan_mutex());
  AlignedBuffer buf(grid.cell_count());
  if (grid.dim == 1) {
    plan_fwd_ = fftw_plan_r2r_1d(nx, buf.p, buf.p, FFTW_REDFT10, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_r2r_1d(nx, buf.p, buf.p, FFTW_REDFT01, FFTW_ESTIMATE);
  } else {
    plan_fwd_ = fftw_plan_r2r_2d(ny, nx, buf.p, buf.p, FFTW_REDFT10,
                                 FFTW_REDFT10, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_r2r_2d(ny, nx, buf.p, buf.p, FFTW_REDFT01,
                                 FFTW_REDFT01, FFTW_ESTIMATE);
  }
  if (!plan_fwd_ || !plan_inv_)
    throw numerical_error("helmholtz: FFTW plan creation failed");
}

HelmholtzSolver::~HelmholtzSolver() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

Field HelmholtzSolver::solve(const Field& rho, double eps) const {
  if (!(eps >= 0.0)) throw invalid_parameter_error("helmholtz: eps must be >= 0");
  if (rho.grid.cells != grid_.cells || rho.grid.dim != grid_.dim)
    throw invalid_parameter_error("helmholtz: field grid does not match solver grid");
  return method_ == Method::spectral ? solve_spectral(rho, eps)
                                     : solve_cg(rho, eps);
}

Field HelmholtzSolver::solve_spectral(const Field& rho, double eps) const {
  const std::size_t n = grid_.cell_count();
  const int nx = grid_.cells[0], ny = grid_.cells[1];
  AlignedBuffer buf(n);
  // split off the mean so that constant inputs map to exactly constant
  // outputs and the solve preserves the mean to roundoff
  const double mean =
      par::sum(n, [&](std::size_t k) { return rho.values[k]; }) / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) buf.p[k] = rho.values[k] - mean;
  fftw_execute_r2r(static_cast<fftw_plan>(plan_fwd_), buf.p, buf.p);

  const double eps2 = eps * eps;
  const double norm = grid_.dim == 1 ? 1.0 / (2.0 * nx) : 1.0 / (4.0 * nx * ny);
  if (grid_.dim == 1) {
    for (int k = 0; k < nx; ++k)
      buf.p[k] *= norm / (sigma_ + eps2 * eig_x_[k]);
  } else {
    par::parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
      const int j = static_cast<int>(jj);
      const double ey = eig_y_[j];
      double* row = buf.p + static_cast<std::size_t>(j) * nx;
      for (int k = 0; k < nx; ++k)
        row[k] *= norm / (sigma_ + eps2 * (eig_x_[k] + ey));
    });
  }

  fftw_execute_r2r(static_cast<fftw_plan>(plan_inv_), buf.p, buf.p);
  Field phi(grid_);
  const double mean_phi = mean / sigma_;
  for (std::size_t k = 0; k < n; ++k) phi.values[k] = buf.p[k] + mean_phi;
  return phi;
}

Field HelmholtzSolver::solve_cg(const Field& rho, double eps) const {
  const double eps2 = eps * eps;
  auto apply = [&](const Field& u) {
    Field lap = laplacian(u);
    Field out(grid_);
    par::parallel_for(out.size(), [&](std::size_t k) {
      out[k] = sigma_ * u[k] - eps2 * lap[k];
    });
    return out;
  };
  const double vol = grid_.cell_volume();
  auto dot = [&](const Field& u, const Field& v) {
    return vol * par::sum(u.size(), [&](std::size_t k) { return u[k] * v[k]; });
  };

  Field x(grid_, 0.0);
  Field r = rho;
  Field p = r;
  double rr = dot(r, r);
  const double rhs_norm = std::sqrt(dot(rho, rho));
  if (rhs_norm == 0.0) return x;
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rr) <= tol_ * rhs_norm) return x;
    Field ap = apply(p);
    const double alpha = rr / dot(p, ap);
    par::parallel_for(x.size(), [&](std::size_t k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    });
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    par::parallel_for(p.size(), [&](std::size_t k) { p[k] = r[k] + beta * p[k]; });
  }
  throw numerical_error("helmholtz CG: no convergence in 10000 iterations, residual " +
                        std::to_string(std::sqrt(rr) / rhs_norm));
}

double HelmholtzSolver::residual(const Field& rho, const Field& phi,
                                 double eps) const {
  if (rho.grid.cells != phi.grid.cells)
    throw invalid_parameter_error("helmholtz residual: grids do not match");
  Field lap = laplacian(phi);
  const double eps2 = eps * eps;
  const double vol = grid_.cell_volume();
  const double ss = par::sum(rho.size(), [&](std::size_t k) {
    const double r = sigma_ * phi[k] - eps2 * lap[k] - rho[k];
    return r * r;
  });
  return std::sqrt(vol * ss);
}

}  // namespace pks
