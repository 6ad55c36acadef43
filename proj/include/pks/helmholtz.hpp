#ifndef PKS_HELMHOLTZ_HPP
#define PKS_HELMHOLTZ_HPP

#include "pks/field.hpp"

namespace pks {

// Solves sigma phi - eps^2 lap phi = rho with homogeneous Neumann conditions.
//
// The spectral path diagonalizes the discrete operator in the cell-centered
// cosine basis; the modal eigenvalues use the stencil symbol
// (2 - 2 cos(pi k / N)) / h^2, not the continuum one, so solve and residual
// are mutually exact. The conjugate-gradient path solves the same system
// matrix-free to a relative residual tolerance.
class HelmholtzSolver {
 public:
  enum class Method { spectral, conjugate_gradient };

  HelmholtzSolver(const Grid& grid, double sigma,
                  Method method = Method::spectral, double tolerance = 1e-10);
  ~HelmholtzSolver();

  HelmholtzSolver(const HelmholtzSolver&) = delete;
  HelmholtzSolver& operator=(const HelmholtzSolver&) = delete;

  // Immutable solver; safe to call concurrently.
  Field solve(const Field& rho, double eps) const;

  // L2 norm of sigma phi - eps^2 lap phi - rho.
  double residual(const Field& rho, const Field& phi, double eps) const;

  double sigma() const { return sigma_; }
  const Grid& grid() const { return grid_; }

 private:
  Field solve_spectral(const Field& rho, double eps) const;
  Field solve_cg(const Field& rho, double eps) const;

  Grid grid_;
  double sigma_;
  Method method_;
  double tol_;
  std::vector<double> eig_x_, eig_y_;  // Neumann stencil eigenvalues per axis
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

}  // namespace pks

#endif
