#ifndef PKS_ENERGY_HPP
#define PKS_ENERGY_HPP

#include <array>
#include <functional>
#include <memory>

#include "pks/field.hpp"
#include "pks/helmholtz.hpp"
#include "pks/potentials.hpp"

namespace pks {

// Per-snapshot energy record. j_eps_modica is exactly the sum of the three
// term fields as accumulated.
struct EnergyReport {
  double j_eps_primal = 0.0;
  double j_eps_modica = 0.0;
  double f_eps_of_phi = 0.0;     // (1/eps) int g(phi) + eps (beta/2) int |grad phi|^2
  double well_term = 0.0;        // (1/eps) int W(rho)
  double coupling_term = 0.0;    // (1/eps) int beta/(2 sigma) (rho - sigma phi)^2
  double gradient_term = 0.0;    // eps int (beta/2) |grad phi|^2
  double bv_surrogate = 0.0;     // int |grad F(phi)|
  double mass = 0.0;
  double perimeter_estimate = 0.0;  // bv_surrogate / (gamma rho_c)
  double time = 0.0;
};

// Closed-form test vector field xi with xi . n = 0 on the boundary, together
// with exact divergence and Jacobian evaluators. In 1D the y component is 0.
struct TestVectorField {
  std::function<std::array<double, 2>(double, double)> value;
  std::function<double(double, double)> divergence;
  // row-major [d xi_x/dx, d xi_x/dy, d xi_y/dx, d xi_y/dy]
  std::function<std::array<double, 4>(double, double)> jacobian;

  // xi(x) = eta(|x - c|) (x - c) with a C^2 cutoff eta: 1 on [0, r0],
  // 0 beyond r1. Works in 1D (c = (cx, 0)) and 2D.
  static TestVectorField radial_cutoff(double cx, double cy, double r0,
                                       double r1, int dim = 2);
  // exactly divergence-free field from a compactly supported stream bump on
  // (x0, x1) x (y0, y1); tangential on any enclosing box.
  static TestVectorField divergence_free_bump(double x0, double x1, double y0,
                                              double y1);

  // samples the boundary faces; throws invalid_parameter_error when the
  // normal component does not vanish
  void validate_on(const Grid& grid) const;
};

// Energy functionals on a fixed grid. The chemoattractant phi is always
// recomputed from rho by the internal Helmholtz solver; the face stencil of
// the gradient term matches the solver residual, which makes the primal and
// Modica forms agree to roundoff on the spectral path.
class EnergyModel {
 public:
  EnergyModel(const Nonlinearity& nl, const PhaseConstants& pc,
              const Grid& grid,
              HelmholtzSolver::Method method = HelmholtzSolver::Method::spectral);

  // (1/eps) int f(rho) + a rho - (beta/2) rho phi
  double primal(const Field& rho, double eps) const;

  // All report fields; phi from the Helmholtz solve, grad phi at faces.
  EnergyReport modica(const Field& rho, double eps, double time = 0.0) const;

  // J_0 of a two-valued field: gamma * rho_c * perimeter estimate.
  // Throws domain_error unless rho takes values in {0, rho_c} within 1e-6.
  double sharp(const Field& rho_limit) const;

  // (1/eps) int [f(rho)+a rho - beta rho phi] div xi - beta rho grad phi . xi
  double first_variation_lhs(const Field& rho, double eps,
                             const TestVectorField& xi) const;

  // (1/eps) int [W(rho) + beta/(2 sigma) (rho - sigma phi)^2] div xi
  //  + (beta eps/2) int |grad phi|^2 div xi - beta eps int grad phi x grad phi : Dxi
  double first_variation_rhs_discrete(const Field& rho, double eps,
                                      const TestVectorField& xi) const;

  // int (div xi - n x n : Dxi) |grad F(phi)| with n the normalized gradient of
  // F(phi); flat regions carry weight |grad F|, so the 1e-14 floor on the
  // normalization never pollutes the integral.
  double sharp_variation_surrogate(const Field& rho, double eps,
                                   const TestVectorField& xi) const;

  // Mean-zero rescaled pressure
  // (1/eps)[rho (f'(rho) - f'(rho_c)) + (beta/sigma) rho (rho_c - sigma phi)].
  Field pressure_field(const Field& rho, double eps) const;

  const HelmholtzSolver& solver() const { return *solver_; }
  const ProfileTable& profile() const { return *profile_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  const PhaseConstants& constants() const { return pc_; }

 private:
  void check_density(const Field& rho) const;

  Nonlinearity nl_;
  PhaseConstants pc_;
  std::shared_ptr<HelmholtzSolver> solver_;
  std::shared_ptr<ProfileTable> profile_;
};

}  // namespace pks

#endif
