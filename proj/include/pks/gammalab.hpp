#ifndef PKS_GAMMALAB_HPP
#define PKS_GAMMALAB_HPP

#include <vector>

#include "pks/energy.hpp"
#include "pks/field.hpp"
#include "pks/geometry.hpp"
#include "pks/potentials.hpp"

namespace pks {

// The 1D transition profile Q with Q' = sqrt(2 g(Q)), Q(-inf) = 0,
// Q(+inf) = rho_c, anchored at Q(0) = rho_c/2. Built once by inverting
// x(q) = int dq / sqrt(2 g(q)) with adaptive quadrature on a well-refined
// level grid; tails truncated where min(Q, rho_c - Q) < 1e-8 rho_c.
// Requires a normalized system (sigma = beta = 1).
class OptimalProfile {
 public:
  OptimalProfile(const Nonlinearity& nl, const PhaseConstants& pc);

  double operator()(double u) const;  // Q(u); clamped to 0 / rho_c beyond tails
  double u_min() const { return x_.front(); }
  double u_max() const { return x_.back(); }

  // 10%-90% widths (in units of epsilon) of the profile and of the
  // transformed density f*'(Q - a).
  double width_1090() const;
  double rho_width_1090() const;

  const PhaseConstants& constants() const { return pc_; }

 private:
  double x_of_level(double q) const;  // inverse lookup on the table
  PhaseConstants pc_;
  std::vector<double> x_, q_, slope_;
  // density levels are mapped through f*' of the stored nonlinearity
  Nonlinearity nl_;
};

// Near-optimal density built from the profile across the boundary of E:
// psi = Q((signed_distance + mass_shift)/eps) clamped to [0, rho_c],
// rho = psi - g'(psi) = f*'(psi - a). mass_shift is tuned by monotone
// bisection so that the mass of rho matches the sharp-limit mass rho_c |E|
// (or an explicit target).
struct RecoveryProfile {
  double eps = 0.0;
  Field psi;
  Field rho;
  double mass_shift = 0.0;
};

RecoveryProfile build_recovery(const Geometry& E, const Nonlinearity& nl,
                               const PhaseConstants& pc,
                               const OptimalProfile& profile, double eps,
                               const Grid& grid, double target_mass = -1.0);

// One epsilon ladder: values, Richardson extrapolation on the last three
// points, target, and the fitted correction order. Sequences that converge
// below measurable differences before the fit are flagged plateaued and
// report the last value (fitted_order = +inf).
struct LadderResult {
  std::vector<double> eps;
  std::vector<double> value;
  std::vector<EnergyReport> reports;  // energy ladders only
  double extrapolated = 0.0;
  double target = 0.0;
  double relative_gap = 0.0;
  double fitted_order = 0.0;
  bool plateaued = false;
};

// Fit value(eps) ~ limit + C eps^p from the last three points.
void extrapolate_ladder(LadderResult& lr);

// limsup side: J_eps of the recovery sequence along the ladder;
// target = gamma rho_c P(E). Refuses to run when the grid does not resolve
// at least min_cells_per_layer cells across the 10-90 density layer.
LadderResult gamma_limsup_experiment(const Geometry& E, const Nonlinearity& nl,
                                     const PhaseConstants& pc, const Grid& grid,
                                     const std::vector<double>& eps_ladder,
                                     int min_cells_per_layer = 8);

// naive side: J_eps of the fixed sharp indicator rho_c chi_E;
// target = (beta rho_c^2 / (4 sigma^{3/2})) P(E).
LadderResult naive_sequence_experiment(const Geometry& E, const Nonlinearity& nl,
                                       const PhaseConstants& pc, const Grid& grid,
                                       const std::vector<double>& eps_ladder,
                                       int min_cells_per_layer = 8);

// First-variation convergence along a recovery ladder. `target` is the
// geometric value gamma rho_c int_{boundary E} (div xi - nu x nu : Dxi).
LadderResult first_variation_convergence(const Geometry& E, const Nonlinearity& nl,
                                         const PhaseConstants& pc, const Grid& grid,
                                         const std::vector<double>& eps_ladder,
                                         const TestVectorField& xi, double target,
                                         int min_cells_per_layer = 8);

// int over the circle |x - c| = R of (div xi - nu x nu : D xi) ds by
// trapezoid quadrature; multiply by gamma rho_c for the sharp-limit target.
double circle_curvature_pairing(double cx, double cy, double R,
                                const TestVectorField& xi);

}  // namespace pks

#endif
