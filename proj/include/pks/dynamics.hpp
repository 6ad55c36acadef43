#ifndef PKS_DYNAMICS_HPP
#define PKS_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "pks/energy.hpp"
#include "pks/field.hpp"
#include "pks/geometry.hpp"

namespace pks {

// The single mutable object of the dynamics driver.
struct SimState {
  Field rho;
  double t = 0.0;
  double eps = 0.0;
  double dissipation_accum = 0.0;  // int_0^t int rho |v|^2
  std::int64_t step_count = 0;
  double clipped_mass = 0.0;       // total mass removed by the negativity clip
};

struct StepperConfig {
  enum class FluxScheme { upwind, central_with_limiter };
  double cfl_safety = 0.8;           // in (0, 1]
  FluxScheme flux_scheme = FluxScheme::upwind;
  double dt_max = 1e-2;
  bool negativity_clip = true;
};

// Explicit conservative finite-volume integrator for
//   eps d_t rho = div( grad[rho f'(rho) - f(rho)] - beta rho grad phi )
// with zero total flux through boundary faces. The diffusive flux uses the
// exact gradient of rho f' - f at faces; the advective flux upwinds rho.
class Dynamics {
 public:
  explicit Dynamics(const EnergyModel& model) : model_(model) {}

  // v = grad(-f'(rho) + beta phi) / eps at faces.
  FaceField velocity(const Field& rho, double eps) const;

  // One step; dt = cfl_safety * min(h^2 eps / (2 d max rho f''),
  // h eps / (d max |beta grad phi|), dt_max). Returns the dt taken.
  // Mass is conserved to roundoff; dissipation_accum advances by
  // dt * int rho |v|^2. Throws step_error on dt underflow, numerical_error
  // on NaN.
  double step(SimState& state, const StepperConfig& config,
              double dt_cap = 0.0) const;

  using SnapshotHook = std::function<void(const SimState&, const EnergyReport&)>;

  // Integrates to t_end, invoking the hook every snapshot_every time units
  // (and at both endpoints). Asserts the dissipation inequality
  // J(t) + dissipation <= J(0) + tol_diss with tol_diss = 1e-3 (1 + J(0))
  // at every snapshot and aborts on violation.
  SimState run(SimState state, const StepperConfig& config, double t_end,
               double snapshot_every, const SnapshotHook& hook = {}) const;

  const EnergyModel& model() const { return model_; }

 private:
  EnergyModel model_;
};

// Initial data generators.

// rho_c times the indicator of E, mollified over about `mollify_cells` cells.
Field indicator_data(const Grid& grid, const Geometry& E, double rho_c,
                     int mollify_cells = 3);

// Sum of `n_bumps` smooth bumps with the given peak amplitude, deterministic
// in the seed.
Field bump_data(const Grid& grid, int n_bumps, double amplitude,
                std::uint64_t seed);

}  // namespace pks

#endif
