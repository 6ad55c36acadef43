#include "pks/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pks/errors.hpp"
#include "pks/parallel.hpp"

namespace pks {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

}  // namespace

FaceField Dynamics::velocity(const Field& rho, double eps) const {
  const Nonlinearity& nl = model_.nonlinearity();
  Field potential(rho.grid);
  Field phi = model_.solver().solve(rho, eps);
  const double beta = nl.beta();
  par::parallel_for(rho.size(), [&](std::size_t k) {
    potential[k] = -nl.fp(std::max(rho[k], 0.0)) + beta * phi[k];
  });
  FaceField v = gradient(potential);
  const double inv_eps = 1.0 / eps;
  for (auto& comp : v.comp)
    par::parallel_for(comp.size(), [&](std::size_t k) { comp[k] *= inv_eps; });
  return v;
}

double Dynamics::step(SimState& state, const StepperConfig& config,
                      double dt_cap) const {
  const Nonlinearity& nl = model_.nonlinearity();
  const Grid& g = state.rho.grid;
  const Field& rho = state.rho;
  const double eps = state.eps;
  const double beta = nl.beta();
  const int nx = g.cells[0], ny = g.cells[1];
  const int dim = g.dim;

  if (!(config.cfl_safety > 0.0 && config.cfl_safety <= 1.0))
    throw invalid_parameter_error("stepper: cfl_safety must be in (0, 1]");

  Field phi = model_.solver().solve(rho, eps);
  FaceField gphi = gradient(phi);

  // pressure-integrated diffusive potential rho f'(rho) - f(rho)
  Field pint(g);
  Field fprime(g);
  par::parallel_for(rho.size(), [&](std::size_t k) {
    const double r = std::max(rho[k], 0.0);
    const double fp = nl.fp(r);
    fprime[k] = fp;
    pint[k] = r * fp - nl.f(r);
  });
  FaceField gpint = gradient(pint);

  // CFL data
  double max_rff = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double r = std::max(rho[k], 0.0);
    max_rff = std::max(max_rff, r * nl.fpp(r));
  }
  double max_drift = 0.0;
  for (const auto& comp : gphi.comp)
    for (double v : comp) max_drift = std::max(max_drift, std::abs(beta * v));

  const double h = g.min_spacing();
  double dt = config.dt_max;
  if (max_rff > 0.0)
    dt = std::min(dt, h * h * eps / (2.0 * dim * max_rff));
  if (max_drift > 0.0) dt = std::min(dt, h * eps / (dim * max_drift));
  dt *= config.cfl_safety;
  if (dt_cap > 0.0) dt = std::min(dt, dt_cap);
  if (!(dt > 1e-15 * std::max(1.0, std::abs(state.t)))) {
    std::ostringstream os;
    os << "stepper: dt underflow (dt = " << dt << ", max rho f'' = " << max_rff
       << ", max |beta grad phi| = " << max_drift << ", t = " << state.t << ")";
    throw step_error(os.str());
  }

  // total face flux J = -grad(rho f' - f) + beta rho_up grad phi,
  // zero on boundary faces
  const bool limited =
      config.flux_scheme == StepperConfig::FluxScheme::central_with_limiter;
  FaceField flux(g);
  par::parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 1; i < nx; ++i) {
      const double w = beta * gphi.x(i, j);
      double r_up;
      if (w >= 0.0) {
        r_up = rho.at(i - 1, j);
        if (limited && i >= 2)
          r_up += 0.5 * minmod(rho.at(i - 1, j) - rho.at(i - 2, j),
                               rho.at(i, j) - rho.at(i - 1, j));
      } else {
        r_up = rho.at(i, j);
        if (limited && i + 1 < nx)
          r_up -= 0.5 * minmod(rho.at(i + 1, j) - rho.at(i, j),
                               rho.at(i, j) - rho.at(i - 1, j));
      }
      flux.x(i, j) = -gpint.x(i, j) + std::max(r_up, 0.0) * w;
    }
  });
  if (dim == 2) {
    par::parallel_for(static_cast<std::size_t>(ny - 1), [&](std::size_t jj) {
      const int j = static_cast<int>(jj) + 1;
      for (int i = 0; i < nx; ++i) {
        const double w = beta * gphi.y(i, j);
        double r_up;
        if (w >= 0.0) {
          r_up = rho.at(i, j - 1);
          if (limited && j >= 2)
            r_up += 0.5 * minmod(rho.at(i, j - 1) - rho.at(i, j - 2),
                                 rho.at(i, j) - rho.at(i, j - 1));
        } else {
          r_up = rho.at(i, j);
          if (limited && j + 1 < ny)
            r_up -= 0.5 * minmod(rho.at(i, j + 1) - rho.at(i, j),
                                 rho.at(i, j) - rho.at(i, j - 1));
        }
        flux.y(i, j) = -gpint.y(i, j) + std::max(r_up, 0.0) * w;
      }
    });
  }

  // dissipation rate int rho |v|^2, evaluated with the scheme's own flux:
  // rho v = -flux and eps v = grad(beta phi - f'), so the rate is the face
  // pairing -(1/eps^2) sum grad(f' - beta phi) . flux. At smooth profiles this
  // is exactly int rho |v|^2; at fronts it carries the upwind rho weighting
  // that actually drives the discrete energy decrease.
  const double vol = g.cell_volume();
  FaceField gfp = gradient(fprime);
  double rate = 0.0;
  {
    double acc = par::sum(static_cast<std::size_t>(ny), [&](std::size_t jj) {
      const int j = static_cast<int>(jj);
      double s = 0.0;
      for (int i = 1; i < nx; ++i)
        s -= (gfp.x(i, j) - beta * gphi.x(i, j)) * flux.x(i, j);
      return s;
    });
    if (dim == 2)
      acc += par::sum(static_cast<std::size_t>(ny - 1), [&](std::size_t jj) {
        const int j = static_cast<int>(jj) + 1;
        double s = 0.0;
        for (int i = 0; i < nx; ++i)
          s -= (gfp.y(i, j) - beta * gphi.y(i, j)) * flux.y(i, j);
        return s;
      });
    rate = acc * vol / (eps * eps);
  }

  Field div = divergence(flux);
  const double scale = dt / eps;
  double clipped = 0.0;
  bool bad = false;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    double v = rho[k] - scale * div[k];
    if (!std::isfinite(v)) bad = true;
    if (config.negativity_clip && v < 0.0) {
      clipped += -v;
      v = 0.0;
    }
    state.rho[k] = v;
  }
  if (bad) throw numerical_error("stepper: NaN/Inf detected in the density update");

  state.clipped_mass += clipped * vol;
  state.dissipation_accum += dt * rate;
  state.t += dt;
  state.step_count += 1;
  return dt;
}

SimState Dynamics::run(SimState state, const StepperConfig& config,
                       double t_end, double snapshot_every,
                       const SnapshotHook& hook) const {
  if (!(t_end > state.t))
    throw invalid_parameter_error("run: t_end must exceed the current time");
  if (!(snapshot_every > 0.0))
    throw invalid_parameter_error("run: snapshot_every must be positive");

  EnergyReport rep = model_.modica(state.rho, state.eps, state.t);
  const double j_initial = rep.j_eps_modica;
  const double tol_diss = 1e-3 * (1.0 + std::abs(j_initial));
  double j_prev = j_initial;
  if (hook) hook(state, rep);

  double next_snap = state.t + snapshot_every;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  while (state.t < t_end - t_eps) {
    const double cap = std::min(next_snap, t_end) - state.t;
    step(state, config, cap);
    if (state.t >= std::min(next_snap, t_end) - t_eps) {
      rep = model_.modica(state.rho, state.eps, state.t);
      const double j_now = rep.j_eps_modica;
      if (j_now + state.dissipation_accum > j_initial + tol_diss) {
        std::ostringstream os;
        os << "dissipation inequality violated at t = " << state.t << ": J = "
           << j_now << ", accumulated = " << state.dissipation_accum
           << ", J(0) = " << j_initial << ", slack = " << tol_diss;
        throw numerical_error(os.str());
      }
      if (j_now > j_prev + tol_diss) {
        std::ostringstream os;
        os << "energy increased between snapshots at t = " << state.t << ": "
           << j_prev << " -> " << j_now << " (slack " << tol_diss << ")";
        throw numerical_error(os.str());
      }
      j_prev = j_now;
      if (hook) hook(state, rep);
      while (next_snap <= state.t + t_eps) next_snap += snapshot_every;
    }
  }
  return state;
}

Field indicator_data(const Grid& grid, const Geometry& E, double rho_c,
                     int mollify_cells) {
  const double w = std::max(mollify_cells, 1) * grid.min_spacing();
  return Field::from_function(grid, [&](double x, double y) {
    const double sd = E.signed_distance(x, y);
    return rho_c * 0.5 * (1.0 + std::tanh(2.0 * sd / w));
  });
}

Field bump_data(const Grid& grid, int n_bumps, double amplitude,
                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.15, 0.85), uw(0.04, 0.10);
  struct Bump {
    double cx, cy, w;
  };
  std::vector<Bump> bumps;
  for (int b = 0; b < n_bumps; ++b) {
    const double cx = ux(rng) * grid.extent[0];
    const double cy = grid.dim == 2 ? ux(rng) * grid.extent[1] : 0.0;
    const double w = uw(rng) * grid.extent[0];
    bumps.push_back({cx, cy, w});
  }
  return Field::from_function(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double d2 = (x - b.cx) * (x - b.cx) +
                        (grid.dim == 2 ? (y - b.cy) * (y - b.cy) : 0.0);
      v += std::exp(-d2 / (2.0 * b.w * b.w));
    }
    return amplitude * v;
  });
}

}  // namespace pks
