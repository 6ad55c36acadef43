#include "pks/gammalab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pks/errors.hpp"
#include "pks/parallel.hpp"
#include "pks/quadrature.hpp"

namespace pks {

OptimalProfile::OptimalProfile(const Nonlinearity& nl, const PhaseConstants& pc)
    : pc_(pc), nl_(nl) {
  if (!nl.normalized())
    throw invalid_parameter_error(
        "optimal profile: requires the normalized system (sigma = beta = 1)");
  const double rc = pc.rho_c;
  const double cut = 1e-8 * rc;  // tail truncation level
  const double half = 0.5 * rc;

  // level grid geometric toward each well, from rho_c/2 down to the cut
  const int per_side = 2000;
  const double ratio = std::pow(cut / half, 1.0 / per_side);
  std::vector<double> levels;
  levels.reserve(2 * per_side + 1);
  for (int k = per_side; k >= 1; --k)
    levels.push_back(half * std::pow(ratio, k));  // lower tail, increasing
  levels.push_back(half);
  for (int k = 1; k <= per_side; ++k)
    levels.push_back(rc - half * std::pow(ratio, k));  // upper side

  auto inv_speed = [&](double q) {
    const double g = std::max(cell_problem_g(nl_, pc_, q), 0.0);
    if (g <= 0.0)
      throw numerical_error("optimal profile: g vanished inside the layer at q = " +
                            std::to_string(q));
    return 1.0 / std::sqrt(2.0 * g);
  };

  const std::size_t n = levels.size();
  q_ = levels;
  x_.assign(n, 0.0);
  slope_.assign(n, 0.0);
  // per-interval tolerance relative to a midpoint estimate; an absolute one
  // stalls on the rounding noise of g near the wells
  auto piece = [&](double qa, double qb) {
    const double rough = (qb - qa) * inv_speed(0.5 * (qa + qb));
    return adaptive_simpson(inv_speed, qa, qb, 1e-9 * rough + 1e-15, 40);
  };
  const std::size_t mid = per_side;  // index of rho_c/2
  for (std::size_t k = mid; k + 1 < n; ++k)
    x_[k + 1] = x_[k] + piece(q_[k], q_[k + 1]);
  for (std::size_t k = mid; k > 0; --k)
    x_[k - 1] = x_[k] - piece(q_[k - 1], q_[k]);
  for (std::size_t k = 0; k < n; ++k)
    slope_[k] = std::sqrt(2.0 * std::max(cell_problem_g(nl_, pc_, q_[k]), 0.0));
}

double OptimalProfile::operator()(double u) const {
  if (u <= x_.front()) return 0.0;
  if (u >= x_.back()) return pc_.rho_c;
  const auto it = std::upper_bound(x_.begin(), x_.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double hx = x_[i + 1] - x_[i];
  const double t = (u - x_[i]) / hx;
  const double secant = (q_[i + 1] - q_[i]) / hx;
  const double d0 = std::min(slope_[i], 3.0 * secant);
  const double d1 = std::min(slope_[i + 1], 3.0 * secant);
  const double t2 = t * t, t3 = t2 * t;
  return q_[i] * (2 * t3 - 3 * t2 + 1) + hx * d0 * (t3 - 2 * t2 + t) +
         q_[i + 1] * (-2 * t3 + 3 * t2) + hx * d1 * (t3 - t2);
}

double OptimalProfile::x_of_level(double q) const {
  const auto it = std::upper_bound(q_.begin(), q_.end(), q);
  if (it == q_.begin() || it == q_.end())
    throw not_found_error("optimal profile: level outside the tabulated range");
  const std::size_t i = static_cast<std::size_t>(it - q_.begin()) - 1;
  const double t = (q - q_[i]) / (q_[i + 1] - q_[i]);
  return x_[i] + t * (x_[i + 1] - x_[i]);
}

double OptimalProfile::width_1090() const {
  return x_of_level(0.9 * pc_.rho_c) - x_of_level(0.1 * pc_.rho_c);
}

double OptimalProfile::rho_width_1090() const {
  // psi levels at which the density f*'(psi - a) crosses 0.1/0.9 rho_c
  const double lo = nl_.fp(0.1 * pc_.rho_c) + pc_.a;
  const double hi = nl_.fp(0.9 * pc_.rho_c) + pc_.a;
  return x_of_level(hi) - x_of_level(lo);
}

RecoveryProfile build_recovery(const Geometry& E, const Nonlinearity& nl,
                               const PhaseConstants& pc,
                               const OptimalProfile& profile, double eps,
                               const Grid& grid, double target_mass) {
  if (!(eps > 0.0)) throw invalid_parameter_error("build_recovery: eps must be positive");
  const double rc = pc.rho_c;
  const double target = target_mass > 0.0 ? target_mass : rc * E.measure;

  // signed distance sampled once
  Field sd = Field::from_function(
      grid, [&](double x, double y) { return E.signed_distance(x, y); });

  auto mass_at = [&](double shift) {
    const double vol = grid.cell_volume();
    return vol * par::sum(sd.size(), [&](std::size_t k) {
      const double psi = std::clamp(profile((sd[k] + shift) / eps), 0.0, rc);
      return nl.conjugate_prime(psi - pc.a);
    });
  };

  // monotone bisection on the shift
  double lo = -4.0 * eps * std::max(1.0, std::abs(profile.u_min()));
  double hi = -lo;
  const double diam = std::hypot(grid.extent[0], grid.dim == 2 ? grid.extent[1] : 0.0);
  while (mass_at(lo) > target) {
    lo *= 2.0;
    if (-lo > diam)
      throw config_error("build_recovery: cannot bracket the mass shift from below");
  }
  while (mass_at(hi) < target) {
    hi *= 2.0;
    if (hi > diam)
      throw config_error(
          "build_recovery: domain too small to reach the target mass");
  }
  const double tol = 1e-9 * std::max(1.0, target);
  double mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double m = mass_at(mid);
    if (std::abs(m - target) <= tol) break;
    (m < target ? lo : hi) = mid;
    if (it == 199)
      throw numerical_error("build_recovery: mass bisection stalled at |dm| = " +
                            std::to_string(std::abs(m - target)));
  }

  RecoveryProfile out;
  out.eps = eps;
  out.mass_shift = mid;
  out.psi = Field(grid);
  out.rho = Field(grid);
  par::parallel_for(sd.size(), [&](std::size_t k) {
    const double psi = std::clamp(profile((sd[k] + mid) / eps), 0.0, rc);
    out.psi[k] = psi;
    out.rho[k] = nl.conjugate_prime(psi - pc.a);
  });
  return out;
}

void extrapolate_ladder(LadderResult& lr) {
  const std::size_t n = lr.value.size();
  if (n < 3) throw invalid_parameter_error("ladder: need at least 3 points");
  const double v0 = lr.value[n - 3], v1 = lr.value[n - 2], v2 = lr.value[n - 1];
  const double d1 = v1 - v0, d2 = v2 - v1;
  const double scale = std::max({std::abs(v0), std::abs(v1), std::abs(v2), 1e-300});
  if (std::abs(d2) <= 1e-4 * scale || std::abs(d1) <= 1e-4 * scale ||
      d1 * d2 <= 0.0) {
    // converged below measurable differences (or non-monotone noise floor)
    lr.plateaued = true;
    lr.extrapolated = v2;
    lr.fitted_order = std::numeric_limits<double>::infinity();
    return;
  }
  const double e0 = lr.eps[n - 3], e1 = lr.eps[n - 2], e2 = lr.eps[n - 1];
  // solve (e2^p - e1^p)/(e1^p - e0^p) = d2/d1 for p
  const double ratio = d2 / d1;
  auto fval = [&](double p) {
    return (std::pow(e2, p) - std::pow(e1, p)) /
               (std::pow(e1, p) - std::pow(e0, p)) - ratio;
  };
  double plo = 0.05, phi_ = 8.0;
  if (fval(plo) * fval(phi_) > 0.0) {
    lr.plateaued = true;
    lr.extrapolated = v2;
    lr.fitted_order = std::numeric_limits<double>::infinity();
    return;
  }
  for (int it = 0; it < 80; ++it) {
    const double pm = 0.5 * (plo + phi_);
    (fval(plo) * fval(pm) <= 0.0 ? phi_ : plo) = pm;
  }
  const double p = 0.5 * (plo + phi_);
  const double c = d2 / (std::pow(e2, p) - std::pow(e1, p));
  lr.fitted_order = p;
  lr.extrapolated = v2 - c * std::pow(e2, p);
  lr.plateaued = false;
}

namespace {

void check_layer_resolution(const OptimalProfile& profile, double eps,
                            const Grid& grid, int min_cells) {
  const double layer = profile.rho_width_1090() * eps;
  const double h = grid.min_spacing();
  if (layer < min_cells * h) {
    std::ostringstream os;
    os << "under-resolved layer: eps = " << eps << " gives a 10-90 width of "
       << layer << " but " << min_cells << " cells need " << min_cells * h;
    throw config_error(os.str());
  }
}

void validate_ladder(const std::vector<double>& eps_ladder) {
  if (eps_ladder.size() < 4)
    throw invalid_parameter_error("ladder: need at least 4 epsilon values");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] < eps_ladder[i - 1]))
      throw invalid_parameter_error("ladder: epsilon values must decrease strictly");
}

}  // namespace

LadderResult gamma_limsup_experiment(const Geometry& E, const Nonlinearity& nl,
                                     const PhaseConstants& pc, const Grid& grid,
                                     const std::vector<double>& eps_ladder,
                                     int min_cells_per_layer) {
  validate_ladder(eps_ladder);
  OptimalProfile profile(nl, pc);
  for (double e : eps_ladder)
    check_layer_resolution(profile, e, grid, min_cells_per_layer);

  EnergyModel model(nl, pc, grid);
  LadderResult lr;
  lr.eps = eps_ladder;
  lr.target = pc.gamma * pc.rho_c * E.perimeter;
  for (double e : eps_ladder) {
    RecoveryProfile rec = build_recovery(E, nl, pc, profile, e, grid);
    EnergyReport rep = model.modica(rec.rho, e);
    lr.value.push_back(rep.j_eps_modica);
    lr.reports.push_back(rep);
  }
  extrapolate_ladder(lr);
  lr.relative_gap = std::abs(lr.extrapolated - lr.target) /
                    std::max(std::abs(lr.target), 1e-300);
  return lr;
}

LadderResult naive_sequence_experiment(const Geometry& E, const Nonlinearity& nl,
                                       const PhaseConstants& pc, const Grid& grid,
                                       const std::vector<double>& eps_ladder,
                                       int min_cells_per_layer) {
  validate_ladder(eps_ladder);
  // for the sharp sequence the transition layer is the one of phi, width ~ eps
  const double h = grid.min_spacing();
  for (double e : eps_ladder)
    if (e < min_cells_per_layer * h)
      throw config_error("under-resolved potential layer: eps = " + std::to_string(e));

  Field rho_sharp = Field::from_function(grid, [&](double x, double y) {
    return E.signed_distance(x, y) >= 0.0 ? pc.rho_c : 0.0;
  });

  EnergyModel model(nl, pc, grid);
  LadderResult lr;
  lr.eps = eps_ladder;
  lr.target = pc.gamma_max * pc.rho_c * E.perimeter;
  for (double e : eps_ladder) {
    EnergyReport rep = model.modica(rho_sharp, e);
    lr.value.push_back(rep.j_eps_modica);
    lr.reports.push_back(rep);
  }
  extrapolate_ladder(lr);
  lr.relative_gap = std::abs(lr.extrapolated - lr.target) /
                    std::max(std::abs(lr.target), 1e-300);
  return lr;
}

LadderResult first_variation_convergence(const Geometry& E, const Nonlinearity& nl,
                                         const PhaseConstants& pc, const Grid& grid,
                                         const std::vector<double>& eps_ladder,
                                         const TestVectorField& xi, double target,
                                         int min_cells_per_layer) {
  validate_ladder(eps_ladder);
  OptimalProfile profile(nl, pc);
  for (double e : eps_ladder)
    check_layer_resolution(profile, e, grid, min_cells_per_layer);
  xi.validate_on(grid);

  EnergyModel model(nl, pc, grid);
  LadderResult lr;
  lr.eps = eps_ladder;
  lr.target = target;
  for (double e : eps_ladder) {
    RecoveryProfile rec = build_recovery(E, nl, pc, profile, e, grid);
    lr.value.push_back(model.first_variation_lhs(rec.rho, e, xi));
  }
  extrapolate_ladder(lr);
  lr.relative_gap = std::abs(lr.extrapolated - lr.target) /
                    std::max(std::abs(lr.target), 1e-300);
  return lr;
}

double circle_curvature_pairing(double cx, double cy, double R,
                                const TestVectorField& xi) {
  const int n = 4096;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * M_PI * (k + 0.5) / n;
    const double nx = std::cos(th), ny = std::sin(th);
    const double x = cx + R * nx, y = cy + R * ny;
    const auto J = xi.jacobian(x, y);
    const double div = J[0] + J[3];
    const double nn_D = nx * nx * J[0] + nx * ny * (J[1] + J[2]) + ny * ny * J[3];
    acc += div - nn_D;
  }
  return acc * 2.0 * M_PI * R / n;
}

}  // namespace pks
