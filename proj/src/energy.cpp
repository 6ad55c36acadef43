#include "pks/energy.hpp"

#include <cmath>

#include "pks/errors.hpp"
#include "pks/parallel.hpp"

namespace pks {

namespace {

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smoothstep_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (t - 1.0) * (t - 1.0);
}

// cell-centered gradient components from face differences
void cell_gradient(const Field& f, Field& gx, Field& gy) {
  const Grid& g = f.grid;
  const int nx = g.cells[0], ny = g.cells[1];
  const double inv_hx = 1.0 / g.spacing(0);
  const double inv_hy = g.dim == 2 ? 1.0 / g.spacing(1) : 0.0;
  par::parallel_for(static_cast<std::size_t>(ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < nx; ++i) {
      const double gl = i > 0 ? (f.at(i, j) - f.at(i - 1, j)) * inv_hx : 0.0;
      const double gr = i + 1 < nx ? (f.at(i + 1, j) - f.at(i, j)) * inv_hx : 0.0;
      gx.at(i, j) = 0.5 * (gl + gr);
      if (g.dim == 2) {
        const double gd = j > 0 ? (f.at(i, j) - f.at(i, j - 1)) * inv_hy : 0.0;
        const double gu = j + 1 < ny ? (f.at(i, j + 1) - f.at(i, j)) * inv_hy : 0.0;
        gy.at(i, j) = 0.5 * (gd + gu);
      }
    }
  });
}

}  // namespace

TestVectorField TestVectorField::radial_cutoff(double cx, double cy, double r0,
                                               double r1, int dim) {
  if (!(r1 > r0 && r0 >= 0.0))
    throw invalid_parameter_error("radial_cutoff: need 0 <= r0 < r1");
  const double inv_w = 1.0 / (r1 - r0);
  auto eta = [=](double r) { return 1.0 - smoothstep((r - r0) * inv_w); };
  auto eta_prime = [=](double r) {
    return -smoothstep_prime((r - r0) * inv_w) * inv_w;
  };
  TestVectorField xi;
  xi.value = [=](double x, double y) -> std::array<double, 2> {
    const double dx = x - cx, dy = dim == 2 ? y - cy : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    const double e = eta(r);
    return {e * dx, e * dy};
  };
  xi.divergence = [=](double x, double y) {
    const double dx = x - cx, dy = dim == 2 ? y - cy : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    return static_cast<double>(dim) * eta(r) + r * eta_prime(r);
  };
  xi.jacobian = [=](double x, double y) -> std::array<double, 4> {
    const double dx = x - cx, dy = dim == 2 ? y - cy : 0.0;
    const double r = std::sqrt(dx * dx + dy * dy);
    const double e = eta(r);
    if (r < 1e-14) return {e, 0.0, 0.0, dim == 2 ? e : 0.0};
    const double ep_over_r = eta_prime(r) / r;
    return {e + ep_over_r * dx * dx, ep_over_r * dx * dy,
            ep_over_r * dy * dx,
            dim == 2 ? e + ep_over_r * dy * dy : 0.0};
  };
  return xi;
}

namespace {

// C^2 bump on (a, b), zero with zero slope at the endpoints
double bump(double t, double a, double b) {
  const double u = (t - a) / (b - a);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return smoothstep(2.0 * std::min(u, 1.0 - u));
}

double bump_prime(double t, double a, double b) {
  const double u = (t - a) / (b - a);
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double s = 2.0 * std::min(u, 1.0 - u);
  const double sign = u < 0.5 ? 1.0 : -1.0;
  return smoothstep_prime(s) * 2.0 * sign / (b - a);
}

}  // namespace

TestVectorField TestVectorField::divergence_free_bump(double x0, double x1,
                                                      double y0, double y1) {
  if (!(x1 > x0 && y1 > y0))
    throw invalid_parameter_error("divergence_free_bump: need x0 < x1, y0 < y1");
  // xi = curl of the stream bump chi = B(x) B(y): exactly divergence-free and
  // compactly supported, so xi . n = 0 on any enclosing box
  TestVectorField xi;
  xi.value = [=](double x, double y) -> std::array<double, 2> {
    return {bump(x, x0, x1) * bump_prime(y, y0, y1),
            -bump_prime(x, x0, x1) * bump(y, y0, y1)};
  };
  xi.divergence = [](double, double) { return 0.0; };
  xi.jacobian = [=](double x, double y) -> std::array<double, 4> {
    const double d = 1e-6 * std::min(x1 - x0, y1 - y0);
    // B'' of the piecewise quintic by central difference; exact enough for
    // the O(h^2) quadratures this field feeds
    const double bxpp = (bump_prime(x + d, x0, x1) - bump_prime(x - d, x0, x1)) / (2 * d);
    const double bypp = (bump_prime(y + d, y0, y1) - bump_prime(y - d, y0, y1)) / (2 * d);
    return {bump_prime(x, x0, x1) * bump_prime(y, y0, y1),
            bump(x, x0, x1) * bypp, -bxpp * bump(y, y0, y1),
            -bump_prime(x, x0, x1) * bump_prime(y, y0, y1)};
  };
  return xi;
}

void TestVectorField::validate_on(const Grid& grid) const {
  const int samples = 64;
  auto check = [&](double x, double y, double nx_, double ny_) {
    const auto v = value(x, y);
    if (std::abs(v[0] * nx_ + v[1] * ny_) > 1e-12)
      throw invalid_parameter_error(
          "test vector field: xi . n does not vanish on the boundary");
  };
  for (int k = 0; k < samples; ++k) {
    const double t = (k + 0.5) / samples;
    check(0.0, t * grid.extent[1], -1.0, 0.0);
    check(grid.extent[0], t * grid.extent[1], 1.0, 0.0);
    if (grid.dim == 2) {
      check(t * grid.extent[0], 0.0, 0.0, -1.0);
      check(t * grid.extent[0], grid.extent[1], 0.0, 1.0);
    }
  }
}

EnergyModel::EnergyModel(const Nonlinearity& nl, const PhaseConstants& pc,
                         const Grid& grid, HelmholtzSolver::Method method)
    : nl_(nl), pc_(pc) {
  solver_ = std::make_shared<HelmholtzSolver>(grid, nl.sigma(), method);
  profile_ = std::make_shared<ProfileTable>(nl, pc);
}

void EnergyModel::check_density(const Field& rho) const {
  const double lo = field_min(rho);
  if (lo < -1e-12)
    throw domain_error("energy: density has negative entries (min " +
                       std::to_string(lo) + ")");
}

double EnergyModel::primal(const Field& rho, double eps) const {
  if (!(eps > 0.0)) throw invalid_parameter_error("energy: eps must be positive");
  check_density(rho);
  Field phi = solver_->solve(rho, eps);
  const double beta = nl_.beta(), a = pc_.a;
  const double vol = rho.grid.cell_volume();
  const double total = vol * par::sum(rho.size(), [&](std::size_t k) {
    const double r = std::max(rho[k], 0.0);
    return nl_.f(r) + a * r - 0.5 * beta * r * phi[k];
  });
  return total / eps;
}

EnergyReport EnergyModel::modica(const Field& rho, double eps,
                                 double time) const {
  if (!(eps > 0.0)) throw invalid_parameter_error("energy: eps must be positive");
  check_density(rho);
  const Grid& g = rho.grid;
  Field phi = solver_->solve(rho, eps);
  FaceField gphi = gradient(phi);

  const double beta = nl_.beta(), sigma = nl_.sigma(), a = pc_.a;
  const double vol = g.cell_volume();

  EnergyReport rep;
  rep.time = time;
  rep.mass = integrate(rho);
  rep.well_term = vol / eps * par::sum(rho.size(), [&](std::size_t k) {
    const double r = std::max(rho[k], 0.0);
    return nl_.f(r) - 0.5 * beta / sigma * r * r + a * r;
  });
  rep.coupling_term =
      vol * beta / (2.0 * sigma * eps) * par::sum(rho.size(), [&](std::size_t k) {
        const double d = rho[k] - sigma * phi[k];
        return d * d;
      });
  // face-based gradient energy; boundary faces carry zero gradient, so the
  // sum below is the exact summation-by-parts partner of the solver residual
  double grad2 = par::sum(gphi.comp[0].size(), [&](std::size_t k) {
    const double v = gphi.comp[0][k];
    return v * v;
  });
  if (g.dim == 2)
    grad2 += par::sum(gphi.comp[1].size(), [&](std::size_t k) {
      const double v = gphi.comp[1][k];
      return v * v;
    });
  rep.gradient_term = eps * 0.5 * beta * vol * grad2;
  rep.j_eps_modica = rep.well_term + rep.coupling_term + rep.gradient_term;

  const double g_int = vol * par::sum(phi.size(), [&](std::size_t k) {
    return std::max(cell_problem_g(nl_, pc_, phi[k]), 0.0);
  });
  rep.f_eps_of_phi = g_int / eps + rep.gradient_term;

  Field F_of_phi(g);
  const ProfileTable& F = *profile_;
  par::parallel_for(phi.size(), [&](std::size_t k) { F_of_phi[k] = F(phi[k]); });
  rep.bv_surrogate = tv_isotropic(F_of_phi);
  const double gm_rc = F.gamma_rho_c();
  rep.perimeter_estimate = gm_rc > 0.0 ? rep.bv_surrogate / gm_rc : 0.0;

  rep.j_eps_primal = primal(rho, eps);
  return rep;
}

double EnergyModel::sharp(const Field& rho_limit) const {
  const double rc = pc_.rho_c;
  for (double v : rho_limit.values) {
    if (std::abs(v) > 1e-6 && std::abs(v - rc) > 1e-6)
      throw domain_error("sharp energy: field is not {0, rho_c}-valued (found " +
                         std::to_string(v) + ")");
  }
  const double P = perimeter_of_indicator(rho_limit, rc);
  return pc_.gamma * rc * P;
}

double EnergyModel::first_variation_lhs(const Field& rho, double eps,
                                        const TestVectorField& xi) const {
  check_density(rho);
  const Grid& g = rho.grid;
  Field phi = solver_->solve(rho, eps);
  Field gx(g), gy(g);
  cell_gradient(phi, gx, gy);
  const double beta = nl_.beta(), a = pc_.a;
  const double vol = g.cell_volume();
  const int nx = g.cells[0];
  const double total = vol * par::sum(rho.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) % nx;
    const int j = static_cast<int>(k) / nx;
    const double x = g.x_center(i), y = g.y_center(j);
    const double r = std::max(rho[k], 0.0);
    const auto v = xi.value(x, y);
    const double dv = xi.divergence(x, y);
    const double bulk = (nl_.f(r) + a * r - beta * r * phi[k]) * dv;
    const double drift = beta * r * (gx[k] * v[0] + gy[k] * v[1]);
    return bulk - drift;
  });
  return total / eps;
}

double EnergyModel::first_variation_rhs_discrete(const Field& rho, double eps,
                                                 const TestVectorField& xi) const {
  check_density(rho);
  const Grid& g = rho.grid;
  Field phi = solver_->solve(rho, eps);
  Field gx(g), gy(g);
  cell_gradient(phi, gx, gy);
  const double beta = nl_.beta(), sigma = nl_.sigma(), a = pc_.a;
  const double vol = g.cell_volume();
  const int nx = g.cells[0];
  return vol * par::sum(rho.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) % nx;
    const int j = static_cast<int>(k) / nx;
    const double x = g.x_center(i), y = g.y_center(j);
    const double r = std::max(rho[k], 0.0);
    const double dv = xi.divergence(x, y);
    const auto J = xi.jacobian(x, y);
    const double W = nl_.f(r) - 0.5 * beta / sigma * r * r + a * r;
    const double dcoup = r - sigma * phi[k];
    const double g2 = gx[k] * gx[k] + gy[k] * gy[k];
    const double tensor = gx[k] * gx[k] * J[0] + gx[k] * gy[k] * (J[1] + J[2]) +
                          gy[k] * gy[k] * J[3];
    return (W + 0.5 * beta / sigma * dcoup * dcoup) * dv / eps +
           0.5 * beta * eps * g2 * dv - beta * eps * tensor;
  });
}

double EnergyModel::sharp_variation_surrogate(const Field& rho, double eps,
                                              const TestVectorField& xi) const {
  const Grid& g = rho.grid;
  Field phi = solver_->solve(rho, eps);
  Field F_of_phi(g);
  const ProfileTable& F = *profile_;
  par::parallel_for(phi.size(), [&](std::size_t k) { F_of_phi[k] = F(phi[k]); });
  Field gx(g), gy(g);
  cell_gradient(F_of_phi, gx, gy);
  const double vol = g.cell_volume();
  const int nx = g.cells[0];
  return vol * par::sum(rho.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k) % nx;
    const int j = static_cast<int>(k) / nx;
    const double x = g.x_center(i), y = g.y_center(j);
    const double mag = std::sqrt(gx[k] * gx[k] + gy[k] * gy[k]);
    const double floor_mag = std::max(mag, 1e-14);
    const double nxv = gx[k] / floor_mag, nyv = gy[k] / floor_mag;
    const auto J = xi.jacobian(x, y);
    const double nn_D = nxv * nxv * J[0] + nxv * nyv * (J[1] + J[2]) +
                        nyv * nyv * J[3];
    return (xi.divergence(x, y) - nn_D) * mag;
  });
}

Field EnergyModel::pressure_field(const Field& rho, double eps) const {
  check_density(rho);
  Field phi = solver_->solve(rho, eps);
  Field p(rho.grid);
  const double beta = nl_.beta(), sigma = nl_.sigma();
  const double fp_rc = nl_.fp(pc_.rho_c), rc = pc_.rho_c;
  par::parallel_for(rho.size(), [&](std::size_t k) {
    const double r = std::max(rho[k], 0.0);
    p[k] = (r * (nl_.fp(r) - fp_rc) + beta / sigma * r * (rc - sigma * phi[k])) / eps;
  });
  const double domain = rho.grid.extent[0] * (rho.grid.dim == 2 ? rho.grid.extent[1] : 1.0);
  const double mean = integrate(p) / domain;
  par::parallel_for(p.size(), [&](std::size_t k) { p[k] -= mean; });
  return p;
}

}  // namespace pks
