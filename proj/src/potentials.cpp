#include "pks/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pks/errors.hpp"
#include "pks/quadrature.hpp"

namespace pks {

namespace {

constexpr double kSampleMax = 1e3;  // hypothesis checks sample [0, kSampleMax]

// x^n by squaring; the power law sits in every flux loop, so integer
// exponents must not go through std::pow
double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

double rpow(double x, double e) {
  const int n = static_cast<int>(e);
  if (e == static_cast<double>(n) && n >= 0 && n <= 64) return ipow(x, n);
  return std::pow(x, e);
}

double require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << name << " must be positive, got " << v;
    throw invalid_parameter_error(os.str());
  }
  return v;
}

}  // namespace

Nonlinearity Nonlinearity::power_law(double m, double beta, double sigma,
                                     double coeff) {
  if (!(m > 2.0))
    throw invalid_parameter_error("power-law exponent m must exceed 2");
  require_positive(beta, "beta");
  require_positive(sigma, "sigma");
  require_positive(coeff, "coeff");
  Nonlinearity nl;
  nl.kind_ = Kind::power_law;
  nl.m_ = m;
  nl.coeff_ = coeff;
  nl.beta_ = beta;
  nl.sigma_ = sigma;
  return nl;
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> f,
                                  std::function<double(double)> fp,
                                  std::function<double(double)> fpp,
                                  double beta, double sigma) {
  require_positive(beta, "beta");
  require_positive(sigma, "sigma");
  Nonlinearity nl;
  nl.kind_ = Kind::custom;
  nl.f_ = std::move(f);
  nl.fp_ = std::move(fp);
  nl.fpp_ = std::move(fpp);
  nl.beta_ = beta;
  nl.sigma_ = sigma;
  if (std::abs(nl.f_(0.0)) > 1e-14 || std::abs(nl.fp_(0.0)) > 1e-14)
    throw hypothesis_error("custom nonlinearity must satisfy f(0) = f'(0) = 0");
  return nl;
}

double Nonlinearity::f(double rho) const {
  if (kind_ == Kind::power_law) return coeff_ * rpow(rho, m_) / (m_ - 1.0);
  return f_(rho);
}

double Nonlinearity::fp(double rho) const {
  if (kind_ == Kind::power_law)
    return coeff_ * m_ * rpow(rho, m_ - 1.0) / (m_ - 1.0);
  return fp_(rho);
}

double Nonlinearity::fpp(double rho) const {
  if (kind_ == Kind::power_law) return coeff_ * m_ * rpow(rho, m_ - 2.0);
  return fpp_(rho);
}

double Nonlinearity::conjugate_prime(double q) const {
  if (q <= 0.0) return 0.0;
  if (kind_ == Kind::power_law)
    return std::pow((m_ - 1.0) * q / (coeff_ * m_), 1.0 / (m_ - 1.0));
  // invert the increasing map rho -> f'(rho)
  double hi = 1.0;
  int guard = 0;
  while (fp_(hi) < q) {
    hi *= 2.0;
    if (++guard > 200)
      throw numerical_error("conjugate_prime: failed to bracket f'(rho) = " +
                            std::to_string(q));
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fp_(mid) < q ? lo : hi) = mid;
  }
  double rho = 0.5 * (lo + hi);
  for (int it = 0; it < 6; ++it) {  // Newton polish
    const double d = fpp_(rho);
    if (d <= 0.0) break;
    const double next = rho - (fp_(rho) - q) / d;
    if (next > lo && next < hi) rho = next;
  }
  const double resid = std::abs(fp_(rho) - q);
  if (resid > 1e-9 * (1.0 + std::abs(q)))
    throw numerical_error("conjugate_prime: inversion residual " +
                          std::to_string(resid) + " at q = " +
                          std::to_string(q));
  return rho;
}

double Nonlinearity::conjugate(double q) const {
  if (q <= 0.0) return 0.0;
  const double rho = conjugate_prime(q);
  return rho * q - f(rho);
}

HypothesisCheck Nonlinearity::verify_hypotheses() const {
  HypothesisCheck out;
  // (H1): strict convexity on a sample, and delta with f'' >= delta on [1/delta, inf)
  const int n = 4000;
  for (int i = 1; i <= n; ++i) {
    const double rho = kSampleMax * i / n;
    if (!(fpp(rho) > 0.0))
      throw hypothesis_error("(H1) violated: f'' <= 0 at rho = " +
                             std::to_string(rho));
  }
  double delta = 1.0;
  for (int k = 0; k < 60; ++k) {
    bool ok = true;
    for (int i = 0; i <= 200; ++i) {
      const double rho = 1.0 / delta + (kSampleMax - 1.0 / delta) * i / 200.0;
      if (rho <= 0.0) continue;
      if (fpp(rho) < delta) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    delta *= 0.5;
  }
  if (delta < 1e-15)
    throw hypothesis_error("(H1) violated: no delta with f'' >= delta on [1/delta, inf)");
  out.delta = delta;

  // (H3): f(rho) >= (beta/(2 sigma) + nu) rho^2 beyond some C
  const double base = beta_ / (2.0 * sigma_);
  double C = 0.0;
  double nu = 0.0;
  for (double cand = 1.0; cand <= kSampleMax * 0.5; cand *= 2.0) {
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
      const double rho = cand + (kSampleMax - cand) * i / 400.0;
      worst = std::min(worst, f(rho) / (rho * rho) - base);
    }
    if (worst > 0.0) {
      C = cand;
      nu = 0.5 * worst;
      break;
    }
  }
  if (nu <= 0.0)
    throw hypothesis_error("(H3) violated: f(rho) does not dominate (beta/2sigma) rho^2");
  out.nu = nu;
  out.growth_C = C;
  return out;
}

NormalizedSystem normalize(const Nonlinearity& nl) {
  NormalizedSystem out{nl, 1.0, 1.0};
  const double beta = nl.beta(), sigma = nl.sigma();
  out.time_factor = std::pow(sigma, 1.5) / beta;
  out.epsilon_factor = 1.0 / std::sqrt(sigma);
  if (nl.normalized()) return out;
  const double scale = sigma / beta;  // f_bar = (sigma/beta) f
  if (nl.kind() == Nonlinearity::Kind::power_law) {
    out.nl = Nonlinearity::power_law(nl.m(), 1.0, 1.0, scale * nl.f(1.0) * (nl.m() - 1.0));
  } else {
    Nonlinearity copy = nl;  // keep evaluators alive in the lambdas
    out.nl = Nonlinearity::custom(
        [copy, scale](double r) { return scale * copy.f(r); },
        [copy, scale](double r) { return scale * copy.fp(r); },
        [copy, scale](double r) { return scale * copy.fpp(r); }, 1.0, 1.0);
  }
  return out;
}

namespace {

double h_of(const Nonlinearity& nl, double rho) {
  return nl.f(rho) / rho - nl.beta() / (2.0 * nl.sigma()) * rho;
}

double h_prime(const Nonlinearity& nl, double rho) {
  return nl.fp(rho) / rho - nl.f(rho) / (rho * rho) -
         nl.beta() / (2.0 * nl.sigma());
}

double h_second(const Nonlinearity& nl, double rho) {
  return nl.fpp(rho) / rho - 2.0 * nl.fp(rho) / (rho * rho) +
         2.0 * nl.f(rho) / (rho * rho * rho);
}

}  // namespace

PhaseConstants phase_constants(const Nonlinearity& nl) {
  // bracketing scan of h on a log-spaced grid
  const int n = 6000;
  const double lo = 1e-6, hi = kSampleMax;
  std::vector<double> rho(n), val(n);
  for (int i = 0; i < n; ++i) {
    rho[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    val[i] = h_of(nl, rho[i]);
  }
  int imin = 0;
  for (int i = 1; i < n; ++i)
    if (val[i] < val[imin]) imin = i;
  if (imin == 0 || imin == n - 1 || val[imin] >= -1e-14)
    throw hypothesis_error(
        "(H2) violated: h has no interior negative minimum on the sampled range");
  // uniqueness: no second local minimum at essentially the same depth elsewhere
  for (int i = 1; i + 1 < n; ++i) {
    if (i == imin) continue;
    if (val[i] < val[i - 1] && val[i] < val[i + 1] &&
        val[i] <= val[imin] + 1e-9 * std::abs(val[imin]) &&
        std::abs(std::log(rho[i] / rho[imin])) > 1e-3)
      throw hypothesis_error("(H2) violated: minimizer of h is not unique");
  }

  // golden-section refinement on [rho[imin-1], rho[imin+1]]
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = rho[imin - 1], b = rho[imin + 1];
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = h_of(nl, c), fd = h_of(nl, d);
  while ((b - a) > 1e-13 * b) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = h_of(nl, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = h_of(nl, d);
    }
  }
  double rc = 0.5 * (a + b);
  for (int it = 0; it < 8; ++it) {  // Newton polish on h'
    const double hp = h_prime(nl, rc), hs = h_second(nl, rc);
    if (!(hs > 0.0)) break;
    const double next = rc - hp / hs;
    if (next > 0.5 * rc && next < 2.0 * rc) rc = next;
  }

  PhaseConstants pc;
  pc.rho_c = rc;
  pc.a = -h_of(nl, rc);
  pc.gamma = 0.0;
  pc.gamma_max = nl.beta() * rc / (4.0 * std::pow(nl.sigma(), 1.5));
  if (!(pc.a >= 0.0))
    throw hypothesis_error("(H2) violated: computed a is negative");
  const double resid =
      std::abs(nl.fp(rc) * rc - nl.f(rc) - nl.beta() / (2.0 * nl.sigma()) * rc * rc);
  if (resid > 1e-10 * rc * rc)
    throw numerical_error("phase_constants: stationarity residual " +
                          std::to_string(resid) + " exceeds tolerance");
  return pc;
}

double double_well_W(const Nonlinearity& nl, const PhaseConstants& pc,
                     double rho) {
  if (rho < 0.0)
    throw domain_error("W is +infinity for rho < 0 (got " + std::to_string(rho) + ")");
  return nl.f(rho) - nl.beta() / (2.0 * nl.sigma()) * rho * rho + pc.a * rho;
}

double cell_problem_g(const Nonlinearity& nl, const PhaseConstants& pc,
                      double s) {
  const double beta = nl.beta(), sigma = nl.sigma();
  const double s_well = pc.rho_c / sigma;
  const double d = s - s_well;
  // Near the nonzero well the two closed-form terms cancel to ~1e-18 out of
  // ~1e-1, far below one ulp, and the raw difference is pure rounding noise.
  // Use the Taylor form there: g'' = beta sigma - beta^2 / f''(rho_c) and
  // g''' = beta^3 f'''(rho_c) / f''(rho_c)^3 (f''' by central difference).
  if (std::abs(d) < 1e-3 * std::max(s_well, 1.0)) {
    const double fpp_c = nl.fpp(pc.rho_c);
    const double gpp = std::max(beta * sigma - beta * beta / fpp_c, 0.0);
    const double step = 1e-5 * (1.0 + pc.rho_c);
    const double fppp =
        (nl.fpp(pc.rho_c + step) - nl.fpp(pc.rho_c - step)) / (2.0 * step);
    const double gppp = beta * beta * beta * fppp / (fpp_c * fpp_c * fpp_c);
    return std::max(0.5 * gpp * d * d + gppp * d * d * d / 6.0, 0.0);
  }
  return 0.5 * beta * sigma * s * s - nl.conjugate(beta * s - pc.a);
}

double g_argmin(const Nonlinearity& nl, const PhaseConstants& pc, double s) {
  return nl.conjugate_prime(nl.beta() * s - pc.a);
}

double surface_tension_gamma(const Nonlinearity& nl, const PhaseConstants& pc,
                             double abs_tol) {
  const double s_max = pc.rho_c / nl.sigma();
  auto integrand = [&](double s) {
    const double g = cell_problem_g(nl, pc, s);
    return std::sqrt(2.0 * nl.beta() * std::max(g, 0.0));
  };
  const double total = adaptive_simpson(integrand, 0.0, s_max, abs_tol);
  return total / pc.rho_c;
}

PhaseConstants compute_constants(const Nonlinearity& nl) {
  PhaseConstants pc = phase_constants(nl);
  pc.gamma = surface_tension_gamma(nl, pc);
  return pc;
}

ProfileTable::ProfileTable(const Nonlinearity& nl, const PhaseConstants& pc)
    : pc_(pc) {
  constexpr int kIntervals = 4096;
  s_max_ = pc.rho_c / nl.sigma();
  ds_ = s_max_ / kIntervals;
  value_.resize(kIntervals + 1);
  slope_.resize(kIntervals + 1);
  auto integrand = [&](double s) {
    const double g = cell_problem_g(nl, pc, s);
    return std::sqrt(2.0 * nl.beta() * std::max(g, 0.0));
  };
  value_[0] = 0.0;
  slope_[0] = integrand(0.0);
  const double tol = 1e-12 * std::max(1.0, pc.rho_c);
  for (int i = 1; i <= kIntervals; ++i) {
    const double sl = (i - 1) * ds_, sr = i * ds_;
    value_[i] = value_[i - 1] + adaptive_simpson(integrand, sl, sr, tol, 40);
    slope_[i] = integrand(sr);
  }
  plateau_ = value_[kIntervals];
}

double ProfileTable::operator()(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= s_max_) return plateau_;
  const double u = s / ds_;
  int i = static_cast<int>(u);
  i = std::min(i, static_cast<int>(value_.size()) - 2);
  const double t = u - i;
  // Hermite cubic with exact endpoint slopes, limited for monotonicity
  const double secant = (value_[i + 1] - value_[i]) / ds_;
  const double d0 = std::min(slope_[i], 3.0 * secant);
  const double d1 = std::min(slope_[i + 1], 3.0 * secant);
  const double t2 = t * t, t3 = t2 * t;
  return value_[i] * (2 * t3 - 3 * t2 + 1) + ds_ * d0 * (t3 - 2 * t2 + t) +
         value_[i + 1] * (-2 * t3 + 3 * t2) + ds_ * d1 * (t3 - t2);
}

}  // namespace pks
