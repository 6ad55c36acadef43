#ifndef PKS_POTENTIALS_HPP
#define PKS_POTENTIALS_HPP

#include <functional>
#include <string>
#include <vector>

namespace pks {

// Sampled verification of the structural hypotheses on f:
// delta: f''(rho) >= delta for rho >= 1/delta,
// nu, growth_C: f(rho) >= (beta/(2 sigma) + nu) rho^2 for rho >= growth_C.
struct HypothesisCheck {
  double delta = 0.0;
  double nu = 0.0;
  double growth_C = 0.0;
};

// Diffusion pressure law f with cell sensitivity beta and degradation sigma.
// f is C^2, strictly convex, f(0) = f'(0) = 0; extended by +infinity on
// rho < 0 for the purposes of the Legendre transform.
class Nonlinearity {
 public:
  enum class Kind { power_law, custom };

  // f(rho) = coeff * rho^m / (m-1), m > 2.
  static Nonlinearity power_law(double m, double beta, double sigma,
                                double coeff = 1.0);
  // Closed-form evaluators for f, f', f''.
  static Nonlinearity custom(std::function<double(double)> f,
                             std::function<double(double)> fp,
                             std::function<double(double)> fpp, double beta,
                             double sigma);

  Kind kind() const { return kind_; }
  double m() const { return m_; }
  double beta() const { return beta_; }
  double sigma() const { return sigma_; }
  bool normalized() const { return beta_ == 1.0 && sigma_ == 1.0; }

  double f(double rho) const;
  double fp(double rho) const;   // f'
  double fpp(double rho) const;  // f''

  // Legendre transform f*(q) = sup_rho (rho q - f(rho)); 0 for q <= 0.
  double conjugate(double q) const;
  // f*'(q) = (f')^{-1}(q) for q > 0, 0 otherwise. Monotone root-finding
  // (bisection + Newton polish) on the custom path, closed form for power laws.
  double conjugate_prime(double q) const;

  // Sampled (H1)/(H3) verification on [0, 1e3]; throws hypothesis_error.
  HypothesisCheck verify_hypotheses() const;

 private:
  Nonlinearity() = default;
  Kind kind_ = Kind::power_law;
  double m_ = 3.0;
  double coeff_ = 1.0;
  double beta_ = 1.0;
  double sigma_ = 1.0;
  std::function<double(double)> f_, fp_, fpp_;
};

// Result of mapping a system to sigma = beta = 1: rescale time by
// time_factor = sigma^{3/2}/beta and epsilon by epsilon_factor = 1/sqrt(sigma).
struct NormalizedSystem {
  Nonlinearity nl;
  double time_factor = 1.0;
  double epsilon_factor = 1.0;  // eps_bar = epsilon_factor * eps
};

NormalizedSystem normalize(const Nonlinearity& nl);

// rho_c: the nonzero well of W; a: depth of h at rho_c; gamma: surface
// tension; gamma_max: the analytic bound beta rho_c / (4 sigma^{3/2}).
struct PhaseConstants {
  double rho_c = 0.0;
  double a = 0.0;
  double gamma = 0.0;
  double gamma_max = 0.0;
};

// rho_c and a by bracketing scan + golden section + Newton polish on
// h(rho) = f(rho)/rho - beta/(2 sigma) rho. gamma left at 0; see
// surface_tension_gamma / compute_constants.
PhaseConstants phase_constants(const Nonlinearity& nl);

// gamma = (1/rho_c) * integral_0^{rho_c/sigma} sqrt(2 beta g(s)) ds by
// adaptive quadrature with the given absolute tolerance.
double surface_tension_gamma(const Nonlinearity& nl, const PhaseConstants& pc,
                             double abs_tol = 1e-10);

// phase_constants with gamma filled in.
PhaseConstants compute_constants(const Nonlinearity& nl);

// W(rho) = f(rho) - beta/(2 sigma) rho^2 + a rho; +infinity on rho < 0
// (throws domain_error there). Vanishes exactly at 0 and rho_c.
double double_well_W(const Nonlinearity& nl, const PhaseConstants& pc,
                     double rho);

// g(s) = inf_{rho >= 0} [ W(rho) + beta/(2 sigma) (rho - sigma s)^2 ]
// evaluated through the closed form (beta sigma / 2) s^2 - f*(beta s - a).
double cell_problem_g(const Nonlinearity& nl, const PhaseConstants& pc,
                      double s);

// The minimizer rho(s) = f*'(beta s - a); nondecreasing, 0 for beta s <= a.
double g_argmin(const Nonlinearity& nl, const PhaseConstants& pc, double s);

// Cumulative profile F with F' = sqrt(2 beta g) on (0, rho_c/sigma), F(0) = 0,
// constant gamma rho_c beyond. Tabulated once per nonlinearity (4096-interval
// monotone Hermite table) because it is evaluated per cell per snapshot.
class ProfileTable {
 public:
  ProfileTable(const Nonlinearity& nl, const PhaseConstants& pc);

  double operator()(double s) const;   // F(s)
  double gamma_rho_c() const { return plateau_; }
  const PhaseConstants& constants() const { return pc_; }

 private:
  PhaseConstants pc_;
  double s_max_ = 0.0;   // rho_c / sigma
  double ds_ = 0.0;
  double plateau_ = 0.0;
  std::vector<double> value_;
  std::vector<double> slope_;
};

}  // namespace pks

#endif
