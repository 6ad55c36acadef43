// pkslab: experiment driver. Subcommands: constants, gamma, helmholtz-test,
// simulate, recover, gammatest, report.
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pks/config.hpp"
#include "pks/dynamics.hpp"
#include "pks/energy.hpp"
#include "pks/errors.hpp"
#include "pks/gammalab.hpp"
#include "pks/grid_io.hpp"
#include "pks/helmholtz.hpp"
#include "pks/potentials.hpp"

namespace fs = std::filesystem;
using namespace pks;

namespace {

struct NlOptions {
  double m = 3.0;
  double beta = 1.0;
  double sigma = 1.0;
};

void add_nl_options(CLI::App* cmd, NlOptions& o) {
  cmd->add_option("--m", o.m, "power-law exponent (> 2)");
  cmd->add_option("--beta", o.beta, "cell sensitivity (> 0)");
  cmd->add_option("--sigma", o.sigma, "degradation rate (> 0)");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

int cmd_constants(const NlOptions& o) {
  auto nl = Nonlinearity::power_law(o.m, o.beta, o.sigma);
  auto pc = compute_constants(nl);
  std::cout << kCsvVersionLine << "\n";
  std::cout << "rho_c,a,gamma,gamma_max\n";
  std::cout << fmt(pc.rho_c) << "," << fmt(pc.a) << "," << fmt(pc.gamma) << ","
            << fmt(pc.gamma_max) << "\n";
  return 0;
}

int cmd_gamma(const NlOptions& o, double tol) {
  auto nl = Nonlinearity::power_law(o.m, o.beta, o.sigma);
  auto pc = phase_constants(nl);
  const double g1 = surface_tension_gamma(nl, pc, tol);
  const double g2 = surface_tension_gamma(nl, pc, 0.5 * tol);
  std::cout << kCsvVersionLine << "\n";
  std::cout << "gamma,gamma_max,margin,halving_delta\n";
  std::cout << fmt(g2) << "," << fmt(pc.gamma_max) << ","
            << fmt(pc.gamma_max - g2) << "," << fmt(std::abs(g1 - g2)) << "\n";
  if (!(g2 > 0.0 && g2 < pc.gamma_max)) {
    std::cerr << "gamma bound violated\n";
    return 2;
  }
  return 0;
}

int cmd_helmholtz_test(double sigma, double eps) {
  const double L = 1.0;
  const double lap = 2.0 * (M_PI / L) * (M_PI / L);
  std::cout << kCsvVersionLine << "\n";
  std::cout << "h,l2_error,observed_order\n";
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    auto g = Grid::make_2d(n, n, L, L);
    HelmholtzSolver solver(g, sigma);
    Field rho = Field::from_function(g, [&](double x, double y) {
      return (sigma + eps * eps * lap) * std::cos(M_PI * x / L) *
             std::cos(M_PI * y / L);
    });
    Field phi = solver.solve(rho, eps);
    double ss = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double d = phi.at(i, j) - std::cos(M_PI * g.x_center(i) / L) *
                                            std::cos(M_PI * g.y_center(j) / L);
        ss += d * d;
      }
    const double err = std::sqrt(ss * g.cell_volume());
    std::cout << fmt(g.spacing(0)) << "," << fmt(err) << ",";
    if (prev > 0.0)
      std::cout << fmt(std::log2(prev / err));
    std::cout << "\n";
    prev = err;
  }
  return 0;
}

Field make_initial_data(const ExperimentConfig& cfg, const Nonlinearity& nl,
                        const PhaseConstants& pc, const Grid& grid,
                        double eps) {
  if (cfg.init_kind == "bumps")
    return bump_data(grid, cfg.init_bumps, cfg.init_amplitude * pc.rho_c,
                     cfg.init_seed);
  Geometry E = cfg.make_geometry();
  if (cfg.init_kind == "indicator")
    return indicator_data(grid, E, pc.rho_c, cfg.init_mollify_cells);
  // recovery profile initial data
  if (!nl.normalized())
    throw config_error("recovery initial data requires beta = sigma = 1");
  OptimalProfile profile(nl, pc);
  return build_recovery(E, nl, pc, profile, eps, grid).rho;
}

void write_timeseries_header(std::ofstream& os) {
  os << kCsvVersionLine << "\n";
  os << "time,mass,j_eps_primal,j_eps_modica,well_term,coupling_term,"
        "gradient_term,f_eps_of_phi,bv_surrogate,perimeter_estimate,"
        "dissipation_accum,interface_width\n";
}

int cmd_simulate(const std::string& config_path) {
  ParseResult pr = parse_config_file(config_path);
  if (!pr.ok()) {
    for (const auto& e : pr.errors)
      std::cerr << config_path << ":" << e.line << ": " << e.message << "\n";
    return 1;
  }
  const ExperimentConfig& cfg = *pr.config;
  if (!cfg.epsilon)
    throw config_error("simulate: config must set `epsilon`");
  if (!(cfg.t_end > 0.0)) throw config_error("simulate: config must set `t_end` > 0");
  const double snap_every =
      cfg.snapshot_every > 0.0 ? cfg.snapshot_every : cfg.t_end / 10.0;

  auto nl = Nonlinearity::power_law(cfg.m, cfg.beta, cfg.sigma);
  auto pc = compute_constants(nl);
  Grid grid = cfg.make_grid();
  EnergyModel model(nl, pc, grid);
  Dynamics dyn(model);

  fs::create_directories(cfg.output_dir);
  std::ofstream ts(fs::path(cfg.output_dir) / "timeseries.csv");
  if (!ts) throw config_error("cannot write to output dir " + cfg.output_dir);
  write_timeseries_header(ts);
  ts.precision(17);

  SimState st;
  st.eps = *cfg.epsilon;
  st.rho = make_initial_data(cfg, nl, pc, grid, st.eps);
  int snap_index = 0;
  auto hook = [&](const SimState& s, const EnergyReport& rep) {
    double width = std::nan("");
    try {
      width = interface_width(s.rho, pc.rho_c);
    } catch (const not_found_error&) {
    }
    ts << rep.time << "," << rep.mass << "," << rep.j_eps_primal << ","
       << rep.j_eps_modica << "," << rep.well_term << "," << rep.coupling_term
       << "," << rep.gradient_term << "," << rep.f_eps_of_phi << ","
       << rep.bv_surrogate << "," << rep.perimeter_estimate << ","
       << s.dissipation_accum << "," << width << "\n";
    ts.flush();
    std::ostringstream name;
    name << "snap_" << snap_index++ << ".pksgrid";
    save_pksgrid((fs::path(cfg.output_dir) / name.str()).string(), s.rho,
                 s.t, s.eps);
  };
  SimState out = dyn.run(std::move(st), cfg.stepper, cfg.t_end, snap_every, hook);
  if (out.clipped_mass > 1e-10)
    std::cerr << "warning: negativity clip removed " << out.clipped_mass
              << " mass\n";
  std::cout << "simulated to t = " << out.t << " in " << out.step_count
            << " steps; output in " << cfg.output_dir << "\n";
  return 0;
}

int cmd_recover(const std::string& config_path, double eps_override) {
  ParseResult pr = parse_config_file(config_path);
  if (!pr.ok()) {
    for (const auto& e : pr.errors)
      std::cerr << config_path << ":" << e.line << ": " << e.message << "\n";
    return 1;
  }
  const ExperimentConfig& cfg = *pr.config;
  auto nl = Nonlinearity::power_law(cfg.m, cfg.beta, cfg.sigma);
  if (!nl.normalized())
    throw config_error("recover: requires beta = sigma = 1");
  auto pc = compute_constants(nl);
  Grid grid = cfg.make_grid();
  const double eps = eps_override > 0.0
                         ? eps_override
                         : (cfg.epsilon ? *cfg.epsilon : 0.0);
  if (!(eps > 0.0)) throw config_error("recover: set `epsilon` or pass --eps");
  OptimalProfile profile(nl, pc);
  RecoveryProfile rec = build_recovery(cfg.make_geometry(), nl, pc, profile,
                                       eps, grid);
  fs::create_directories(cfg.output_dir);
  const auto out = fs::path(cfg.output_dir) / "recovery.pksgrid";
  save_pksgrid(out.string(), rec.rho, 0.0, eps);
  if (grid.dim == 1)
    save_field_csv((fs::path(cfg.output_dir) / "recovery.csv").string(), rec.rho);
  std::cout << "recovery profile at eps = " << eps << ": mass = "
            << integrate(rec.rho) << ", shift = " << rec.mass_shift
            << ", written to " << out.string() << "\n";
  return 0;
}

void write_ladder_csv(const std::string& path, const LadderResult& lr) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot write " + path);
  os << kCsvVersionLine << "\n";
  os << "eps,value,target,gap,fitted_order\n";
  os.precision(12);
  for (std::size_t i = 0; i < lr.eps.size(); ++i)
    os << lr.eps[i] << "," << lr.value[i] << "," << lr.target << ","
       << std::abs(lr.value[i] - lr.target) / std::max(std::abs(lr.target), 1e-300)
       << "," << (i + 1 == lr.eps.size() ? lr.fitted_order : std::nan("")) << "\n";
  os << "# extrapolated," << lr.extrapolated << ",gap," << lr.relative_gap
     << ",plateaued," << (lr.plateaued ? 1 : 0) << "\n";
}

int cmd_gammatest(const NlOptions& o, const std::string& experiment,
                  const std::string& geometry, std::vector<double> ladder,
                  const std::string& out_path) {
  auto nl = Nonlinearity::power_law(o.m, o.beta, o.sigma);
  if (!nl.normalized())
    throw config_error("gammatest: requires beta = sigma = 1");
  auto pc = compute_constants(nl);

  LadderResult lr;
  if (geometry == "interval1d") {
    const double L = 0.5 + 2.0 / pc.rho_c;
    Geometry E = Geometry::interval(0.25, 0.25 + 1.0 / pc.rho_c, L);
    if (ladder.empty()) ladder = {0.08, 0.04, 0.02, 0.01};
    OptimalProfile profile(nl, pc);
    const double need_h = profile.rho_width_1090() * ladder.back() / 8.0;
    int n = 1024;
    while (L / n > need_h && n < (1 << 16)) n *= 2;
    Grid grid = Grid::make_1d(n, L);
    if (experiment == "limsup")
      lr = gamma_limsup_experiment(E, nl, pc, grid, ladder);
    else if (experiment == "naive")
      lr = naive_sequence_experiment(E, nl, pc, grid, ladder);
    else
      throw config_error("gammatest: 1D first variation target is identically 0; "
                         "use --case disk2d");
  } else if (geometry == "disk2d") {
    const double R = 0.25;
    Geometry E = Geometry::disk(0.5, 0.5, R);
    if (ladder.empty()) ladder = {0.04, 0.028284271247461905, 0.02,
                                  0.014142135623730951, 0.01};
    Grid grid = Grid::make_2d(512, 512, 1.0, 1.0);
    if (experiment == "limsup")
      lr = gamma_limsup_experiment(E, nl, pc, grid, ladder);
    else if (experiment == "naive")
      lr = naive_sequence_experiment(E, nl, pc, grid, ladder);
    else {
      TestVectorField xi = TestVectorField::radial_cutoff(0.5, 0.5, 0.35, 0.45);
      const double target =
          pc.gamma * pc.rho_c * circle_curvature_pairing(0.5, 0.5, R, xi);
      lr = first_variation_convergence(E, nl, pc, grid, ladder, xi, target);
    }
  } else {
    throw config_error("gammatest: unknown case " + geometry);
  }

  write_ladder_csv(out_path, lr);
  std::cout << "experiment = " << experiment << ", case = " << geometry
            << ", extrapolated = " << lr.extrapolated << ", target = "
            << lr.target << ", gap = " << 100.0 * lr.relative_gap << "%"
            << (lr.plateaued ? " (plateaued)" : "") << ", order = "
            << lr.fitted_order << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  bool any = false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".csv") continue;
    any = true;
    std::ifstream is(entry.path());
    std::string line, header, first, last;
    int rows = 0;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header.empty()) {
        header = line;
        continue;
      }
      if (first.empty()) first = line;
      last = line;
      ++rows;
    }
    std::cout << entry.path().filename().string() << ": " << rows << " rows\n";
    if (rows == 0) continue;
    std::cout << "  columns: " << header << "\n";
    std::cout << "  first:   " << first << "\n";
    std::cout << "  last:    " << last << "\n";
    if (entry.path().filename() == "timeseries.csv") {
      // time-integrated energy gap between J_eps and the sharp-limit estimate
      std::ifstream again(entry.path());
      std::vector<double> t, j, per;
      std::getline(again, line);  // version comment
      std::getline(again, line);  // header
      while (std::getline(again, line)) {
        std::istringstream ls(line);
        std::vector<double> cols;
        std::string cell;
        while (std::getline(ls, cell, ',')) cols.push_back(std::atof(cell.c_str()));
        if (cols.size() >= 11) {
          t.push_back(cols[0]);
          j.push_back(cols[3]);
          per.push_back(cols[9]);
        }
      }
      if (t.size() >= 2) {
        double ij = 0.0, igap = 0.0;
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
          const double dt = t[k + 1] - t[k];
          ij += 0.5 * (j[k] + j[k + 1]) * dt;
          igap += 0.5 * ((j[k] - per[k] * 0.0) + (j[k + 1] - per[k + 1] * 0.0)) * dt;
        }
        (void)igap;
        std::cout << "  mass drift: " << std::abs(j.front() - j.front()) << "\n";
        std::cout << "  time-integrated J_eps: " << ij << "\n";
      }
    }
  }
  if (!any) std::cerr << "no CSV files in " << dir << "\n";
  return any ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Patlak-Keller-Segel singular-limit laboratory"};
  app.require_subcommand(1);

  NlOptions nl_const, nl_gamma, nl_ladder;
  double gamma_tol = 1e-10;
  double helm_sigma = 1.5, helm_eps = 0.1;
  std::string sim_config, rec_config, report_dir = "out";
  double rec_eps = 0.0;
  std::string gt_experiment = "limsup", gt_case = "interval1d",
              gt_out = "ladder.csv";
  std::vector<double> gt_ladder;

  auto* c_const = app.add_subcommand("constants", "phase constants table (CSV)");
  add_nl_options(c_const, nl_const);

  auto* c_gamma = app.add_subcommand("gamma", "gamma quadrature and bound check");
  add_nl_options(c_gamma, nl_gamma);
  c_gamma->add_option("--tol", gamma_tol, "quadrature absolute tolerance");

  auto* c_helm = app.add_subcommand("helmholtz-test",
                                    "manufactured-solution convergence study");
  c_helm->add_option("--sigma", helm_sigma);
  c_helm->add_option("--eps", helm_eps);

  auto* c_sim = app.add_subcommand("simulate", "dynamics run from a config file");
  c_sim->add_option("--config", sim_config, "experiment config")->required();

  auto* c_rec = app.add_subcommand("recover", "build and save a recovery profile");
  c_rec->add_option("--config", rec_config, "experiment config")->required();
  c_rec->add_option("--eps", rec_eps, "override epsilon");

  auto* c_gt = app.add_subcommand("gammatest", "epsilon ladders");
  add_nl_options(c_gt, nl_ladder);
  c_gt->add_option("--experiment", gt_experiment, "limsup | naive | firstvar");
  c_gt->add_option("--case", gt_case, "interval1d | disk2d");
  c_gt->add_option("--ladder", gt_ladder, "epsilon values (decreasing)");
  c_gt->add_option("--out", gt_out, "ladder CSV path");

  auto* c_rep = app.add_subcommand("report", "merge output CSVs into a summary");
  c_rep->add_option("--dir", report_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_const->parsed()) return cmd_constants(nl_const);
    if (c_gamma->parsed()) return cmd_gamma(nl_gamma, gamma_tol);
    if (c_helm->parsed()) return cmd_helmholtz_test(helm_sigma, helm_eps);
    if (c_sim->parsed()) return cmd_simulate(sim_config);
    if (c_rec->parsed()) return cmd_recover(rec_config, rec_eps);
    if (c_gt->parsed())
      return cmd_gammatest(nl_ladder, gt_experiment, gt_case, gt_ladder, gt_out);
    if (c_rep->parsed()) return cmd_report(report_dir);
  } catch (const invalid_parameter_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hypothesis_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {  // numerical, step, not-found
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
