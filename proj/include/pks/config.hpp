#ifndef PKS_CONFIG_HPP
#define PKS_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "pks/dynamics.hpp"
#include "pks/field.hpp"

namespace pks {

// Fully validated experiment description parsed from the line-oriented
// `key = value` format (# comments, dotted group keys, strict key set).
struct ExperimentConfig {
  // nonlinearity
  std::string kind = "power-law";
  double m = 3.0;
  double beta = 1.0;
  double sigma = 1.0;

  // grid
  int dim = 1;
  std::array<int, 2> cells{256, 1};
  std::array<double, 2> extent{1.0, 1.0};

  // either a single epsilon or a ladder
  std::optional<double> epsilon;
  std::vector<double> epsilon_ladder;

  // initial data
  std::string init_kind = "indicator";  // indicator | recovery | bumps
  std::string init_shape = "interval";  // interval | disk | ellipse
  std::vector<double> init_params;      // interval: a b; disk: cx cy r; ellipse: cx cy ax ay
  int init_mollify_cells = 3;
  int init_bumps = 2;
  double init_amplitude = 0.4;
  std::uint64_t init_seed = 1234;

  // stepper
  StepperConfig stepper;

  double t_end = 0.0;
  double snapshot_every = 0.0;  // simulation-time interval between snapshots
  std::string output_dir = "out";

  Grid make_grid() const;
  Geometry make_geometry() const;  // from init_shape/init_params
};

struct ConfigError {
  int line = 0;  // 0 when not tied to a specific line
  std::string message;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;  // all of them, not just the first
  bool ok() const { return config.has_value(); }
};

// Parses and validates; unknown keys, duplicate keys (both line numbers),
// type mismatches and constraint violations are all collected.
ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::string& path);

}  // namespace pks

#endif
