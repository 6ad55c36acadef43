#include "pks/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pks/errors.hpp"

namespace pks {

Grid ExperimentConfig::make_grid() const {
  return dim == 1 ? Grid::make_1d(cells[0], extent[0])
                  : Grid::make_2d(cells[0], cells[1], extent[0], extent[1]);
}

Geometry ExperimentConfig::make_geometry() const {
  if (init_shape == "interval")
    return Geometry::interval(init_params[0], init_params[1], extent[0]);
  if (init_shape == "disk")
    return Geometry::disk(init_params[0], init_params[1], init_params[2]);
  return Geometry::ellipse(init_params[0], init_params[1], init_params[2],
                           init_params[3]);
}

namespace {

struct RawEntry {
  int line;
  std::string value;
};

const std::vector<std::string> kKnownKeys = {
    "kind",          "m",
    "beta",          "sigma",
    "grid.dim",      "grid.cells",
    "grid.extent",   "epsilon",
    "epsilon_ladder", "init.kind",
    "init.shape",    "init.params",
    "init.mollify_cells", "init.bumps",
    "init.amplitude", "init.seed",
    "stepper.cfl_safety", "stepper.flux_scheme",
    "stepper.dt_max", "stepper.negativity_clip",
    "t_end",         "snapshot_every",
    "output.dir"};

bool parse_number(const std::string& s, double& out) {
  std::istringstream is(s);
  is >> out;
  if (!is) return false;
  std::string rest;
  is >> rest;
  return rest.empty() && std::isfinite(out);
}

std::vector<double> parse_numbers(const std::string& s, bool& ok) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string rest;
  is.clear();
  is >> rest;
  ok = rest.empty() && !out.empty();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  auto& errors = result.errors;
  std::map<std::string, RawEntry> entries;

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({lineno, "expected `key = value`"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      errors.push_back({lineno, "empty key"});
      continue;
    }
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      errors.push_back({lineno, "unknown key `" + key + "`"});
      continue;
    }
    auto [it, inserted] = entries.emplace(key, RawEntry{lineno, value});
    if (!inserted) {
      std::ostringstream os;
      os << "duplicate key `" << key << "` (first set on line " << it->second.line
         << ")";
      errors.push_back({lineno, os.str()});
    }
  }

  ExperimentConfig cfg;

  auto get = [&](const std::string& key) -> const RawEntry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& key, double& out) {
    if (const RawEntry* e = get(key)) {
      double v;
      if (!parse_number(e->value, v))
        errors.push_back({e->line, key + ": expected a number, got `" + e->value + "`"});
      else
        out = v;
    }
  };
  auto integer = [&](const std::string& key, int& out) {
    if (const RawEntry* e = get(key)) {
      double v;
      if (!parse_number(e->value, v) || v != std::floor(v))
        errors.push_back({e->line, key + ": expected an integer, got `" + e->value + "`"});
      else
        out = static_cast<int>(v);
    }
  };
  auto string_of = [&](const std::string& key, std::string& out) {
    if (const RawEntry* e = get(key)) out = e->value;
  };
  auto fail = [&](const std::string& key, const std::string& msg) {
    const RawEntry* e = get(key);
    errors.push_back({e ? e->line : 0, msg});
  };

  string_of("kind", cfg.kind);
  if (cfg.kind != "power-law") fail("kind", "kind: only `power-law` is supported here");
  number("m", cfg.m);
  if (get("m") && !(cfg.m > 2.0)) fail("m", "m must exceed 2");
  number("beta", cfg.beta);
  if (!(cfg.beta > 0.0)) fail("beta", "beta must be positive");
  number("sigma", cfg.sigma);
  if (!(cfg.sigma > 0.0)) fail("sigma", "sigma must be positive");

  integer("grid.dim", cfg.dim);
  if (cfg.dim != 1 && cfg.dim != 2) fail("grid.dim", "grid.dim must be 1 or 2");

  if (const RawEntry* e = get("grid.cells")) {
    bool ok;
    auto v = parse_numbers(e->value, ok);
    const std::size_t want = cfg.dim == 2 ? 2 : 1;
    if (!ok || v.size() != want)
      errors.push_back({e->line, "grid.cells: expected " + std::to_string(want) +
                                     " integer(s)"});
    else {
      for (std::size_t k = 0; k < want; ++k) {
        if (v[k] != std::floor(v[k]) || v[k] < 4)
          errors.push_back({e->line, "grid.cells: each count must be an integer >= 4"});
        else
          cfg.cells[k] = static_cast<int>(v[k]);
      }
    }
  }
  if (const RawEntry* e = get("grid.extent")) {
    bool ok;
    auto v = parse_numbers(e->value, ok);
    const std::size_t want = cfg.dim == 2 ? 2 : 1;
    if (!ok || v.size() != want)
      errors.push_back({e->line, "grid.extent: expected " + std::to_string(want) +
                                     " number(s)"});
    else {
      for (std::size_t k = 0; k < want; ++k) {
        if (!(v[k] > 0.0))
          errors.push_back({e->line, "grid.extent: lengths must be positive"});
        else
          cfg.extent[k] = v[k];
      }
    }
  }

  if (const RawEntry* e = get("epsilon")) {
    double v;
    if (!parse_number(e->value, v) || !(v > 0.0))
      errors.push_back({e->line, "epsilon: expected a positive number"});
    else
      cfg.epsilon = v;
  }
  if (const RawEntry* e = get("epsilon_ladder")) {
    bool ok;
    auto v = parse_numbers(e->value, ok);
    if (!ok || v.size() < 4)
      errors.push_back({e->line, "epsilon_ladder: expected at least 4 numbers"});
    else {
      bool decreasing = true;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] > 0.0)) decreasing = false;
        if (k > 0 && !(v[k] < v[k - 1])) decreasing = false;
      }
      if (!decreasing)
        errors.push_back({e->line,
                          "epsilon_ladder: values must be positive and strictly decreasing"});
      else
        cfg.epsilon_ladder = v;
    }
  }

  string_of("init.kind", cfg.init_kind);
  if (cfg.init_kind != "indicator" && cfg.init_kind != "recovery" &&
      cfg.init_kind != "bumps")
    fail("init.kind", "init.kind must be indicator, recovery, or bumps");
  string_of("init.shape", cfg.init_shape);
  if (cfg.init_shape != "interval" && cfg.init_shape != "disk" &&
      cfg.init_shape != "ellipse")
    fail("init.shape", "init.shape must be interval, disk, or ellipse");

  if (const RawEntry* e = get("init.params")) {
    bool ok;
    auto v = parse_numbers(e->value, ok);
    if (!ok)
      errors.push_back({e->line, "init.params: expected numbers"});
    else
      cfg.init_params = v;
  }
  if (cfg.init_kind != "bumps") {
    std::size_t want = cfg.init_shape == "interval" ? 2
                       : cfg.init_shape == "disk"   ? 3
                                                    : 4;
    if (cfg.init_params.empty() && cfg.init_shape == "interval")
      cfg.init_params = {0.25 * cfg.extent[0], 0.75 * cfg.extent[0]};
    if (cfg.init_params.size() != want)
      fail("init.params", "init.params: shape `" + cfg.init_shape + "` needs " +
                              std::to_string(want) + " numbers");
    else if (cfg.init_shape == "interval" &&
             !(cfg.init_params[0] < cfg.init_params[1]))
      fail("init.params", "init.params: interval needs a < b");
  }

  integer("init.mollify_cells", cfg.init_mollify_cells);
  if (cfg.init_mollify_cells < 1)
    fail("init.mollify_cells", "init.mollify_cells must be >= 1");
  integer("init.bumps", cfg.init_bumps);
  if (cfg.init_bumps < 1) fail("init.bumps", "init.bumps must be >= 1");
  number("init.amplitude", cfg.init_amplitude);
  if (!(cfg.init_amplitude > 0.0))
    fail("init.amplitude", "init.amplitude must be positive");
  if (const RawEntry* e = get("init.seed")) {
    double v;
    if (!parse_number(e->value, v) || v < 0 || v != std::floor(v))
      errors.push_back({e->line, "init.seed: expected a nonnegative integer"});
    else
      cfg.init_seed = static_cast<std::uint64_t>(v);
  }

  number("stepper.cfl_safety", cfg.stepper.cfl_safety);
  if (!(cfg.stepper.cfl_safety > 0.0 && cfg.stepper.cfl_safety <= 1.0))
    fail("stepper.cfl_safety", "stepper.cfl_safety must be in (0, 1]");
  if (const RawEntry* e = get("stepper.flux_scheme")) {
    if (e->value == "upwind")
      cfg.stepper.flux_scheme = StepperConfig::FluxScheme::upwind;
    else if (e->value == "central-with-limiter")
      cfg.stepper.flux_scheme = StepperConfig::FluxScheme::central_with_limiter;
    else
      errors.push_back({e->line,
                        "stepper.flux_scheme must be upwind or central-with-limiter"});
  }
  number("stepper.dt_max", cfg.stepper.dt_max);
  if (!(cfg.stepper.dt_max > 0.0))
    fail("stepper.dt_max", "stepper.dt_max must be positive");
  if (const RawEntry* e = get("stepper.negativity_clip")) {
    if (e->value == "on")
      cfg.stepper.negativity_clip = true;
    else if (e->value == "off")
      cfg.stepper.negativity_clip = false;
    else
      errors.push_back({e->line, "stepper.negativity_clip must be on or off"});
  }

  number("t_end", cfg.t_end);
  number("snapshot_every", cfg.snapshot_every);
  string_of("output.dir", cfg.output_dir);

  if (!errors.empty()) return result;
  result.config = cfg;
  return result;
}

ParseResult parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    ParseResult r;
    r.errors.push_back({0, "cannot open config file: " + path});
    return r;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pks
