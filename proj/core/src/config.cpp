#include "beamlab/config.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "alpha",       "beta",       "family",      "mu",         "p",
    "tilde_form",  "L",          "n",           "x_spacing",  "dt_initial",
    "dt_max",      "error_tol",  "safety",      "scheme",     "s_max",
    "snapshots_per_unit_s",      "t_max",       "fit_window", "lambda_fraction",
    "slope_threshold",           "c0",          "c1_0",       "c1_1",
    "c2",          "ctilde0",    "ctilde1_0",   "ctilde1_1",  "epsilon",
    "velocity_ratio",            "seed",        "out_dir",    "formats",
    "snapshot_stride",           "workers",     "schema_version"};

double number(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number()) throw InvalidConfigError(fmt::format("config key '{}' must be a number", key));
  return v.get<double>();
}

std::size_t count(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidConfigError(fmt::format("config key '{}' must be a nonnegative integer", key));
  return v.get<std::size_t>();
}

std::string text(const json& doc, const char* key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_string()) throw InvalidConfigError(fmt::format("config key '{}' must be a string", key));
  return v.get<std::string>();
}

TildeForm parse_tilde(const std::string& s) {
  if (s == "none") return TildeForm::None;
  if (s == "power_law") return TildeForm::PowerLaw;
  throw InvalidConfigError(fmt::format("tilde_form must be 'none' or 'power_law', got '{}'", s));
}

Scheme parse_scheme(const std::string& s) {
  if (s == "exp_euler") return Scheme::ExpEuler;
  if (s == "exp_midpoint") return Scheme::ExpMidpoint;
  if (s == "exp_rk4") return Scheme::ExpRK4;
  throw InvalidConfigError(
      fmt::format("scheme must be one of exp_euler, exp_midpoint, exp_rk4, got '{}'", s));
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidConfigError(message);
}

}  // namespace

CoefficientModel RunConfig::coefficient_model() const {
  return CoefficientModel::power_law(alpha, beta);
}

NonlinearityModel RunConfig::nonlinearity_model() const {
  NonlinearityModel m;
  m.mu = mu;
  m.p = p;
  m.tilde_form = tilde_form;
  return m;
}

void RunConfig::validate() const {
  require(std::isfinite(alpha) && std::isfinite(beta), "alpha and beta must be finite");
  require(family == "power_law",
          fmt::format("family must be 'power_law' in a config file, got '{}'", family));
  nonlinearity_model().validate();
  require(L > 0.0 && std::isfinite(L), fmt::format("L must be positive, got {}", L));
  require(n >= 16 && std::has_single_bit(n), fmt::format("n must be a power of two >= 16, got {}", n));
  require(x_spacing > 0.0 && std::isfinite(x_spacing),
          fmt::format("x_spacing must be positive, got {}", x_spacing));
  integrator.validate();
  require(s_max > 0.0 && std::isfinite(s_max), fmt::format("s_max must be positive, got {}", s_max));
  require(snapshots_per_unit_s > 0.0 && std::isfinite(snapshots_per_unit_s),
          "snapshots_per_unit_s must be positive");
  const double steps = s_max * snapshots_per_unit_s;
  require(std::abs(steps - std::round(steps)) < 1e-9 * std::max(1.0, steps) && steps >= 2.0,
          "s_max * snapshots_per_unit_s must be an integer >= 2");
  require(t_max > 0.0, fmt::format("t_max must be positive, got {}", t_max));
  require(fit_window.first >= 0.0 && fit_window.first < fit_window.second,
          fmt::format("fit_window [{}, {}] must satisfy 0 <= lo < hi", fit_window.first,
                      fit_window.second));
  require(lambda_fraction > 0.0 && lambda_fraction < 1.0,
          fmt::format("lambda_fraction must lie in (0, 1), got {}", lambda_fraction));
  require(std::isfinite(slope_threshold), "slope_threshold must be finite");
  weights.validate();
  require(epsilon >= 0.0 && std::isfinite(epsilon), fmt::format("epsilon must be >= 0, got {}", epsilon));
  require(std::isfinite(velocity_ratio), "velocity_ratio must be finite");
  require(snapshot_stride >= 1, "snapshot_stride must be >= 1");
  require(workers >= 1, "workers must be >= 1");
  require(!out_dir.empty(), "out_dir must not be empty");
  for (const auto& f : formats)
    require(f == "csv" || f == "json", fmt::format("unknown output format '{}'", f));
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw InvalidConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!kKnownKeys.contains(key)) throw InvalidConfigError(fmt::format("unknown config key '{}'", key));
  if (doc.contains("schema_version")) {
    const std::string v = text(doc, "schema_version", "1.0");
    if (v.substr(0, v.find('.')) != "1")
      throw InvalidConfigError(fmt::format("unsupported config schema_version '{}'", v));
  }

  RunConfig c;
  c.alpha = number(doc, "alpha", c.alpha);
  c.beta = number(doc, "beta", c.beta);
  c.family = text(doc, "family", c.family);
  c.mu = number(doc, "mu", c.mu);
  c.p = number(doc, "p", c.p);
  c.tilde_form = parse_tilde(text(doc, "tilde_form", std::string(to_string(c.tilde_form))));
  c.L = number(doc, "L", c.L);
  c.n = count(doc, "n", c.n);
  c.x_spacing = number(doc, "x_spacing", c.x_spacing);
  c.integrator.dt_initial = number(doc, "dt_initial", c.integrator.dt_initial);
  c.integrator.dt_max = number(doc, "dt_max", c.integrator.dt_max);
  c.integrator.error_tol = number(doc, "error_tol", c.integrator.error_tol);
  c.integrator.safety = number(doc, "safety", c.integrator.safety);
  c.integrator.scheme = parse_scheme(text(doc, "scheme", std::string(to_string(c.integrator.scheme))));
  c.s_max = number(doc, "s_max", c.s_max);
  c.snapshots_per_unit_s = number(doc, "snapshots_per_unit_s", c.snapshots_per_unit_s);
  c.t_max = number(doc, "t_max", c.t_max);
  if (doc.contains("fit_window")) {
    const json& w = doc.at("fit_window");
    require(w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number(),
            "fit_window must be a two-element numeric array");
    c.fit_window = {w[0].get<double>(), w[1].get<double>()};
  }
  c.lambda_fraction = number(doc, "lambda_fraction", c.lambda_fraction);
  c.slope_threshold = number(doc, "slope_threshold", c.slope_threshold);
  c.weights.c0 = number(doc, "c0", c.weights.c0);
  c.weights.c1_0 = number(doc, "c1_0", c.weights.c1_0);
  c.weights.c1_1 = number(doc, "c1_1", c.weights.c1_1);
  c.weights.c2 = number(doc, "c2", c.weights.c2);
  c.weights.ctilde0 = number(doc, "ctilde0", c.weights.ctilde0);
  c.weights.ctilde1_0 = number(doc, "ctilde1_0", c.weights.ctilde1_0);
  c.weights.ctilde1_1 = number(doc, "ctilde1_1", c.weights.ctilde1_1);
  c.epsilon = number(doc, "epsilon", c.epsilon);
  c.velocity_ratio = number(doc, "velocity_ratio", c.velocity_ratio);
  c.seed = count(doc, "seed", c.seed);
  c.out_dir = text(doc, "out_dir", c.out_dir);
  if (doc.contains("formats")) {
    const json& f = doc.at("formats");
    require(f.is_array(), "formats must be an array of strings");
    c.formats.clear();
    for (const auto& item : f) {
      require(item.is_string(), "formats must be an array of strings");
      c.formats.push_back(item.get<std::string>());
    }
  }
  c.snapshot_stride = count(doc, "snapshot_stride", c.snapshot_stride);
  c.workers = count(doc, "workers", c.workers);
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string config_to_json(const RunConfig& c) {
  json doc = {
      {"schema_version", "1.0"},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"family", c.family},
      {"mu", c.mu},
      {"p", c.p},
      {"tilde_form", std::string(to_string(c.tilde_form))},
      {"L", c.L},
      {"n", c.n},
      {"x_spacing", c.x_spacing},
      {"dt_initial", c.integrator.dt_initial},
      {"dt_max", c.integrator.dt_max},
      {"error_tol", c.integrator.error_tol},
      {"safety", c.integrator.safety},
      {"scheme", std::string(to_string(c.integrator.scheme))},
      {"s_max", c.s_max},
      {"snapshots_per_unit_s", c.snapshots_per_unit_s},
      {"t_max", c.t_max},
      {"fit_window", {c.fit_window.first, c.fit_window.second}},
      {"lambda_fraction", c.lambda_fraction},
      {"slope_threshold", c.slope_threshold},
      {"c0", c.weights.c0},
      {"c1_0", c.weights.c1_0},
      {"c1_1", c.weights.c1_1},
      {"c2", c.weights.c2},
      {"ctilde0", c.weights.ctilde0},
      {"ctilde1_0", c.weights.ctilde1_0},
      {"ctilde1_1", c.weights.ctilde1_1},
      {"epsilon", c.epsilon},
      {"velocity_ratio", c.velocity_ratio},
      {"seed", c.seed},
      {"out_dir", c.out_dir},
      {"formats", c.formats},
      {"snapshot_stride", c.snapshot_stride},
      {"workers", c.workers},
  };
  return doc.dump(2) + "\n";
}

}  // namespace beamlab
