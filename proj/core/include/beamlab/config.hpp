#pragma once

// Run configuration: one flat JSON object of documented keys. Unknown keys
// and out-of-range values are rejected with InvalidConfigError.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "beamlab/coefficients.hpp"
#include "beamlab/energy.hpp"
#include "beamlab/nonlinearity.hpp"
#include "beamlab/solver.hpp"

namespace beamlab {

struct RunConfig {
  // coefficients
  double alpha = 0.0;
  double beta = 0.0;
  std::string family = "power_law";
  // nonlinearity
  double mu = 0.0;
  double p = 3.0;
  TildeForm tilde_form = TildeForm::None;
  // scaled grid [-L, L) with n points; physical grid spacing
  double L = 20.0;
  std::size_t n = 512;
  double x_spacing = 0.2;
  // integrator
  IntegratorConfig integrator{};
  // schedule: uniform in s on [0, s_max]; physical time capped at t_max
  double s_max = 6.0;
  double snapshots_per_unit_s = 100.0;
  double t_max = 5000.0;
  // analysis
  std::pair<double, double> fit_window{2.0, 6.0};
  double lambda_fraction = 0.9;
  double slope_threshold = -0.35;
  EnergyWeights weights{};
  // initial data
  double epsilon = 0.05;
  double velocity_ratio = 0.5;
  std::uint64_t seed = 0;
  // output
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::size_t snapshot_stride = 10;
  // runtime
  std::size_t workers = 1;

  CoefficientModel coefficient_model() const;
  NonlinearityModel nonlinearity_model() const;
  /// Throws InvalidConfigError (or InvalidModelError for p < 3).
  void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
/// Canonical JSON rendering (sorted keys, fixed precision); parse_config round-trips it.
std::string config_to_json(const RunConfig& config);

}  // namespace beamlab
