#pragma once

// Full run: integrate, transform every snapshot into scaling variables,
// evaluate energies and identity terms, then fit the profile-error decay.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "beamlab/analysis.hpp"
#include "beamlab/config.hpp"
#include "beamlab/energy.hpp"

namespace beamlab {

struct SnapshotRecord {
  double s = 0;
  double t = 0;
  double m = 0;
  double m_s = 0;
  double err_shift = 0;
  std::optional<double> err_raw;
  EnergyReport report;
};

struct StoredSnapshot {
  double s = 0;
  double t = 0;
  std::vector<double> v;
  std::vector<double> w;
};

/// Residual norms of one identity on the logged spacing (fine) and on every
/// other snapshot (coarse, twice the spacing), over the coarse interior points.
struct RefinementSummary {
  double rms_fine = 0;
  double rms_coarse = 0;
  double max_fine = 0;
  double ratio = 0;  // rms_coarse / rms_fine
};

struct RunOptions {
  bool force = false;  // run outside Omega1 as exploratory instead of rejecting
  bool keep_fields = true;
};

struct RunResult {
  RunConfig config;
  RegionLabel region = RegionLabel::Boundary;
  bool exploratory = false;
  std::vector<std::string> notes;
  double s_max_effective = 0;
  double t_end = 0;
  double x_half_width = 0;
  std::size_t x_points = 0;
  std::optional<ExponentConstants> exponents;
  double lambda = 0;
  double predicted_slope = 0;  // -(1/4 + lambda/2)

  std::vector<SnapshotRecord> records;
  std::vector<StoredSnapshot> stored;  // every snapshot_stride-th snapshot, plus the last
  MStarEstimate m_star{};
  std::optional<RateFit> fit;
  std::optional<RateFit> fit_raw;

  std::map<std::string, RefinementSummary> identity_refinement;
  RefinementSummary mass_refinement;
  double mass_order = 0;

  double max_zero_mean_ratio = 0;
  bool lower_bound_holds = true;          // for s >= fit window start
  bool nonnegativity_holds = true;
  double energy_growth_ratio = 0;         // sup_{s >= lo} ~E / ~E(lo)
  IntegrationStats stats;
  std::map<std::string, bool> checks;
};

/// Initial data u0 = eps e^{-x^2/4} (1 + 0.3 cos(x/2 + theta) e^{-x^2/8}) and
/// u1 = kappa eps e^{-(x-1)^2/4}, theta = 0 for seed 0 and seed-derived otherwise.
PhysicalState initial_state(const RunConfig& config, const Grid& x_grid);

/// Physical grid containing every scaled window up to s_max.
Grid physical_grid(const RunConfig& config, double s_max);

/// Throws OutOfRegionError outside Omega1 unless options.force; numerical
/// failures propagate as the solver's exceptions.
RunResult run_simulation(const RunConfig& config, const RunOptions& options = {});

}  // namespace beamlab
