#pragma once

// (alpha, beta)-plane sweeps: one full pipeline run per point on a worker pool.
// Per-point failures are recorded in the row, never abort the sweep.

#include <cstddef>
#include <string>
#include <vector>

#include "beamlab/config.hpp"
#include "beamlab/results_io.hpp"

namespace beamlab {

/// "start:stop:count" with count >= 1 evenly spaced values (count 1 requires start == stop).
/// Throws InvalidConfigError on malformed input.
std::vector<double> parse_range(const std::string& text);

/// Rows in alpha-major order. Throws InvalidConfigError for an empty list.
std::vector<SweepPoint> run_sweep(const std::vector<double>& alphas, const std::vector<double>& betas,
                                  const RunConfig& base, std::size_t workers);

}  // namespace beamlab
