#pragma once

// Property suites behind `beamlab verify` and the acceptance runner: Hardy
// inequality, general and specialized energy identities, solver convergence,
// coefficient exponent laws and the region atlas.

#include <cstdint>
#include <string>
#include <vector>

#include "beamlab/pipeline.hpp"
#include "beamlab/results_io.hpp"

namespace beamlab {

/// Linear reference run: (alpha, beta) = (0, 0), N = 0, eps = 0.05, s in [0, 6], ds = 0.005,
/// scaled window L = 40 with n = 1024 (spacing as for L = 20, n = 512).
RunConfig linear_reference_config();
/// Nonlinear reference run: mu = 1, p = 3 power law, eps = 0.01.
RunConfig nonlinear_reference_config(double alpha, double beta);

CheckResult check_hardy_random(std::size_t count = 1000, std::uint64_t seed = 7);
CheckResult check_hardy_analytic();

/// Three manufactured systems; per system and identity an absolute check at ds and
/// a refinement check (residual(ds) / residual(ds/2)).
std::vector<CheckResult> check_general_identities(double ds = 1e-3);

/// Refinement ratio >= 3.7 and fine-step max <= 1e-5 for all ten identities.
std::vector<CheckResult> check_run_identities(const RunResult& run);
CheckResult check_mass_order(const RunResult& run);
CheckResult check_zero_mean(const RunResult& run);
CheckResult check_rate(const RunResult& run);

/// Fixed-step self-convergence order on the nonlinear problem at t = 1.
CheckResult check_solver_order(Scheme scheme = Scheme::ExpMidpoint);
/// Pure beam (b = 0, a = 1, N = 0) energy drift over t in [0, 10].
CheckResult check_pure_beam_drift();

/// Log-slopes of c1 = r^2 e^{-s}/a and c4 = e^{-s}/a against the closed-form exponents.
std::vector<CheckResult> check_coefficient_laws();
CheckResult check_region_atlas();

/// suite in {hardy, identities, convergence, all}; throws InvalidConfigError otherwise.
std::vector<CheckResult> run_suite(const std::string& suite);

}  // namespace beamlab
