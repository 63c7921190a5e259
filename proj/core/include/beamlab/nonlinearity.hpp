#pragma once

// N(z) = mu z^2 + Ntilde(z), with Ntilde either absent, the power law
// |z|^{p-1} z, or a user callable (excluded from acceptance runs).

#include <array>
#include <functional>
#include <string_view>

#include "beamlab/spectral_grid.hpp"

namespace beamlab {

enum class TildeForm { None, PowerLaw, Custom };

std::string_view to_string(TildeForm form) noexcept;

struct CustomTilde {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
};

struct NonlinearityModel {
  double mu = 0.0;
  double p = 3.0;
  TildeForm tilde_form = TildeForm::None;
  CustomTilde custom{};

  /// Throws InvalidModelError for p < 3 or a Custom form with missing callables.
  void validate() const;
  bool is_zero() const noexcept { return mu == 0.0 && tilde_form == TildeForm::None; }
};

/// Ntilde^{(order)}(z), order in 0..2.
double n_tilde_eval(const NonlinearityModel& model, double z, int order);
/// N^{(order)}(z), order in 0..2.
double n_eval(const NonlinearityModel& model, double z, int order);

struct AssumptionNReport {
  // Largest ratio |Ntilde^(j)(z) - Ntilde^(j)(w)| / ((|z|+|w|)^{p-1-j} |z-w|), j = 0..2,
  // over the unit box and the [-10, 10] box.
  std::array<double, 3> max_ratio_unit{};
  std::array<double, 3> max_ratio_wide{};
  std::size_t pairs_used = 0;
  bool passed = true;
};

/// Deterministic sampling (fixed seed) of the Hoelder-type condition on Ntilde.
AssumptionNReport verify_assumption_N(const NonlinearityModel& model, std::size_t sample_count);

/// Keeps |k| <= n/3 and zeroes the rest (2/3 rule).
void dealias(const Grid& grid, Spectrum& spectrum);

/// Spectrum of d/dx N(ux) given the spectrum of ux; dealiased before the pointwise
/// evaluation and before the final derivative.
Spectrum nonlinear_flux_spectrum(const NonlinearityModel& model, const Grid& grid,
                                 const Spectrum& ux_spectrum);

/// Grid samples of d/dx N(ux). Throws NumericalOverflowError on non-finite values.
Field nonlinear_flux(const NonlinearityModel& model, const Field& ux);

}  // namespace beamlab
