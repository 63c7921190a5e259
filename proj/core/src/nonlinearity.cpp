#include "beamlab/nonlinearity.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "beamlab/errors.hpp"

namespace beamlab {

std::string_view to_string(TildeForm form) noexcept {
  switch (form) {
    case TildeForm::None: return "none";
    case TildeForm::PowerLaw: return "power_law";
    case TildeForm::Custom: return "custom";
  }
  return "none";
}

void NonlinearityModel::validate() const {
  if (!std::isfinite(mu)) throw InvalidModelError("mu must be finite");
  if (!(p >= 3.0) || !std::isfinite(p))
    throw InvalidModelError(
        fmt::format("p = {} violates the growth assumption on N, which requires p >= 3", p));
  if (tilde_form == TildeForm::Custom && (!custom.value || !custom.first || !custom.second))
    throw InvalidModelError("custom Ntilde needs value, first and second derivative callables");
}

double n_tilde_eval(const NonlinearityModel& model, double z, int order) {
  switch (model.tilde_form) {
    case TildeForm::None:
      return 0.0;
    case TildeForm::PowerLaw: {
      const double p = model.p;
      const double az = std::abs(z);
      if (order == 0) return std::pow(az, p - 1.0) * z;
      if (order == 1) return p * std::pow(az, p - 1.0);
      // p(p-1)|z|^{p-3} z; the p = 3 branch avoids 0^0.
      if (p == 3.0) return 6.0 * z;
      return p * (p - 1.0) * std::pow(az, p - 3.0) * z;
    }
    case TildeForm::Custom:
      if (order == 0) return model.custom.value(z);
      if (order == 1) return model.custom.first(z);
      return model.custom.second(z);
  }
  return 0.0;
}

double n_eval(const NonlinearityModel& model, double z, int order) {
  if (order < 0 || order > 2)
    throw InvalidModelError(fmt::format("N derivative order must be in 0..2, got {}", order));
  if (model.p < 3.0)
    throw InvalidModelError(fmt::format("p = {} < 3 is not admissible", model.p));
  double quadratic = 0.0;
  if (order == 0) quadratic = model.mu * z * z;
  if (order == 1) quadratic = 2.0 * model.mu * z;
  if (order == 2) quadratic = 2.0 * model.mu;
  return quadratic + n_tilde_eval(model, z, order);
}

AssumptionNReport verify_assumption_N(const NonlinearityModel& model, std::size_t sample_count) {
  AssumptionNReport report;
  if (model.tilde_form == TildeForm::None) return report;
  std::mt19937_64 rng(20240601);
  auto scan = [&](double half_width, std::array<double, 3>& out) {
    std::uniform_real_distribution<double> dist(-half_width, half_width);
    for (std::size_t i = 0; i < sample_count; ++i) {
      const double z = dist(rng);
      const double w = dist(rng);
      if (std::abs(z - w) < 1e-12) continue;
      ++report.pairs_used;
      for (int j = 0; j < 3; ++j) {
        const double num = std::abs(n_tilde_eval(model, z, j) - n_tilde_eval(model, w, j));
        const double den = std::pow(std::abs(z) + std::abs(w), model.p - 1.0 - j) * std::abs(z - w);
        if (den > 0.0) out[static_cast<std::size_t>(j)] = std::max(out[static_cast<std::size_t>(j)], num / den);
      }
    }
  };
  scan(1.0, report.max_ratio_unit);
  scan(10.0, report.max_ratio_wide);
  for (std::size_t j = 0; j < 3; ++j) {
    const double a = report.max_ratio_unit[j];
    const double b = report.max_ratio_wide[j];
    // Bounded across scales: finite, and the wide box does not inflate the constant.
    if (!std::isfinite(a) || !std::isfinite(b) || b > 10.0 * std::max(a, 1.0)) report.passed = false;
  }
  return report;
}

void dealias(const Grid& grid, Spectrum& spectrum) {
  const std::size_t cutoff = grid.size() / 3;
  for (std::size_t k = cutoff + 1; k < spectrum.size(); ++k) spectrum[k] = 0.0;
}

Spectrum nonlinear_flux_spectrum(const NonlinearityModel& model, const Grid& grid,
                                 const Spectrum& ux_spectrum) {
  if (model.is_zero()) return Spectrum(grid.spectrum_size(), 0.0);
  Spectrum filtered = ux_spectrum;
  dealias(grid, filtered);
  std::vector<double> values = grid.inverse(filtered);
  for (double& z : values) {
    z = n_eval(model, z, 0);
    if (!std::isfinite(z))
      throw NumericalOverflowError("non-finite value while evaluating N(u_x) pointwise");
  }
  Spectrum n_spec = grid.forward(values);
  dealias(grid, n_spec);
  return deriv_spectrum(grid, n_spec, 1);
}

Field nonlinear_flux(const NonlinearityModel& model, const Field& ux) {
  const Grid& g = ux.grid();
  if (!ux.all_finite())
    throw NumericalOverflowError("non-finite input to the nonlinear flux");
  Field out(g, g.inverse(nonlinear_flux_spectrum(model, g, g.forward(ux.values()))));
  if (!out.all_finite())
    throw NumericalOverflowError("non-finite value after differentiating N(u_x)");
  return out;
}

}  // namespace beamlab
