#include "beamlab/pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "beamlab/errors.hpp"
#include "beamlab/scaling.hpp"

namespace beamlab {

namespace {

constexpr double kRefinementRatio = 3.7;
constexpr double kIdentityAbsolute = 1e-5;
constexpr double kMassOrder = 1.9;
constexpr double kZeroMean = 1e-9;
constexpr double kMinRSquared = 0.95;

// Largest reachable s: limited by s_max, by a bounded R, and by t_max.
double reachable_s(const CoefficientModel& model, double s_max, double t_max,
                   std::vector<std::string>& notes) {
  try {
    const double t_end = big_R_inverse(model, std::expm1(s_max));
    if (std::isfinite(t_end) && t_end <= t_max) return s_max;
  } catch (const InvalidCoefficientError&) {
    // R is bounded: fall through to the t_max cap.
  }
  const double s_cap = std::log1p(big_R(model, t_max));
  notes.push_back(fmt::format("s_max reduced from {} to {:.6g}: t(s_max) exceeds t_max = {}", s_max,
                              s_cap, t_max));
  return s_cap;
}

double err_raw_scaled(double s, double R, const Field& v, double m_star) {
  // u - m* G(R, x) in scaled variables: sqrt(R+1) G(R, sqrt(R+1) y).
  const double scale = std::sqrt(R + 1.0);
  const Grid& g = v.grid();
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double d = v[j] - m_star * scale * heat_kernel(R, scale * g.point(j));
    sum += d * d;
  }
  return std::exp(-0.25 * s) * std::sqrt(sum * g.spacing());
}

RefinementSummary compare(const std::vector<ResidualPoint>& fine,
                          const std::vector<ResidualPoint>& coarse) {
  // fine[i] sits at snapshot i + 1 and coarse[j] at snapshot 2 (j + 1) = fine[2j + 1].
  RefinementSummary out;
  double sf = 0.0, sc = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < coarse.size() && 2 * j + 1 < fine.size(); ++j) {
    sf += fine[2 * j + 1].residual * fine[2 * j + 1].residual;
    sc += coarse[j].residual * coarse[j].residual;
    ++count;
  }
  for (const auto& p : fine) out.max_fine = std::max(out.max_fine, p.residual);
  if (count == 0) return out;
  out.rms_fine = std::sqrt(sf / static_cast<double>(count));
  out.rms_coarse = std::sqrt(sc / static_cast<double>(count));
  out.ratio = out.rms_fine > 0.0 ? out.rms_coarse / out.rms_fine
                                 : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

PhysicalState initial_state(const RunConfig& config, const Grid& x_grid) {
  double theta = 0.0;
  if (config.seed != 0) {
    std::mt19937_64 rng(config.seed);
    theta = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  }
  const double eps = config.epsilon;
  const double kappa = config.velocity_ratio;
  return {0.0, Field::sample(x_grid, [&](double x) {
            return eps * std::exp(-0.25 * x * x) *
                   (1.0 + 0.3 * std::cos(0.5 * x + theta) * std::exp(-0.125 * x * x));
          }),
          Field::sample(x_grid, [&](double x) {
            return kappa * eps * std::exp(-0.25 * (x - 1.0) * (x - 1.0));
          })};
}

Grid physical_grid(const RunConfig& config, double s_max) {
  const double half_width = config.L * std::exp(0.5 * s_max);
  const auto wanted = static_cast<std::size_t>(std::ceil(2.0 * half_width / config.x_spacing));
  return Grid(half_width, std::bit_ceil(std::max<std::size_t>(wanted, 16)));
}

RunResult run_simulation(const RunConfig& config, const RunOptions& options) {
  config.validate();
  RunResult result;
  result.config = config;
  result.region = classify_region(config.alpha, config.beta);
  if (result.region != RegionLabel::Omega1) {
    if (!options.force)
      throw OutOfRegionError(fmt::format(
          "(alpha, beta) = ({}, {}) lies in {}, outside Omega1 where the decay theorem applies; "
          "use --force for an exploratory run",
          config.alpha, config.beta, to_string(result.region)));
    result.exploratory = true;
    result.notes.push_back(fmt::format("exploratory: region {}", to_string(result.region)));
  }

  const CoefficientModel model = config.coefficient_model();
  const NonlinearityModel nonlin = config.nonlinearity_model();
  if (config.alpha - config.beta + 1.0 > 0.0) {
    result.exponents = exponent_constants(config.alpha, config.beta);
    result.lambda = config.lambda_fraction * result.exponents->lambda_max;
    result.predicted_slope = -(0.25 + 0.5 * result.lambda);
  }

  const double s_eff = reachable_s(model, config.s_max, config.t_max, result.notes);
  result.s_max_effective = s_eff;
  const double ds = 1.0 / config.snapshots_per_unit_s;
  const auto intervals = static_cast<std::size_t>(std::floor(s_eff / ds + 1e-9));
  if (intervals < 2)
    throw InsufficientDataError(fmt::format("reachable s range [0, {}] holds fewer than 3 snapshots", s_eff));
  std::vector<double> s_grid(intervals + 1), t_grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    s_grid[i] = static_cast<double>(i) * ds;
    t_grid[i] = i == 0 ? 0.0 : big_R_inverse(model, std::expm1(s_grid[i]));
  }
  result.t_end = t_grid.back();

  const Grid y_grid(config.L, config.n);
  const Grid x_grid = physical_grid(config, s_grid.back());
  result.x_half_width = x_grid.half_width();
  result.x_points = x_grid.size();

  std::vector<Field> v_fields;
  v_fields.reserve(s_grid.size());
  std::size_t index = 0;
  auto observer = [&](const PhysicalState& state) {
    const ScaledState scaled = to_scaled(state, model, y_grid);
    SnapshotRecord rec;
    rec.s = s_grid[index];
    rec.t = state.t;
    rec.m = scaled.m;
    rec.m_s = scaled.m_s;
    rec.report = evaluate_report(scaled, nonlin, config.weights);
    rec.report.s = rec.s;
    result.records.push_back(std::move(rec));
    v_fields.push_back(scaled.v);
    const bool last = index + 1 == s_grid.size();
    if (options.keep_fields && (index % config.snapshot_stride == 0 || last)) {
      result.stored.push_back({s_grid[index], state.t,
                               std::vector<double>(scaled.v.values().begin(), scaled.v.values().end()),
                               std::vector<double>(scaled.w.values().begin(), scaled.w.values().end())});
    }
    ++index;
  };
  result.stats = integrate_observed(initial_state(config, x_grid), t_grid.back(), t_grid,
                                    coefficient_fn(model), nonlin, config.integrator, observer);

  // Asymptotic mass and profile errors.
  std::vector<SeriesPoint> m_series, err_series, raw_series;
  for (const auto& r : result.records) m_series.push_back({r.s, r.m});
  result.m_star = estimate_m_star(m_series);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    SnapshotRecord& r = result.records[i];
    r.err_shift = scaled_profile_error(r.s, v_fields[i], result.m_star.m_star);
    err_series.push_back({r.s, r.err_shift});
    const double R = std::expm1(r.s);
    if (R > 0.0) {
      r.err_raw = err_raw_scaled(r.s, R, v_fields[i], result.m_star.m_star);
      raw_series.push_back({r.s, *r.err_raw});
    }
  }
  std::pair<double, double> window = config.fit_window;
  window.second = std::min(window.second, s_grid.back());
  if (window.second < config.fit_window.second)
    result.notes.push_back(fmt::format("fit window clipped to [{}, {:.6g}]", window.first, window.second));
  try {
    result.fit = fit_decay_rate(err_series, window);
    result.fit_raw = fit_decay_rate(raw_series, window);
  } catch (const Error& e) {
    result.notes.push_back(fmt::format("rate fit unavailable: {}", e.what()));
  }

  // Identity residuals on the logged spacing and on twice that spacing.
  std::vector<double> s_fine, s_coarse;
  std::vector<IdentityTerms> terms_fine, terms_coarse;
  std::vector<MassSample> mass_fine, mass_coarse;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const SnapshotRecord& r = result.records[i];
    s_fine.push_back(r.s);
    terms_fine.push_back(r.report.identity);
    mass_fine.push_back({r.s, r.m, r.m_s, std::nullopt});
    if (i % 2 == 0) {
      s_coarse.push_back(r.s);
      terms_coarse.push_back(r.report.identity);
      mass_coarse.push_back({r.s, r.m, r.m_s, std::nullopt});
    }
  }
  const auto fine = specialized_identity_residuals(s_fine, terms_fine);
  for (auto& [name, series] : fine)
    for (std::size_t i = 0; i < series.size(); ++i)
      result.records[i + 1].report.identity_residuals[name] = series[i].residual;
  bool refinement_ok = true;
  bool absolute_ok = true;
  if (s_coarse.size() >= 3) {
    const auto coarse = specialized_identity_residuals(s_coarse, terms_coarse);
    for (const auto& [name, series] : fine) {
      const RefinementSummary summary = compare(series, coarse.at(name));
      refinement_ok = refinement_ok && summary.ratio >= kRefinementRatio;
      absolute_ok = absolute_ok && summary.max_fine <= kIdentityAbsolute;
      result.identity_refinement[name] = summary;
    }
    auto to_points = [](const std::vector<MassResidual>& m) {
      std::vector<ResidualPoint> out;
      for (const auto& p : m) out.push_back({p.s, std::abs(p.residual)});
      return out;
    };
    result.mass_refinement = compare(to_points(mass_ode_residual(mass_fine, model)),
                                     to_points(mass_ode_residual(mass_coarse, model)));
    result.mass_order = std::log2(result.mass_refinement.ratio);
  } else {
    refinement_ok = false;
  }

  // Runtime monitors.
  const double s_lo = config.fit_window.first;
  double energy_ref = std::numeric_limits<double>::quiet_NaN();
  double energy_sup = 0.0;
  for (const auto& r : result.records) {
    const EnergyReport& rep = r.report;
    result.max_zero_mean_ratio = std::max(
        {result.max_zero_mean_ratio, rep.zero_mean.f, rep.zero_mean.g, rep.zero_mean.h});
    const EnergyParts& p = rep.parts;
    if (p.E01 < 0 || p.E11_0 < 0 || p.E11_1 < 0 || p.E21 < 0 || p.Em1 < 0)
      result.nonnegativity_holds = false;
    if (r.s >= s_lo - 1e-12) {
      if (!rep.lower_bound.holds) result.lower_bound_holds = false;
      if (std::isnan(energy_ref)) energy_ref = rep.composites.calE_tilde;
      energy_sup = std::max(energy_sup, rep.composites.calE_tilde);
    }
  }
  result.energy_growth_ratio = std::isnan(energy_ref) || energy_ref == 0.0
                                   ? 0.0
                                   : energy_sup / energy_ref;

  const bool rate_ok = result.fit && result.fit->slope <= config.slope_threshold &&
                       result.fit->r_squared >= kMinRSquared;
  result.checks = {
      {"rate", rate_ok},
      {"identity_refinement", refinement_ok},
      {"identity_absolute", absolute_ok},
      {"mass_order", result.mass_order >= kMassOrder},
      {"zero_mean", result.max_zero_mean_ratio <= kZeroMean},
      {"lower_bound", result.lower_bound_holds},
      {"nonnegativity", result.nonnegativity_holds},
      {"energy_bounded", !std::isnan(energy_ref) && result.energy_growth_ratio <= 2.0},
  };
  return result;
}

}  // namespace beamlab
