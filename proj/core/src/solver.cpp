#include "beamlab/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

struct SpectralState {
  Spectrum u;
  Spectrum v;
};

class Stepper {
 public:
  Stepper(const Grid& grid, const CoefficientFn& coeffs, const NonlinearityModel& nonlin,
          Scheme scheme)
      : grid_(grid), coeffs_(coeffs), nonlin_(nonlin), scheme_(scheme) {
    xi2_.resize(grid.spectrum_size());
    for (std::size_t k = 0; k < xi2_.size(); ++k) {
      const double xi = grid.wavenumber(k);
      xi2_[k] = xi * xi;
    }
  }

  SpectralState step(const SpectralState& U, double t, double h) {
    const auto& full = propagator(h);
    switch (scheme_) {
      case Scheme::ExpEuler: {
        const Spectrum k1 = force(t, U);
        return apply(full, {U.u, add(U.v, h, k1)});
      }
      case Scheme::ExpMidpoint: {
        const auto half = beam_propagator(grid_, 0.5 * h);
        const Spectrum k1 = force(t, U);
        const SpectralState mid = apply(half, {U.u, add(U.v, 0.5 * h, k1)});
        const Spectrum k2 = force(t + 0.5 * h, mid);
        SpectralState out = apply(full, U);
        add_propagated_forcing(out, half, h, k2);
        return out;
      }
      case Scheme::ExpRK4: {
        const auto half = beam_propagator(grid_, 0.5 * h);
        const Spectrum k1 = force(t, U);
        const SpectralState U2 = apply(half, {U.u, add(U.v, 0.5 * h, k1)});
        const Spectrum k2 = force(t + 0.5 * h, U2);
        SpectralState U3 = apply(half, U);
        axpy_v(U3, 0.5 * h, k2);
        const Spectrum k3 = force(t + 0.5 * h, U3);
        SpectralState U4 = apply(full, U);
        add_propagated_forcing(U4, half, h, k3);
        const Spectrum k4 = force(t + h, U4);

        SpectralState out = apply(full, U);
        add_propagated_forcing(out, full, h / 6.0, k1);
        Spectrum k23 = k2;
        for (std::size_t k = 0; k < k23.size(); ++k) k23[k] += k3[k];
        add_propagated_forcing(out, half, h / 3.0, k23);
        axpy_v(out, h / 6.0, k4);
        return out;
      }
    }
    return U;
  }

  Spectrum force(double t, const SpectralState& U) {
    const auto [a, b] = coeffs_(t);
    Spectrum out = nonlin_.is_zero()
                       ? Spectrum(U.u.size(), 0.0)
                       : nonlinear_flux_spectrum(nonlin_, grid_, deriv_spectrum(grid_, U.u, 1));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += -b * U.v[k] - a * xi2_[k] * U.u[k];
    return out;
  }

 private:
  const std::vector<PropagatorBlock>& propagator(double h) {
    if (h != cached_h_) {
      cached_ = beam_propagator(grid_, h);
      cached_h_ = h;
    }
    return cached_;
  }

  static Spectrum add(const Spectrum& x, double c, const Spectrum& y) {
    Spectrum out = x;
    if (c != 0.0)
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * y[k];
    return out;
  }

  static void axpy_v(SpectralState& U, double c, const Spectrum& y) {
    for (std::size_t k = 0; k < y.size(); ++k) U.v[k] += c * y[k];
  }

  static SpectralState apply(const std::vector<PropagatorBlock>& T, const SpectralState& U) {
    SpectralState out{Spectrum(U.u.size()), Spectrum(U.v.size())};
    for (std::size_t k = 0; k < T.size(); ++k) {
      out.u[k] = T[k].uu * U.u[k] + T[k].uv * U.v[k];
      out.v[k] = T[k].vu * U.u[k] + T[k].vv * U.v[k];
    }
    return out;
  }

  // out += c * T (0, forcing)
  static void add_propagated_forcing(SpectralState& out, const std::vector<PropagatorBlock>& T,
                                     double c, const Spectrum& forcing) {
    for (std::size_t k = 0; k < T.size(); ++k) {
      out.u[k] += c * T[k].uv * forcing[k];
      out.v[k] += c * T[k].vv * forcing[k];
    }
  }

  const Grid& grid_;
  const CoefficientFn& coeffs_;
  const NonlinearityModel& nonlin_;
  Scheme scheme_;
  std::vector<double> xi2_;
  double cached_h_ = -1.0;
  std::vector<PropagatorBlock> cached_;
};

SpectralState to_spectral(const PhysicalState& s) {
  return {s.u.grid().forward(s.u.values()), s.u.grid().forward(s.ut.values())};
}

PhysicalState to_physical(const Grid& grid, double t, const SpectralState& U) {
  return {t, Field(grid, grid.inverse(U.u)), Field(grid, grid.inverse(U.v))};
}

double spectral_norm2(const Spectrum& s) {
  double sum = 0.0;
  for (const auto& c : s) sum += std::norm(c);
  return sum;
}

bool spectrum_finite(const Spectrum& s) {
  return std::all_of(s.begin(), s.end(),
                     [](const auto& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// Upper bound on the sup-norm from the coefficients of the trigonometric interpolant.
double sup_bound(const Grid& grid, const Spectrum& s) {
  double sum = std::abs(s.front()) + std::abs(s.back());
  for (std::size_t k = 1; k + 1 < s.size(); ++k) sum += 2.0 * std::abs(s[k]);
  return sum / static_cast<double>(grid.size());
}

void check_blowup(const Grid& grid, double t, const SpectralState& U, double threshold) {
  if (!spectrum_finite(U.u) || !spectrum_finite(U.v))
    throw BlowUpDetectedError(fmt::format("solution became non-finite at t = {}", t), t,
                              std::numeric_limits<double>::infinity());
  if (sup_bound(grid, U.u) <= threshold && sup_bound(grid, U.v) <= threshold) return;
  const double sup = std::max(Field(grid, grid.inverse(U.u)).sup_norm(),
                              Field(grid, grid.inverse(U.v)).sup_norm());
  if (sup > threshold)
    throw BlowUpDetectedError(
        fmt::format("sup-norm {:.3e} exceeded the blow-up threshold {:.3e} at t = {}", sup,
                    threshold, t),
        t, sup);
}

void require_same_grid(const PhysicalState& s) {
  if (!s.u.grid().same_as(s.ut.grid()))
    throw InvalidConfigError("u and u_t must live on the same grid");
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::ExpEuler: return "exp_euler";
    case Scheme::ExpMidpoint: return "exp_midpoint";
    case Scheme::ExpRK4: return "exp_rk4";
  }
  return "exp_rk4";
}

int scheme_order(Scheme scheme) noexcept {
  switch (scheme) {
    case Scheme::ExpEuler: return 1;
    case Scheme::ExpMidpoint: return 2;
    case Scheme::ExpRK4: return 4;
  }
  return 1;
}

void IntegratorConfig::validate() const {
  if (!(dt_initial > 0.0) || !(dt_max > 0.0))
    throw InvalidConfigError("dt_initial and dt_max must be positive");
  if (dt_initial > dt_max)
    throw InvalidConfigError(
        fmt::format("dt_initial = {} exceeds dt_max = {}", dt_initial, dt_max));
  if (!(safety > 0.0 && safety <= 1.0))
    throw InvalidConfigError(fmt::format("safety must lie in (0, 1], got {}", safety));
  if (!(error_tol > 0.0)) throw InvalidConfigError("error_tol must be positive");
  if (!(blowup_threshold > 0.0)) throw InvalidConfigError("blowup_threshold must be positive");
}

std::vector<PropagatorBlock> beam_propagator(const Grid& grid, double dt) {
  if (!(dt >= 0.0)) throw InvalidConfigError(fmt::format("propagator step must be >= 0, got {}", dt));
  std::vector<PropagatorBlock> out(grid.spectrum_size());
  out[0] = {1.0, dt, 0.0, 1.0};
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double xi = grid.wavenumber(k);
    const double w = xi * xi;
    const double c = std::cos(w * dt);
    const double s = std::sin(w * dt);
    out[k] = {c, s / w, -w * s, c};
  }
  return out;
}

CoefficientFn coefficient_fn(const CoefficientModel& model) {
  return [model](double t) {
    const CoefficientValues c = eval_coeffs(model, t);
    return std::array<double, 2>{c.a, c.b};
  };
}

Field forcing(const PhysicalState& state, const CoefficientFn& coeffs,
              const NonlinearityModel& nonlin) {
  require_same_grid(state);
  const Grid& g = state.u.grid();
  Stepper stepper(g, coeffs, nonlin, Scheme::ExpEuler);
  return Field(g, g.inverse(stepper.force(state.t, to_spectral(state))));
}

Field forcing(const PhysicalState& state, const CoefficientModel& coeffs,
              const NonlinearityModel& nonlin) {
  return forcing(state, coefficient_fn(coeffs), nonlin);
}

PhysicalState step(const PhysicalState& state, double dt, const CoefficientFn& coeffs,
                   const NonlinearityModel& nonlin, const IntegratorConfig& config) {
  if (!(dt > 0.0)) throw InvalidConfigError(fmt::format("step size must be positive, got {}", dt));
  require_same_grid(state);
  const Grid& g = state.u.grid();
  Stepper stepper(g, coeffs, nonlin, config.scheme);
  return to_physical(g, state.t + dt, stepper.step(to_spectral(state), state.t, dt));
}

PhysicalState step(const PhysicalState& state, double dt, const CoefficientModel& coeffs,
                   const NonlinearityModel& nonlin, const IntegratorConfig& config) {
  return step(state, dt, coefficient_fn(coeffs), nonlin, config);
}

IntegrationStats integrate_observed(const PhysicalState& initial, double t_end,
                                    const std::vector<double>& snapshot_times,
                                    const CoefficientFn& coeffs, const NonlinearityModel& nonlin,
                                    const IntegratorConfig& config,
                                    const SnapshotObserver& observer) {
  config.validate();
  require_same_grid(initial);
  const double t0 = initial.t;
  if (!(t_end >= t0))
    throw InvalidConfigError(fmt::format("t_end = {} precedes the initial time {}", t_end, t0));
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    const double ts = snapshot_times[i];
    if (ts < t0 || ts > t_end || (i > 0 && !(ts > snapshot_times[i - 1])))
      throw InvalidConfigError("snapshot times must increase strictly inside [t0, t_end]");
  }

  const Grid& g = initial.u.grid();
  Stepper stepper(g, coeffs, nonlin, config.scheme);
  SpectralState U = to_spectral(initial);
  double t = t0;
  IntegrationStats stats;
  stats.dt_min = std::numeric_limits<double>::infinity();
  std::size_t next = 0;
  auto emit_due = [&]() {
    while (next < snapshot_times.size() && snapshot_times[next] <= t) {
      if (observer) observer(to_physical(g, t, U));
      ++next;
    }
  };
  emit_due();

  const double order = scheme_order(config.scheme);
  double dt = config.dt_initial;
  // Stop target: the next snapshot, or t_end.
  while (t < t_end) {
    const double target = next < snapshot_times.size() ? snapshot_times[next] : t_end;
    double h = std::min(dt, target - t);
    const bool lands = h >= target - t;
    if (!config.adaptive) {
      SpectralState trial;
      try {
        trial = stepper.step(U, t, h);
      } catch (const NumericalOverflowError& e) {
        throw BlowUpDetectedError(fmt::format("{} at t = {}", e.what(), t), t,
                                  std::numeric_limits<double>::infinity());
      }
      t = lands ? target : t + h;
      U = std::move(trial);
      check_blowup(g, t, U, config.blowup_threshold);
      ++stats.accepted;
      stats.dt_min = std::min(stats.dt_min, h);
      stats.dt_max = std::max(stats.dt_max, h);
      emit_due();
      continue;
    }

    double err = std::numeric_limits<double>::infinity();
    SpectralState fine;
    try {
      const SpectralState coarse = stepper.step(U, t, h);
      fine = stepper.step(stepper.step(U, t, 0.5 * h), t + 0.5 * h, 0.5 * h);
      double diff = 0.0;
      for (std::size_t k = 0; k < coarse.u.size(); ++k)
        diff += std::norm(coarse.u[k] - fine.u[k]) + std::norm(coarse.v[k] - fine.v[k]);
      const double scale = spectral_norm2(fine.u) + spectral_norm2(fine.v);
      err = scale > 0.0 ? std::sqrt(diff / scale) : std::sqrt(diff);
    } catch (const NumericalOverflowError&) {
      err = std::numeric_limits<double>::infinity();
    }
    if (!std::isfinite(err) || err > config.error_tol) {
      ++stats.rejected;
      dt = 0.5 * h;
      if (dt < config.dt_floor) {
        check_blowup(g, t, U, config.blowup_threshold);
        throw StiffnessFailureError(
            fmt::format("step size {:.3e} fell below {:.1e} at t = {}", dt, config.dt_floor, t),
            t, dt);
      }
      continue;
    }
    t = lands ? target : t + h;
    U = std::move(fine);
    check_blowup(g, t, U, config.blowup_threshold);
    ++stats.accepted;
    stats.dt_min = std::min(stats.dt_min, h);
    stats.dt_max = std::max(stats.dt_max, h);
    const double growth =
        err > 0.0 ? config.safety * std::pow(config.error_tol / err, 1.0 / (order + 1.0)) : 2.0;
    // A step clipped to land on a target keeps the previous nominal step when it passed easily.
    const double previous = dt;
    dt = std::min(h * std::min(growth, 2.0), config.dt_max);
    if (lands && growth >= 1.0) dt = std::max(dt, previous);
    emit_due();
  }
  if (!std::isfinite(stats.dt_min)) stats.dt_min = 0.0;
  return stats;
}

Trajectory integrate(const PhysicalState& initial, double t_end,
                     const std::vector<double>& snapshot_times, const CoefficientFn& coeffs,
                     const NonlinearityModel& nonlin, const IntegratorConfig& config) {
  Trajectory traj;
  std::vector<double> times = snapshot_times;
  if (times.empty()) {
    times.push_back(initial.t);
    if (t_end > initial.t) times.push_back(t_end);
  }
  traj.stats = integrate_observed(initial, t_end, times, coeffs, nonlin, config,
                                  [&](const PhysicalState& s) { traj.snapshots.push_back(s); });
  return traj;
}

Trajectory integrate(const PhysicalState& initial, double t_end,
                     const std::vector<double>& snapshot_times, const CoefficientModel& coeffs,
                     const NonlinearityModel& nonlin, const IntegratorConfig& config) {
  return integrate(initial, t_end, snapshot_times, coefficient_fn(coeffs), nonlin, config);
}

}  // namespace beamlab
