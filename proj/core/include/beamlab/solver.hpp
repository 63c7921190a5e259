#pragma once

// Mild-solution time stepping for U = (u, u_t): the beam group exp(tA),
// A = [[0, 1], [-d^4, 0]], is applied exactly per Fourier mode and the
// remaining terms K(t; U) enter through exponential (Lawson) Runge-Kutta stages.

#include <array>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "beamlab/coefficients.hpp"
#include "beamlab/nonlinearity.hpp"
#include "beamlab/spectral_grid.hpp"

namespace beamlab {

struct PhysicalState {
  double t = 0.0;
  Field u;
  Field ut;
};

enum class Scheme { ExpEuler, ExpMidpoint, ExpRK4 };

std::string_view to_string(Scheme scheme) noexcept;
int scheme_order(Scheme scheme) noexcept;

struct IntegratorConfig {
  double dt_initial = 1e-3;
  double dt_max = 0.25;
  double safety = 0.9;
  double error_tol = 1e-10;
  Scheme scheme = Scheme::ExpRK4;
  bool adaptive = true;  // false: fixed steps of dt_initial (snapshot times still hit exactly)
  double blowup_threshold = 1e8;
  double dt_floor = 1e-12;

  void validate() const;
};

/// Per-mode block [[c, s/w], [-w s, c]] with w = xi^2, c = cos(w dt), s = sin(w dt).
struct PropagatorBlock {
  double uu;
  double uv;
  double vu;
  double vv;
};

std::vector<PropagatorBlock> beam_propagator(const Grid& grid, double dt);

/// (a(t), b(t)) as seen by the stepper; allows b = 0 or a = b = 0 which CoefficientModel forbids.
using CoefficientFn = std::function<std::array<double, 2>(double)>;

CoefficientFn coefficient_fn(const CoefficientModel& model);

/// Second component of K: -b u_t + a u_xx + d/dx N(u_x). The first component is identically zero.
Field forcing(const PhysicalState& state, const CoefficientFn& coeffs,
              const NonlinearityModel& nonlin);
Field forcing(const PhysicalState& state, const CoefficientModel& coeffs,
              const NonlinearityModel& nonlin);

/// One step of the configured scheme (no error control).
PhysicalState step(const PhysicalState& state, double dt, const CoefficientFn& coeffs,
                   const NonlinearityModel& nonlin, const IntegratorConfig& config);
PhysicalState step(const PhysicalState& state, double dt, const CoefficientModel& coeffs,
                   const NonlinearityModel& nonlin, const IntegratorConfig& config);

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
};

struct Trajectory {
  std::vector<PhysicalState> snapshots;
  IntegrationStats stats;
};

using SnapshotObserver = std::function<void(const PhysicalState&)>;

/// Integrates from initial.t to t_end, calling `observer` at each snapshot time
/// (increasing, inside [initial.t, t_end]). Throws StiffnessFailureError when the
/// adaptive step falls below dt_floor and BlowUpDetectedError when the sup-norm
/// exceeds blowup_threshold or becomes non-finite.
IntegrationStats integrate_observed(const PhysicalState& initial, double t_end,
                                    const std::vector<double>& snapshot_times,
                                    const CoefficientFn& coeffs, const NonlinearityModel& nonlin,
                                    const IntegratorConfig& config,
                                    const SnapshotObserver& observer);

/// Stores the snapshots; with no snapshot times the initial and final states are kept.
Trajectory integrate(const PhysicalState& initial, double t_end,
                     const std::vector<double>& snapshot_times, const CoefficientFn& coeffs,
                     const NonlinearityModel& nonlin, const IntegratorConfig& config);
Trajectory integrate(const PhysicalState& initial, double t_end,
                     const std::vector<double>& snapshot_times, const CoefficientModel& coeffs,
                     const NonlinearityModel& nonlin, const IntegratorConfig& config);

}  // namespace beamlab
