#pragma once

// Scaling variables s = log(R(t)+1), y = x / sqrt(R(t)+1), the Gaussian
// profiles phi = G(1, .) and psi = phi'', the decomposition
// v = m phi + f, w = m_s phi + m psi + g, the remainder h and the
// antiderivatives F, G, H.

#include <optional>
#include <vector>

#include "beamlab/coefficients.hpp"
#include "beamlab/solver.hpp"
#include "beamlab/spectral_grid.hpp"

namespace beamlab {

/// phi^{(k)}(y) for k in 0..6, via phi^{(k)} = (-1/2)^k He-type Hermite factor times phi.
double phi_derivative(double y, int k);
inline double phi_value(double y) { return phi_derivative(y, 0); }
/// psi^{(k)} = phi^{(k+2)}, k in 0..4.
inline double psi_derivative(double y, int k) { return phi_derivative(y, k + 2); }

Field profile_phi(const Grid& y_grid);
Field profile_psi(const Grid& y_grid);
Field profile_phi_derivative(const Grid& y_grid, int k);

/// Heat kernel G(t, x) = (4 pi t)^{-1/2} exp(-x^2 / (4t)).
double heat_kernel(double t, double x);

struct ScaledState {
  double s;
  ScaledFactors factors;
  Grid y_grid;
  Field v;
  Field w;
  double m;
  double m_s;
  Field f;
  Field g;
  Field h;
  Field F;
  Field G_anti;
  Field H_anti;
};

/// Samples u and u_t at x = sqrt(R+1) y by trigonometric interpolation. Throws
/// DomainTruncationError when the scaled window leaves the physical grid and
/// ZeroMeanViolationError when f, g or h fail the zero-mean check.
ScaledState to_scaled(const PhysicalState& state, const CoefficientModel& model,
                      const Grid& y_grid);

/// Builds the decomposition from given v and w at scaled time s.
ScaledState decompose(double s, const ScaledFactors& factors, Field v, Field w);

/// Exact inverse on shared sample points: the returned grid is the image sqrt(R+1) * y_grid.
PhysicalState from_scaled(const ScaledState& scaled, const CoefficientModel& model);

/// h and h_y from the analytic psi derivatives.
Field remainder_h(double m, double m_s, const ScaledFactors& factors, const Grid& y_grid);
Field remainder_h_y(double m, double m_s, const ScaledFactors& factors, const Grid& y_grid);
Field remainder_h(const ScaledState& scaled);

struct MassSample {
  double s;
  double m;
  double m_s;
  std::optional<double> m_ss;  // centered differences of m_s when absent
};

struct MassResidual {
  double s;
  double residual;
};

/// c1 (m_ss - m_s) + (1 + r'/a) m_s at interior samples (all samples when every m_ss is given).
/// Throws InsufficientDataError with fewer than 3 samples.
std::vector<MassResidual> mass_ode_residual(const std::vector<MassSample>& series,
                                            const CoefficientModel& model);

}  // namespace beamlab
