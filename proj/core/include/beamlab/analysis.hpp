#pragma once

// Asymptotic mass m*, Gaussian-profile error, decay-rate fitting and the
// Hardy-type inequality check int F^2 <= 4 int y^2 f^2.

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "beamlab/coefficients.hpp"
#include "beamlab/solver.hpp"
#include "beamlab/spectral_grid.hpp"

namespace beamlab {

struct SeriesPoint {
  double s;
  double value;
};

struct MStarEstimate {
  double m_star;
  double tail_spread;
  std::size_t samples;
};

/// Mean and spread of m over the final quarter of the series (or over `window` when given).
/// Throws InsufficientDataError with fewer than 8 samples.
MStarEstimate estimate_m_star(const std::vector<SeriesPoint>& m_series,
                              std::optional<std::pair<double, double>> window = std::nullopt);

struct ProfileError {
  double err_shift;             // || u - m* G(R+1, .) ||
  std::optional<double> err_raw;  // || u - m* G(R, .) ||, absent at R = 0
};

/// L2 errors on the physical grid. Throws UndefinedProfileError when err_raw is
/// requested at R(t) = 0.
ProfileError profile_error(const PhysicalState& state, double m_star,
                           const CoefficientModel& model, bool require_raw = false);

/// (R+1)^{-1/4} || v - m* phi ||_{L2(dy)} = e^{-s/4} || v - m* phi ||.
double scaled_profile_error(double s, const Field& v, double m_star);

/// || G(t1, .) - G(t2, .) ||_{L2} in closed form.
double gaussian_difference_norm(double t1, double t2);

struct RateFit {
  double s_lo;
  double s_hi;
  double slope;
  double intercept;
  double r_squared;
  std::size_t sample_count;
};

/// Least squares of log(err) against s over the window. Throws LogDomainError when
/// an error value in the window is nonpositive, InsufficientDataError below 4 samples.
RateFit fit_decay_rate(const std::vector<SeriesPoint>& err_series, std::pair<double, double> window);

struct HardyResult {
  double lhs;    // int F^2
  double rhs;    // 4 int y^2 f^2
  double ratio;  // lhs / rhs, 0 for f == 0
};

HardyResult hardy_check(const Field& f);

/// Random mean-zero band-limited field: either a periodic trigonometric sum over
/// modes 1..n/8 or the derivative of a Gaussian-windowed sum (a decaying field).
Field random_mean_zero_field(const Grid& grid, std::mt19937_64& rng);

}  // namespace beamlab
