#pragma once

// Time-dependent coefficients a(t) (tension) and b(t) (damping), the ratio
// r = a/b, its primitive R, and the (alpha, beta) region atlas.

#include <functional>
#include <optional>
#include <string_view>

namespace beamlab {

enum class CoefficientFamily { ExactPowerLaw, UserSupplied };

struct UserCoefficients {
  std::function<double(double)> a;
  std::function<double(double)> b;
  std::function<double(double)> a_prime;
  std::function<double(double)> b_prime;
};

/// Immutable descriptor of the pair (a, b). For ExactPowerLaw a = (1+t)^alpha and
/// b = (1+t)^beta; for UserSupplied (alpha, beta) are the declared envelope exponents.
class CoefficientModel {
 public:
  static CoefficientModel power_law(double alpha, double beta);
  static CoefficientModel user_supplied(double alpha, double beta, UserCoefficients functions);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  CoefficientFamily family() const noexcept { return family_; }
  const UserCoefficients* user() const noexcept { return user_ ? &*user_ : nullptr; }

 private:
  CoefficientModel(double alpha, double beta, CoefficientFamily family,
                   std::optional<UserCoefficients> user)
      : alpha_(alpha), beta_(beta), family_(family), user_(std::move(user)) {}

  double alpha_;
  double beta_;
  CoefficientFamily family_;
  std::optional<UserCoefficients> user_;
};

struct CoefficientValues {
  double a;
  double b;
  double a_prime;
  double b_prime;
};

struct RatioValues {
  double r;
  double r_prime;
};

CoefficientValues eval_coeffs(const CoefficientModel& model, double t);
RatioValues r_eval(const CoefficientModel& model, double t);

/// R(t) = int_0^t r.
double big_R(const CoefficientModel& model, double t);
/// Solves R(t) = rho for t >= 0.
double big_R_inverse(const CoefficientModel& model, double rho);

enum class RegionLabel { Omega1, Omega2, Omega3, Omega4, Omega5, Boundary };

std::string_view to_string(RegionLabel label) noexcept;
RegionLabel classify_region(double alpha, double beta);

struct ExponentConstants {
  double delta;
  double lambda_max;
  double supercriticality_exponent;
  bool in_region;  // false outside Omega1
};

/// Throws OutOfRegionError when alpha - beta + 1 <= 0.
ExponentConstants exponent_constants(double alpha, double beta);

/// Coefficient factors of the scaled system, all evaluated at t = t(s).
struct ScaledFactors {
  double t;
  double s;
  double exp_minus_s;  // 1 / (R(t) + 1)
  double a;
  double a_prime;
  double r;
  double r_prime;
  double c1;                  // r^2 e^{-s} / a
  double c2;                  // r' / a
  double c4;                  // e^{-s} / a
  double ra_prime_over_a2;    // r a' / a^2
  double a_prime_over_ra2;    // a' / (r a^2)
  double growth;              // e^{s} / a
  double c1_prime;            // d c1 / ds
  double c4_prime;            // d c4 / ds
};

ScaledFactors scaled_factors_at_time(const CoefficientModel& model, double t);
ScaledFactors scaled_factors(const CoefficientModel& model, double s);

/// Sampled check of the envelopes C^{-1}(1+t)^e <= q(t) <= C(1+t)^e for a, b and R.
struct EnvelopeReport {
  double observed_constant;  // smallest C consistent with all samples
  bool positive;             // a, b > 0 at every sample
};

EnvelopeReport verify_envelope(const CoefficientModel& model, double t_max, int samples = 200);

}  // namespace beamlab
