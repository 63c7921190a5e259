#include "beamlab/coefficients.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

constexpr double kRegionTolerance = 1e-12;

double exponent_gap(const CoefficientModel& model) { return model.alpha() - model.beta() + 1.0; }

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw InvalidCoefficientError(fmt::format("coefficients evaluated at invalid time {}", t));
}

double user_R(const CoefficientModel& model, double t) {
  if (t == 0.0) return 0.0;
  auto r = [&](double tau) { return r_eval(model, tau).r; };
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      r, 0.0, t, 20, 1e-12, &error);
  if (!std::isfinite(value) || error > 1e-10 * std::max(1.0, std::abs(value)))
    throw NumericalIntegrationError(
        fmt::format("R({}) quadrature did not converge (estimate {}, error {})", t, value, error));
  return value;
}

double user_R_inverse(const CoefficientModel& model, double rho) {
  const double tol = 1e-10 * (1.0 + rho);
  double lo = 0.0;
  double hi = 1.0;
  double R_hi = big_R(model, hi);
  int doublings = 0;
  while (R_hi < rho) {
    lo = hi;
    hi *= 2.0;
    const double next = big_R(model, hi);
    if (!(next > R_hi))
      throw InvalidCoefficientError(
          fmt::format("R is not increasing on [{}, {}]; cannot invert", lo, hi));
    R_hi = next;
    if (++doublings > 200)
      throw InvalidCoefficientError(fmt::format("R does not reach {} (bounded R)", rho));
  }
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = big_R(model, t) - rho;
    if (std::abs(residual) <= tol) return t;
    if (residual > 0.0)
      hi = t;
    else
      lo = t;
    const double slope = r_eval(model, t).r;
    if (!(slope > 0.0))
      throw InvalidCoefficientError(fmt::format("r({}) = {} makes R non-monotone", t, slope));
    double candidate = t - residual / slope;
    if (!(candidate > lo && candidate < hi)) candidate = 0.5 * (lo + hi);
    t = candidate;
  }
  throw NumericalIntegrationError(fmt::format("R^-1({}) did not converge", rho));
}

}  // namespace

CoefficientModel CoefficientModel::power_law(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta))
    throw InvalidCoefficientError("power-law exponents must be finite");
  return CoefficientModel(alpha, beta, CoefficientFamily::ExactPowerLaw, std::nullopt);
}

CoefficientModel CoefficientModel::user_supplied(double alpha, double beta,
                                                 UserCoefficients functions) {
  if (!functions.a || !functions.b || !functions.a_prime || !functions.b_prime)
    throw InvalidCoefficientError("user-supplied coefficients need a, b, a' and b'");
  return CoefficientModel(alpha, beta, CoefficientFamily::UserSupplied, std::move(functions));
}

CoefficientValues eval_coeffs(const CoefficientModel& model, double t) {
  require_time(t);
  if (model.family() == CoefficientFamily::ExactPowerLaw) {
    const double base = 1.0 + t;
    const double al = model.alpha();
    const double be = model.beta();
    return {std::pow(base, al), std::pow(base, be), al * std::pow(base, al - 1.0),
            be * std::pow(base, be - 1.0)};
  }
  const UserCoefficients& u = *model.user();
  CoefficientValues v{u.a(t), u.b(t), u.a_prime(t), u.b_prime(t)};
  if (!(v.a > 0.0) || !(v.b > 0.0))
    throw InvalidCoefficientError(
        fmt::format("user coefficients must be positive: a({0}) = {1}, b({0}) = {2}", t, v.a, v.b));
  if (!std::isfinite(v.a) || !std::isfinite(v.b) || !std::isfinite(v.a_prime) ||
      !std::isfinite(v.b_prime))
    throw InvalidCoefficientError(fmt::format("non-finite user coefficient at t = {}", t));
  return v;
}

RatioValues r_eval(const CoefficientModel& model, double t) {
  const CoefficientValues c = eval_coeffs(model, t);
  if (!(c.b > 0.0))
    throw InvalidCoefficientError(fmt::format("b({}) = {} is not positive", t, c.b));
  return {c.a / c.b, (c.a_prime * c.b - c.a * c.b_prime) / (c.b * c.b)};
}

double big_R(const CoefficientModel& model, double t) {
  require_time(t);
  if (model.family() == CoefficientFamily::UserSupplied) return user_R(model, t);
  if (model.alpha() == model.beta()) return t;
  const double gap = exponent_gap(model);
  if (gap == 0.0) return std::log1p(t);
  return std::expm1(gap * std::log1p(t)) / gap;
}

double big_R_inverse(const CoefficientModel& model, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw InvalidCoefficientError(fmt::format("R^-1 needs a finite rho >= 0, got {}", rho));
  if (rho == 0.0) return 0.0;
  if (model.family() == CoefficientFamily::UserSupplied) return user_R_inverse(model, rho);
  if (model.alpha() == model.beta()) return rho;
  const double gap = exponent_gap(model);
  if (gap == 0.0) return std::expm1(rho);
  const double inner = gap * rho;
  if (!(inner > -1.0))
    throw InvalidCoefficientError(fmt::format(
        "R is bounded by {} for alpha - beta + 1 = {}; cannot invert at {}", -1.0 / gap, gap, rho));
  return std::expm1(std::log1p(inner) / gap);
}

std::string_view to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::Omega1: return "Omega1";
    case RegionLabel::Omega2: return "Omega2";
    case RegionLabel::Omega3: return "Omega3";
    case RegionLabel::Omega4: return "Omega4";
    case RegionLabel::Omega5: return "Omega5";
    case RegionLabel::Boundary: return "Boundary";
  }
  return "Boundary";
}

RegionLabel classify_region(double alpha, double beta) {
  // Strict inequalities with a margin; a point inside no open region is on a boundary.
  auto lt = [](double lhs, double rhs) { return lhs < rhs - kRegionTolerance; };
  if (lt(-1.0, beta) && lt(beta, std::min(alpha + 1.0, 2.0 * alpha + 1.0)))
    return RegionLabel::Omega1;
  if (lt(std::max(-1.0, 2.0 * alpha + 1.0), beta) && lt(beta, 1.0)) return RegionLabel::Omega2;
  if (lt(beta, -1.0) && lt(-1.0, alpha)) return RegionLabel::Omega3;
  if (lt(beta, -1.0) && lt(alpha, -1.0)) return RegionLabel::Omega4;
  if (lt(std::max(1.0, alpha + 1.0), beta)) return RegionLabel::Omega5;
  return RegionLabel::Boundary;
}

ExponentConstants exponent_constants(double alpha, double beta) {
  const double gap = alpha - beta + 1.0;
  if (!(gap > 0.0))
    throw OutOfRegionError(
        fmt::format("alpha - beta + 1 = {} <= 0: exponent constants undefined", gap));
  const double damping_rate = (beta + 1.0) / gap;
  const double bending_rate = (2.0 * alpha - beta + 1.0) / gap;
  return {std::min(damping_rate, bending_rate),
          std::min({0.5, 2.0 * damping_rate, bending_rate}),
          (1.0 - beta) / gap,
          classify_region(alpha, beta) == RegionLabel::Omega1};
}

ScaledFactors scaled_factors_at_time(const CoefficientModel& model, double t) {
  const CoefficientValues c = eval_coeffs(model, t);
  const RatioValues rv = r_eval(model, t);
  const double R = big_R(model, t);
  ScaledFactors f{};
  f.t = t;
  f.s = std::log1p(R);
  f.exp_minus_s = 1.0 / (1.0 + R);
  f.a = c.a;
  f.a_prime = c.a_prime;
  f.r = rv.r;
  f.r_prime = rv.r_prime;
  f.c1 = rv.r * rv.r * f.exp_minus_s / c.a;
  f.c2 = rv.r_prime / c.a;
  f.c4 = f.exp_minus_s / c.a;
  f.ra_prime_over_a2 = rv.r * c.a_prime / (c.a * c.a);
  f.a_prime_over_ra2 = c.a_prime / (rv.r * c.a * c.a);
  f.growth = (1.0 + R) / c.a;
  f.c1_prime = 2.0 * f.c2 - f.c1 - f.ra_prime_over_a2;
  f.c4_prime = -f.c4 - f.a_prime_over_ra2;
  return f;
}

ScaledFactors scaled_factors(const CoefficientModel& model, double s) {
  if (!(s >= 0.0))
    throw InvalidCoefficientError(fmt::format("scaled time must be >= 0, got {}", s));
  ScaledFactors f = scaled_factors_at_time(model, big_R_inverse(model, std::expm1(s)));
  f.s = s;
  return f;
}

EnvelopeReport verify_envelope(const CoefficientModel& model, double t_max, int samples) {
  EnvelopeReport report{1.0, true};
  const double gap = exponent_gap(model);
  for (int i = 0; i <= samples; ++i) {
    const double t = std::expm1(std::log1p(t_max) * i / samples);
    CoefficientValues c{};
    try {
      c = eval_coeffs(model, t);
    } catch (const InvalidCoefficientError&) {
      report.positive = false;
      report.observed_constant = std::numeric_limits<double>::infinity();
      return report;
    }
    const double base = 1.0 + t;
    auto widen = [&](double q, double exponent) {
      const double ratio = q / std::pow(base, exponent);
      report.observed_constant = std::max({report.observed_constant, ratio, 1.0 / ratio});
    };
    widen(c.a, model.alpha());
    widen(c.b, model.beta());
    if (gap > 0.0 && t > 0.0) {
      // R is only comparable to (1+t)^gap away from t = 0.
      if (t >= 1.0) widen(big_R(model, t), gap);
    }
  }
  return report;
}

}  // namespace beamlab
