#include "beamlab/scaling.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

const double kPhiNorm = 1.0 / std::sqrt(4.0 * std::numbers::pi);

Field sampled_terms_sup(const Grid& y_grid, double& sup_sum,
                        std::initializer_list<std::pair<double, int>> weighted_psi_orders,
                        double y_psi_y_weight) {
  Field out(y_grid);
  sup_sum = 0.0;
  for (const auto& [weight, order] : weighted_psi_orders) {
    if (weight == 0.0) continue;
    Field term = Field::sample(y_grid, [&](double y) { return weight * psi_derivative(y, order); });
    sup_sum += term.sup_norm();
    out += term;
  }
  if (y_psi_y_weight != 0.0) {
    Field term =
        Field::sample(y_grid, [&](double y) { return y_psi_y_weight * y * psi_derivative(y, 1); });
    sup_sum += term.sup_norm();
    out += term;
  }
  return out;
}

Field assemble_h(double m, double m_s, const ScaledFactors& k, const Grid& y_grid,
                 double& sup_sum) {
  // h = -c1 (2 m_s psi - y/2 m psi_y - 3/2 m psi) - c2 m psi - c4 m psi_yy
  return sampled_terms_sup(
      y_grid, sup_sum,
      {{-k.c1 * 2.0 * m_s + k.c1 * 1.5 * m - k.c2 * m, 0}, {-k.c4 * m, 2}},
      0.5 * k.c1 * m);
}

}  // namespace

double phi_derivative(double y, int k) {
  if (k < 0 || k > 6)
    throw UndefinedProfileError(fmt::format("profile derivative order {} outside 0..6", k));
  const double phi = kPhiNorm * std::exp(-0.25 * y * y);
  return std::pow(-0.5, k) * std::hermite(static_cast<unsigned>(k), 0.5 * y) * phi;
}

Field profile_phi(const Grid& y_grid) { return profile_phi_derivative(y_grid, 0); }
Field profile_psi(const Grid& y_grid) { return profile_phi_derivative(y_grid, 2); }

Field profile_phi_derivative(const Grid& y_grid, int k) {
  return Field::sample(y_grid, [k](double y) { return phi_derivative(y, k); });
}

double heat_kernel(double t, double x) {
  if (!(t > 0.0))
    throw UndefinedProfileError(fmt::format("heat kernel undefined at t = {}", t));
  return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

Field remainder_h(double m, double m_s, const ScaledFactors& factors, const Grid& y_grid) {
  double sup_sum = 0.0;
  return assemble_h(m, m_s, factors, y_grid, sup_sum);
}

Field remainder_h_y(double m, double m_s, const ScaledFactors& k, const Grid& y_grid) {
  // d/dy of h: -c1 (2 m_s psi_y - m/2 psi_y - y/2 m psi_yy - 3/2 m psi_y) - c2 m psi_y - c4 m psi_yyy
  return Field::sample(y_grid, [&](double y) {
    const double p1 = psi_derivative(y, 1);
    const double p2 = psi_derivative(y, 2);
    const double p3 = psi_derivative(y, 3);
    return -k.c1 * (2.0 * m_s * p1 - 0.5 * m * p1 - 0.5 * y * m * p2 - 1.5 * m * p1) -
           k.c2 * m * p1 - k.c4 * m * p3;
  });
}

Field remainder_h(const ScaledState& scaled) {
  return remainder_h(scaled.m, scaled.m_s, scaled.factors, scaled.y_grid);
}

ScaledState decompose(double s, const ScaledFactors& factors, Field v, Field w) {
  const Grid y_grid = v.grid();
  const Field phi = profile_phi(y_grid);
  const Field psi = profile_psi(y_grid);
  const double m = integrate(v);
  const double m_s = integrate(w);
  Field f = axpy(v, -m, phi);
  Field g = axpy(axpy(w, -m_s, phi), -m, psi);
  double h_scale = 0.0;
  Field h = assemble_h(m, m_s, factors, y_grid, h_scale);

  Field F = antideriv_zero_mean(f, v.sup_norm());
  Field G = antideriv_zero_mean(g, w.sup_norm() + std::abs(m) * psi.sup_norm());
  Field H = antideriv_zero_mean(h, h_scale);
  return ScaledState{s,          factors, y_grid,        std::move(v), std::move(w),
                     m,          m_s,     std::move(f),  std::move(g), std::move(h),
                     std::move(F), std::move(G), std::move(H)};
}

ScaledState to_scaled(const PhysicalState& state, const CoefficientModel& model,
                      const Grid& y_grid) {
  const ScaledFactors factors = scaled_factors_at_time(model, state.t);
  const double scale = std::sqrt(1.0 / factors.exp_minus_s);
  const Grid& xg = state.u.grid();
  const double x0 = -scale * y_grid.half_width();
  const double dx = scale * y_grid.spacing();
  const double x_last = x0 + dx * static_cast<double>(y_grid.size() - 1);
  const double slack = 1e-12 * xg.half_width();
  if (x0 < -xg.half_width() - slack || x_last >= xg.half_width() + slack)
    throw DomainTruncationError(fmt::format(
        "scaled window [{}, {}] at t = {} leaves the physical grid [-{}, {})", x0, x_last,
        state.t, xg.half_width(), xg.half_width()));

  std::vector<double> u = interpolate_uniform(xg, xg.forward(state.u.values()), x0, dx, y_grid.size());
  std::vector<double> ut = interpolate_uniform(xg, xg.forward(state.ut.values()), x0, dx, y_grid.size());
  const double w_factor = scale * scale * scale / factors.r;
  for (double& x : u) x *= scale;
  for (double& x : ut) x *= w_factor;
  return decompose(factors.s, factors, Field(y_grid, std::move(u)), Field(y_grid, std::move(ut)));
}

PhysicalState from_scaled(const ScaledState& scaled, const CoefficientModel& model) {
  if (!(scaled.s >= 0.0))
    throw InvalidCoefficientError(fmt::format("scaled time must be >= 0, got {}", scaled.s));
  const double t = big_R_inverse(model, std::expm1(scaled.s));
  const double scale = std::exp(0.5 * scaled.s);
  const double r = r_eval(model, t).r;
  const Grid xg(scale * scaled.y_grid.half_width(), scaled.y_grid.size());
  Field u = scaled.v;
  Field ut = scaled.w;
  u *= 1.0 / scale;
  ut *= r / (scale * scale * scale);
  return PhysicalState{t, Field(xg, std::vector<double>(u.values().begin(), u.values().end())),
                       Field(xg, std::vector<double>(ut.values().begin(), ut.values().end()))};
}

std::vector<MassResidual> mass_ode_residual(const std::vector<MassSample>& series,
                                            const CoefficientModel& model) {
  if (series.size() < 3)
    throw InsufficientDataError(
        fmt::format("mass ODE residual needs at least 3 samples, got {}", series.size()));
  bool all_given = true;
  for (const auto& sample : series) all_given = all_given && sample.m_ss.has_value();

  std::vector<MassResidual> out;
  const std::size_t lo = all_given ? 0 : 1;
  const std::size_t hi = all_given ? series.size() : series.size() - 1;
  for (std::size_t i = lo; i < hi; ++i) {
    const MassSample& cur = series[i];
    double m_ss = 0.0;
    if (cur.m_ss) {
      m_ss = *cur.m_ss;
    } else {
      const double ds = series[i + 1].s - series[i - 1].s;
      if (!(ds > 0.0)) throw InsufficientDataError("mass samples must increase in s");
      m_ss = (series[i + 1].m_s - series[i - 1].m_s) / ds;
    }
    const ScaledFactors k = scaled_factors(model, cur.s);
    out.push_back({cur.s, k.c1 * (m_ss - cur.m_s) + (1.0 + k.c2) * cur.m_s});
  }
  return out;
}

}  // namespace beamlab
