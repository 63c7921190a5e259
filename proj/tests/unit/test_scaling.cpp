#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/scaling.hpp"

using namespace beamlab;
using doctest::Approx;
using std::numbers::pi;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - b[j]));
  return out;
}

// u = m G(t+1, x), u_t = m d/dt G(t+1, x) for a = b = 1.
PhysicalState heat_state(double t, double m, const Grid& x_grid) {
  return {t, Field::sample(x_grid, [&](double x) { return m * heat_kernel(t + 1, x); }),
          Field::sample(x_grid, [&](double x) {
            const double tau = t + 1;
            return m * heat_kernel(tau, x) * (x * x / (4 * tau * tau) - 0.5 / tau);
          })};
}

}  // namespace

TEST_CASE("profile examples") {
  CHECK(phi_value(0.0) == Approx(1.0 / std::sqrt(4 * pi)));
  CHECK(psi_derivative(0.0, 0) == Approx(-0.5 / std::sqrt(4 * pi)));
  const Grid g(20.0, 512);
  CHECK(integrate(profile_phi(g)) == Approx(1.0).epsilon(1e-13));
  for (double y : {-3.1, 0.4, 2.2}) CHECK(psi_derivative(y, 0) == Approx(phi_value(y) * (y * y - 2) / 4));
}

TEST_CASE("profile derivatives agree with spectral derivatives") {
  const Grid g(20.0, 512);
  const auto d = derivatives(profile_phi(g), 4);
  for (int k = 1; k <= 4; ++k) CHECK(max_abs_diff(d[k], profile_phi_derivative(g, k)) < 1e-9);
}

TEST_CASE("to_scaled on the Gaussian fixed point") {
  const auto model = CoefficientModel::power_law(0, 0);
  const Grid y(20.0, 512);
  for (double t : {0.0, 1.0, 9.0}) {
    const Grid x(20.0 * std::sqrt(t + 1) * 1.25, 1024);
    const ScaledState st = to_scaled(heat_state(t, 1.0, x), model, y);
    CHECK(st.s == Approx(std::log1p(t)));
    CHECK(st.m == Approx(1.0).epsilon(1e-12));
    CHECK(st.f.sup_norm() < 1e-10);
    CHECK(max_abs_diff(st.v, profile_phi(y)) < 1e-10);
  }
}

TEST_CASE("to_scaled: zero state and t = 0") {
  const auto model = CoefficientModel::power_law(0, 0);
  const Grid y(20.0, 256);
  const ScaledState zero = to_scaled({0.0, Field(y), Field(y)}, model, y);
  CHECK(zero.m == 0.0);
  CHECK(zero.m_s == 0.0);
  CHECK(zero.f.sup_norm() == 0.0);
  CHECK(zero.g.sup_norm() == 0.0);

  const auto model2 = CoefficientModel::power_law(0, -0.5);  // r(0) = 1
  const PhysicalState s0{0.0, Field::sample(y, [](double x) { return std::exp(-x * x); }),
                         Field::sample(y, [](double x) { return x * std::exp(-x * x); })};
  const ScaledState st = to_scaled(s0, model2, y);
  CHECK(st.s == 0.0);
  CHECK(max_abs_diff(st.v, s0.u) < 1e-13);
  CHECK(max_abs_diff(st.w, s0.ut) < 1e-13);
}

TEST_CASE("reconstruction and zero-mean invariants") {
  const auto model = CoefficientModel::power_law(1, 0);
  const Grid y(20.0, 512);
  const Grid x(120.0, 4096);
  const PhysicalState st{3.0, Field::sample(x, [](double x) { return std::exp(-0.02 * x * x) * (1 + 0.2 * std::sin(0.1 * x)); }),
                         Field::sample(x, [](double x) { return 0.1 * std::exp(-0.03 * (x - 2) * (x - 2)); })};
  const ScaledState sc = to_scaled(st, model, y);
  const Field phi = profile_phi(y), psi = profile_psi(y);
  double rec_v = 0, rec_w = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    rec_v = std::max(rec_v, std::abs(sc.v[j] - (sc.m * phi[j] + sc.f[j])));
    rec_w = std::max(rec_w, std::abs(sc.w[j] - (sc.m_s * phi[j] + sc.m * psi[j] + sc.g[j])));
  }
  CHECK(rec_v < 1e-12 * std::max(1.0, sc.v.sup_norm()));
  CHECK(rec_w < 1e-12 * std::max(1.0, sc.w.sup_norm()));
  CHECK(std::abs(moment(sc.f, 0)) <= 1e-9 * sc.f.sup_norm());
  CHECK(std::abs(moment(sc.g, 0)) <= 1e-9 * sc.g.sup_norm());
  CHECK(std::abs(moment(sc.h, 0)) <= 1e-9 * sc.h.sup_norm());
}

TEST_CASE("window outside the physical grid is reported") {
  const auto model = CoefficientModel::power_law(0, 0);
  const Grid y(20.0, 256);
  const Grid x(30.0, 512);
  CHECK_THROWS_AS(to_scaled({8.0, Field(x), Field(x)}, model, y), DomainTruncationError);
}

TEST_CASE("from_scaled examples") {
  const auto model = CoefficientModel::power_law(0, 0);
  const Grid y(20.0, 512);
  const ScaledFactors k = scaled_factors(model, std::log(2.0));
  const ScaledState sc = decompose(std::log(2.0), k, profile_phi(y), profile_psi(y));
  const PhysicalState back = from_scaled(sc, model);
  CHECK(back.t == Approx(1.0));
  for (std::size_t j = 0; j < y.size(); j += 37)
    CHECK(back.u[j] == Approx(heat_kernel(2.0, back.u.grid().point(j))).epsilon(1e-12).scale(1e-3));

  const ScaledState s0 = decompose(0.0, scaled_factors(model, 0.0), profile_phi(y), profile_psi(y));
  const PhysicalState p0 = from_scaled(s0, model);
  CHECK(p0.t == 0.0);
  CHECK(max_abs_diff(p0.u, profile_phi(y)) < 1e-15);
  CHECK(max_abs_diff(p0.ut, profile_psi(y)) < 1e-15);
}

TEST_CASE("round trip to_scaled after from_scaled") {
  const auto model = CoefficientModel::power_law(0.5, 0.2);
  const Grid y(20.0, 256);
  const double s = 1.1;
  const Field v = Field::sample(y, [](double q) { return std::exp(-0.3 * q * q) * (1 + 0.3 * q); });
  const Field w = Field::sample(y, [](double q) { return 0.2 * std::exp(-0.5 * q * q); });
  const ScaledState sc = decompose(s, scaled_factors(model, s), v, w);
  const ScaledState again = to_scaled(from_scaled(sc, model), model, y);
  CHECK(max_abs_diff(again.v, v) < 1e-10);
  CHECK(max_abs_diff(again.w, w) < 1e-10);
}

TEST_CASE("remainder_h examples") {
  const auto model = CoefficientModel::power_law(0, 0);
  const Grid y(20.0, 512);
  const ScaledFactors k0 = scaled_factors(model, 0.0);
  CHECK(remainder_h(0.0, 0.0, k0, y).sup_norm() == 0.0);

  const Field h = remainder_h(1.0, 0.0, k0, y);
  double err = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double q = y.point(j);
    const double expected = 0.5 * q * psi_derivative(q, 1) + 1.5 * psi_derivative(q, 0) - psi_derivative(q, 2);
    err = std::max(err, std::abs(h[j] - expected));
  }
  CHECK(err < 1e-14);

  const ScaledFactors k = scaled_factors(CoefficientModel::power_law(1, 0.3), 1.7);
  for (auto [m, ms] : std::vector<std::pair<double, double>>{{1, 0}, {0.3, -2}, {-1, 5}})
    CHECK(std::abs(integrate(remainder_h(m, ms, k, y))) < 1e-10);
}

TEST_CASE("remainder_h_y is the derivative of remainder_h") {
  const Grid y(20.0, 512);
  const ScaledFactors k = scaled_factors(CoefficientModel::power_law(0.4, -0.2), 0.9);
  CHECK(max_abs_diff(deriv(remainder_h(0.7, -0.4, k, y), 1), remainder_h_y(0.7, -0.4, k, y)) < 1e-11);
}

TEST_CASE("mass_ode_residual examples") {
  const auto model = CoefficientModel::power_law(0, 0);
  std::vector<MassSample> constant;
  for (int i = 0; i < 5; ++i) constant.push_back({0.1 * i, 3.0, 0.0, 0.0});
  for (const auto& r : mass_ode_residual(constant, model)) CHECK(r.residual == 0.0);

  // m = e^{-s}: c1 = e^{-s}, c2 = 0, residual = e^{-s}(e^{-s} + e^{-s}) - e^{-s} = 2 e^{-2s} - e^{-s}.
  std::vector<MassSample> exp_series;
  for (int i = 0; i < 6; ++i) {
    const double s = 0.25 * i;
    exp_series.push_back({s, std::exp(-s), -std::exp(-s), std::exp(-s)});
  }
  for (const auto& r : mass_ode_residual(exp_series, model))
    CHECK(r.residual == Approx(2 * std::exp(-2 * r.s) - std::exp(-r.s)).epsilon(1e-12));

  CHECK_THROWS_AS(mass_ode_residual({{0, 1, 0, std::nullopt}, {0.1, 1, 0, std::nullopt}}, model),
                  InsufficientDataError);
}
