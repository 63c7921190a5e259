#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/energy.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/verification.hpp"

using namespace beamlab;
using doctest::Approx;
using std::numbers::pi;

namespace {

const CoefficientModel kUnit = CoefficientModel::power_law(0, 0);

// Scaled state at s = 0, alpha = beta = 0 with prescribed f (via v) and g (via w), m = m_s = 0.
ScaledState state_from(const Field& f, const Field& g) { return decompose(0.0, scaled_factors(kUnit, 0.0), f, g); }

// int y^{2j} e^{-y^2/2} ... closed forms through Gaussian moments of phi derivatives:
// phi_y = -(y/2) phi, phi^2 = (4 pi)^{-1} e^{-y^2/2}.
double gauss_moment(int power) {  // int y^power e^{-y^2/2} dy, power even
  double out = std::sqrt(2 * pi);
  for (int k = 1; k < power; k += 2) out *= k;
  return out;
}

}  // namespace

TEST_CASE("zero fields give zero energies") {
  const Grid y(20.0, 256);
  const ScaledState z = state_from(Field(y), Field(y));
  CHECK(eval_E0(z).E01 == 0.0);
  CHECK(eval_E0(z).E02 == 0.0);
  for (int n : {0, 1}) {
    CHECK(eval_E1(z, n).E11 == 0.0);
    CHECK(eval_E1(z, n).E12 == 0.0);
  }
  CHECK(eval_E2(z).E21 == 0.0);
  CHECK(eval_E2(z).E22 == 0.0);
  const RemainderNorms r = remainder_norms(z, NonlinearityModel{});
  for (double v : {r.H_L2, r.h_H01, r.hy_L2, r.nonlin_L2, r.nonlin_y_H01, r.nonlin_yy_L2}) CHECK(v == 0.0);
}

TEST_CASE("E01 with F = phi, G = 0 matches Gaussian moments") {
  const Grid y(20.0, 512);
  // F = phi requires f = phi_y (mean-zero) and g = 0.
  const ScaledState st = state_from(profile_phi_derivative(y, 1), Field(y));
  // phi_y^2 = y^2/4 phi^2, phi_yy^2 = (y^2-2)^2/16 phi^2, phi^2 = e^{-y^2/2} / (4 pi).
  const double c = 1.0 / (4 * pi);
  const double int_phiy2 = c * gauss_moment(2) / 4;
  const double int_phiyy2 = c * (gauss_moment(4) - 4 * gauss_moment(2) + 4 * gauss_moment(0)) / 16;
  CHECK(eval_E0(st).E01 == Approx(0.5 * int_phiy2 + 0.5 * int_phiyy2).epsilon(1e-12));
  CHECK(eval_E0(st).E02 == Approx(0.5 * weighted_norm(st.F, 0, 0) * weighted_norm(st.F, 0, 0)).epsilon(1e-13));
}

TEST_CASE("E1 examples") {
  const Grid y(20.0, 512);
  const Field f = profile_phi_derivative(y, 1);
  const ScaledState st = state_from(f, Field(y));
  CHECK(eval_E1(st, 0).E12 == Approx(0.5 * inner(f, f)).epsilon(1e-13));
  // n = 1, f = phi_y: E11_1 = 1/2 int y^2 phi_yy^2 + 1/2 int y^2 phi_yyy^2.
  // phi_yy = (y^2-2)/4 phi, phi_yyy = -(y^3 - 6y)/8 phi.
  const double c = 1.0 / (4 * pi);
  const double a = c * (gauss_moment(6) - 4 * gauss_moment(4) + 4 * gauss_moment(2)) / 16;
  const double b = c * (gauss_moment(8) - 12 * gauss_moment(6) + 36 * gauss_moment(4)) / 64;
  CHECK(eval_E1(st, 1).E11 == Approx(0.5 * a + 0.5 * b).epsilon(1e-12));
  CHECK_THROWS(eval_E1(st, 2));
}

TEST_CASE("E2 examples") {
  const Field f20 = Field::sample(Grid(20.0, 512), [](double q) { return q * std::exp(-0.4 * q * q); });
  const ScaledState st = state_from(f20, Field(f20.grid()));
  CHECK(eval_E2(st).E22 == Approx(0.5 * inner(deriv(f20, 1), deriv(f20, 1))).epsilon(1e-13));

  auto e21 = [](std::size_t n) {
    const Grid y(20.0, n);
    const Field f = Field::sample(y, [](double q) { return q * std::exp(-0.4 * q * q); });
    const Field g = Field::sample(y, [](double q) { return (q * q - 1.25) * std::exp(-0.4 * q * q); });
    return eval_E2(decompose(0.0, scaled_factors(kUnit, 0.0), f, g)).E21;
  };
  CHECK(std::abs(e21(512) - e21(1024)) < 1e-10);
}

TEST_CASE("Em examples") {
  const ScaledFactors k = scaled_factors(kUnit, 0.0);
  CHECK(eval_Em(2.5, 0.0, k).Em1 == 0.0);
  CHECK(eval_Em(2.5, 0.0, k).Em2 == Approx(3.125));
  CHECK(eval_Em(0.0, 2.0, 0.0, kUnit).Em1 == Approx(2.0));
  CHECK(eval_Em(1.0, -1.0, 0.0, kUnit).Em2 == Approx(-0.5));
}

TEST_CASE("composite examples") {
  CHECK(eval_composites({}, {}, EnergyWeights{}).calE_tilde == 0.0);
  EnergyParts ones{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  EnergyWeights unit{1, 1, 1, 1, 1, 1, 1};
  const CompositeValues c = eval_composites(ones, {}, unit);
  CHECK(c.bbE0 == 2.0);
  CHECK(c.calE == 9.0);
  CHECK(c.calE_tilde == 10.0);
  CHECK(c.calG == 0.0);
  EnergyWeights bad;
  bad.c2 = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidConfigError);
}

TEST_CASE("report composites are consistent with parts") {
  const Grid y(20.0, 512);
  const Field v = Field::sample(y, [](double q) { return std::exp(-0.3 * q * q) * (1 + 0.2 * q); });
  const Field w = Field::sample(y, [](double q) { return 0.1 * std::exp(-0.25 * (q - 1) * (q - 1)); });
  const ScaledState st = decompose(1.0, scaled_factors(CoefficientModel::power_law(0.5, 0), 1.0), v, w);
  const EnergyWeights weights;
  const EnergyReport rep = evaluate_report(st, NonlinearityModel{}, weights);
  const CompositeValues again = eval_composites(rep.parts, rep.dissipation, weights);
  CHECK(again.calE == rep.composites.calE);
  CHECK(again.calG == rep.composites.calG);
  CHECK(again.calE_tilde == rep.composites.calE_tilde);
  const auto& p = rep.parts;
  const double expected = weights.ctilde0 * (p.E01 + weights.c0 * p.E02) +
                          weights.ctilde1_0 * (p.E11_0 + weights.c1_0 * p.E12_0) +
                          weights.ctilde1_1 * (p.E11_1 + weights.c1_1 * p.E12_1) + (p.E21 + weights.c2 * p.E22) +
                          p.Em1;
  CHECK(std::abs(rep.composites.calE - expected) <= 1e-13 * std::abs(expected));
  CHECK(p.E01 >= 0);
  CHECK(p.E11_0 >= 0);
  CHECK(p.E11_1 >= 0);
  CHECK(p.E21 >= 0);
  CHECK(p.Em1 >= 0);
}

TEST_CASE("Hardy consistency of H") {
  const Grid y(20.0, 512);
  const ScaledFactors k = scaled_factors(CoefficientModel::power_law(1, 0), 2.0);
  const ScaledState st = decompose(2.0, k, profile_phi(y), Field::sample(y, [](double q) {
                                     return 0.3 * std::exp(-0.5 * q * q);
                                   }));
  Field yh = st.h;
  for (std::size_t j = 0; j < y.size(); ++j) yh[j] *= y.point(j);
  CHECK(inner(st.H_anti, st.H_anti) <= 4 * inner(yh, yh));
}

TEST_CASE("specialized residuals vanish on the zero solution") {
  const Grid y(20.0, 128);
  std::vector<double> s;
  std::vector<IdentityTerms> terms;
  for (int i = 0; i < 5; ++i) {
    s.push_back(0.1 * i);
    const ScaledState z = decompose(s.back(), scaled_factors(kUnit, s.back()), Field(y), Field(y));
    terms.push_back(identity_terms(z, NonlinearityModel{}));
  }
  const auto res = specialized_identity_residuals(s, terms);
  CHECK(res.size() == 10);
  for (const auto& [name, series] : res)
    for (const auto& p : series) CHECK(p.residual == 0.0);
  s[2] += 0.01;
  CHECK_THROWS_AS(specialized_identity_residuals(s, terms), InsufficientDataError);
}

TEST_CASE("general identity: zero system") {
  const Grid y(20.0, 128);
  GeneralIdentitySystem sys;
  const CoefficientFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }};
  sys.c1 = sys.c2 = sys.c3 = sys.c4 = one;
  sys.f = sys.g = sys.h = [y](double) { return Field(y); };
  for (const auto& r : general_identity_residual(sys, {0.5, 1.0}, 1e-3)) {
    CHECK(r.dE1 == 0.0);
    CHECK(r.dE2 == 0.0);
  }
}

TEST_CASE("general identity: f = e^{-s} phi with unit coefficients") {
  const Grid y(20.0, 512);
  const CoefficientFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }};
  for (int n : {0, 1}) {
    std::vector<ManufacturedMode> modes;
    modes.push_back({[](double s) { return std::exp(-s); }, [](double s) { return -std::exp(-s); },
                     [](double s) { return std::exp(-s); }, profile_phi(y)});
    const auto sys = manufactured_system(0.5, 0.5, 1.5, n, one, one, one, one, modes);
    const std::vector<double> s = {0.5, 1.0, 1.5};
    const auto coarse = general_identity_residual(sys, s, 1e-3);
    const auto fine = general_identity_residual(sys, s, 5e-4);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(coarse[i].dE1 <= 1e-6);
      CHECK(coarse[i].dE2 <= 1e-6);
      CHECK(coarse[i].dE1 / fine[i].dE1 >= 3.7);
      CHECK(coarse[i].dE2 / fine[i].dE2 >= 3.7);
    }
  }
}

TEST_CASE("general identity: three manufactured systems converge at second order") {
  const auto checks = check_general_identities();
  CHECK(checks.size() == 12);
  for (const auto& c : checks) {
    if (c.name.find("_refinement") == std::string::npos) continue;
    INFO(c.name << " " << c.detail << " value " << c.value);
    CHECK(c.passed);
    CHECK(c.value == Approx(4.0).epsilon(0.01));
  }
}
