#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/nonlinearity.hpp"

using namespace beamlab;
using doctest::Approx;
using std::numbers::pi;

namespace {

NonlinearityModel model(double mu, TildeForm form, double p = 3.0) {
  NonlinearityModel m;
  m.mu = mu;
  m.tilde_form = form;
  m.p = p;
  return m;
}

}  // namespace

TEST_CASE("n_eval examples") {
  CHECK(n_eval(model(1, TildeForm::None), 2.0, 0) == Approx(4.0));
  CHECK(n_eval(model(0, TildeForm::PowerLaw), -2.0, 0) == Approx(-8.0));
  CHECK(n_eval(model(1, TildeForm::PowerLaw), 1.0, 1) == Approx(5.0));
  CHECK(n_eval(model(0, TildeForm::PowerLaw), -1.5, 2) == Approx(6.0 * -1.5));
}

TEST_CASE("p below 3 is rejected") {
  CHECK_THROWS_AS(model(0, TildeForm::PowerLaw, 2.5).validate(), InvalidModelError);
  CHECK_NOTHROW(model(0, TildeForm::PowerLaw, 3.0).validate());
}

TEST_CASE("power law tilde vanishes to second order at 0") {
  const auto m = model(0, TildeForm::PowerLaw, 4.0);
  for (int j = 0; j <= 2; ++j) CHECK(n_tilde_eval(m, 0.0, j) == 0.0);
}

TEST_CASE("verify_assumption_N") {
  const auto rep = verify_assumption_N(model(0, TildeForm::PowerLaw, 3.0), 2000);
  CHECK(rep.passed);
  CHECK(rep.max_ratio_unit[0] > 0.0);
  CHECK(rep.max_ratio_wide[0] == Approx(rep.max_ratio_unit[0]).epsilon(0.05));
  CHECK(std::isfinite(rep.max_ratio_wide[2]));
  const auto p5 = verify_assumption_N(model(0, TildeForm::PowerLaw, 5.0), 2000);
  CHECK(p5.passed);
  const auto none = verify_assumption_N(model(1, TildeForm::None), 100);
  CHECK(none.passed);
}

TEST_CASE("n_eval derivatives match centered differences at order 2") {
  const auto m = model(0.7, TildeForm::PowerLaw, 3.5);
  for (int order : {0, 1}) {
    const double z = 0.83;
    auto err = [&](double h) {
      return std::abs((n_eval(m, z + h, order) - n_eval(m, z - h, order)) / (2 * h) - n_eval(m, z, order + 1));
    };
    CHECK(err(1e-2) / err(5e-3) >= 3.9);
  }
}

TEST_CASE("nonlinear_flux examples") {
  const Grid g(pi, 64);
  const Field s = Field::sample(g, [](double x) { return std::sin(x); });
  const Field flux = nonlinear_flux(model(1, TildeForm::None), s);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(flux[j] == Approx(std::sin(2 * g.point(j))).epsilon(1e-12).scale(1));
  CHECK(nonlinear_flux(model(0, TildeForm::PowerLaw), Field(g)).sup_norm() == 0.0);
  const Field c = Field::sample(g, [](double) { return 0.7; });
  CHECK(nonlinear_flux(model(0, TildeForm::PowerLaw), c).sup_norm() < 1e-14);
}

TEST_CASE("flux output is mean-zero and homogeneous") {
  const Grid g(20.0, 512);
  const Field ux = Field::sample(g, [](double x) { return -0.5 * x * std::exp(-0.25 * x * x); });
  const auto m = model(0, TildeForm::PowerLaw, 3.0);
  const Field f1 = nonlinear_flux(m, ux);
  CHECK(std::abs(integrate(f1)) <= 1e-13 * f1.sup_norm() * 40.0);
  for (double c : {2.0, 0.5}) {
    const Field fc = nonlinear_flux(m, c * ux);
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(fc[j] - std::pow(c, 3) * f1[j]));
    CHECK(err <= 1e-10 * std::pow(c, 3) * f1.sup_norm());
  }
}

TEST_CASE("non-finite input raises overflow") {
  const Grid g(pi, 16);
  Field f(g);
  f[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(nonlinear_flux(model(1, TildeForm::None), f), NumericalOverflowError);
}
