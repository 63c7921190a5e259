#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "beamlab/analysis.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/scaling.hpp"
#include "beamlab/spectral_grid.hpp"

using namespace beamlab;
using std::numbers::pi;

namespace {

double sup_diff(const Field& a, const std::function<double(double)>& fn) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - fn(a.grid().point(j))));
  return out;
}

}  // namespace

TEST_CASE("grid invariants") {
  const Grid g(20.0, 512);
  CHECK(g.spacing() * g.size() == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(g.wavenumber(1) == doctest::Approx(pi / 20.0));
  CHECK_THROWS(Grid(20.0, 500));
  CHECK_THROWS(Grid(-1.0, 512));
}

TEST_CASE("real field round trip through the transform") {
  const Grid g(20.0, 512);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Field f(g);
  for (std::size_t j = 0; j < g.size(); ++j) f[j] = nd(rng);
  const auto back = g.inverse(g.forward(f.values()));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-13);
}

TEST_CASE("deriv examples") {
  const Grid periodic(pi, 64);
  const Field s = Field::sample(periodic, [](double x) { return std::sin(x); });
  CHECK(sup_diff(deriv(s, 1), [](double x) { return std::cos(x); }) < 1e-12);

  const Field c = Field::sample(periodic, [](double) { return 3.0; });
  for (int order = 1; order <= 4; ++order) CHECK(deriv(c, order).sup_norm() < 1e-12);

  const Grid g(20.0, 512);
  const Field gauss = Field::sample(g, [](double x) { return std::exp(-x * x); });
  CHECK(sup_diff(deriv(gauss, 2), [](double x) { return (4 * x * x - 2) * std::exp(-x * x); }) < 1e-10);
}

TEST_CASE("antideriv_zero_mean examples") {
  const Grid g(20.0, 1024);
  const Field f = Field::sample(g, [](double y) { return y * std::exp(-0.5 * y * y); });
  CHECK(sup_diff(antideriv_zero_mean(f), [](double y) { return -std::exp(-0.5 * y * y); }) < 1e-8);

  CHECK(antideriv_zero_mean(Field(g)).sup_norm() == 0.0);

  const Field psi = profile_psi(g);
  CHECK(sup_diff(antideriv_zero_mean(psi), [](double y) { return phi_derivative(y, 1); }) < 1e-8);

  const Field bump = Field::sample(g, [](double y) { return std::exp(-y * y); });
  CHECK_THROWS_AS(antideriv_zero_mean(bump), ZeroMeanViolationError);
}

TEST_CASE("deriv then antideriv reproduces the field") {
  const Grid g(20.0, 1024);
  const Field f = Field::sample(g, [](double y) { return std::exp(-0.3 * y * y) * (1 + 0.5 * std::sin(y)); });
  const Field back = antideriv_zero_mean(deriv(f, 1));
  double err = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
  CHECK(err < 1e-9);
}

TEST_CASE("weighted_norm examples") {
  const Grid g(20.0, 512);
  CHECK(weighted_norm(profile_phi(g), 0, 0.0) ==
        doctest::Approx(std::sqrt(1.0 / (2.0 * std::sqrt(2.0 * pi)))).epsilon(1e-12));
  CHECK(weighted_norm(Field(g), 2, 1.0) == 0.0);
  const Grid periodic(pi, 64);
  const Field s = Field::sample(periodic, [](double x) { return std::sin(x); });
  CHECK(weighted_norm(s, 1, 0.0) == doctest::Approx(2.0 * std::sqrt(pi)).epsilon(1e-12));
}

TEST_CASE("moment examples") {
  const Grid g(20.0, 512);
  CHECK(std::abs(moment(profile_phi(g), 0) - 1.0) < 1e-12);
  CHECK(std::abs(moment(profile_psi(g), 0)) < 1e-12);
  CHECK(std::abs(moment(profile_phi(g), 2) - 2.0) < 1e-10);
}

TEST_CASE("Parseval") {
  const Grid g(20.0, 512);
  const Field f = Field::sample(g, [](double y) { return std::exp(-0.2 * y * y) * std::cos(2 * y); });
  CHECK(spectral_square_integral(f) == doctest::Approx(inner(f, f)).epsilon(1e-12));
}

TEST_CASE("spectral accuracy plateaus at round-off") {
  for (std::size_t n : {512u, 1024u}) {
    const Grid g(20.0, n);
    const Field f = Field::sample(g, [](double y) { return std::exp(-0.25 * y * y); });
    CHECK(std::abs(integrate(f) - 2.0 * std::sqrt(pi)) < 1e-10);
    CHECK(sup_diff(deriv(f, 1), [](double y) { return -0.5 * y * std::exp(-0.25 * y * y); }) < 1e-10);
  }
}

TEST_CASE("interpolation reproduces band-limited fields") {
  const Grid g(20.0, 256);
  const Field f = Field::sample(g, [](double y) { return std::exp(-0.5 * y * y); });
  const auto vals = interpolate_uniform(g, g.forward(f.values()), -3.3, 0.01, 600);
  double err = 0.0;
  for (std::size_t j = 0; j < vals.size(); ++j) {
    const double y = -3.3 + 0.01 * static_cast<double>(j);
    err = std::max(err, std::abs(vals[j] - std::exp(-0.5 * y * y)));
  }
  CHECK(err < 1e-12);
}
