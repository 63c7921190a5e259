#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/solver.hpp"
#include "beamlab/verification.hpp"

using namespace beamlab;
using doctest::Approx;
using std::numbers::pi;

namespace {

const CoefficientFn kUnit = [](double) { return std::array<double, 2>{1.0, 1.0}; };
const CoefficientFn kNone = [](double) { return std::array<double, 2>{0.0, 0.0}; };

double sup_diff(const Field& a, const std::function<double(double)>& fn) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - fn(a.grid().point(j))));
  return out;
}

}  // namespace

TEST_CASE("beam_propagator examples") {
  const Grid g(pi, 8);  // xi_k = k
  const auto blocks = beam_propagator(g, 0.3);
  CHECK(blocks[0].uu == 1.0);
  CHECK(blocks[0].uv == Approx(0.3));
  CHECK(blocks[0].vu == 0.0);
  CHECK(blocks[0].vv == 1.0);
  for (const auto& b : beam_propagator(g, 0.0)) {
    CHECK(b.uu == 1.0);
    CHECK(b.uv == 0.0);
    CHECK(b.vu == 0.0);
    CHECK(b.vv == 1.0);
  }
  const auto half = beam_propagator(g, pi);
  CHECK(half[1].uu == Approx(-1.0));
  CHECK(std::abs(half[1].uv) < 1e-15);
  CHECK(std::abs(half[1].vu) < 1e-15);
  CHECK(half[1].vv == Approx(-1.0));
}

TEST_CASE("forcing examples") {
  const Grid g(pi, 64);
  NonlinearityModel none;
  const PhysicalState zero{0.0, Field(g), Field(g)};
  CHECK(forcing(zero, kUnit, none).sup_norm() == 0.0);

  const PhysicalState s{0.0, Field::sample(g, [](double x) { return std::sin(x); }), Field(g)};
  CHECK(sup_diff(forcing(s, kUnit, none), [](double x) { return -std::sin(x); }) < 1e-12);

  NonlinearityModel quad;
  quad.mu = 1.0;
  const PhysicalState c{0.0, Field::sample(g, [](double x) { return -std::cos(x); }), Field(g)};
  CHECK(sup_diff(forcing(c, kUnit, quad), [](double x) { return std::cos(x) + std::sin(2 * x); }) < 1e-12);
}

TEST_CASE("step with K = 0 is the exact semigroup") {
  const Grid g(pi, 32);
  const PhysicalState s{0.0, Field::sample(g, [](double x) { return std::sin(x); }), Field(g)};
  for (Scheme scheme : {Scheme::ExpEuler, Scheme::ExpMidpoint, Scheme::ExpRK4}) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    const PhysicalState next = step(s, 0.37, kNone, NonlinearityModel{}, cfg);
    CHECK(sup_diff(next.u, [](double x) { return std::cos(0.37) * std::sin(x); }) < 1e-12);
    const PhysicalState z = step({0.0, Field(g), Field(g)}, 0.1, kUnit, NonlinearityModel{}, cfg);
    CHECK(z.u.sup_norm() == 0.0);
    CHECK(z.ut.sup_norm() == 0.0);
  }
}

TEST_CASE("ExpMidpoint step halving has Richardson ratio near 4") {
  const Grid g(20.0, 256);
  const PhysicalState s0{0.0, Field::sample(g, [](double x) { return 0.5 * std::exp(-0.25 * x * x); }), Field(g)};
  NonlinearityModel nl;
  nl.mu = 1.0;
  IntegratorConfig cfg;
  cfg.scheme = Scheme::ExpMidpoint;
  auto advance = [&](double dt, int n) {
    PhysicalState s = s0;
    for (int i = 0; i < n; ++i) s = step(s, dt, kUnit, nl, cfg);
    return s;
  };
  const PhysicalState ref = advance(0.2 / 64, 64);
  auto err = [&](const PhysicalState& s) {
    const Field d = s.u - ref.u;
    return std::sqrt(inner(d, d));
  };
  const double e1 = err(advance(0.2 / 4, 4)), e2 = err(advance(0.2 / 8, 8));
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.15));
}

TEST_CASE("integrate: t_end = t0 returns the initial snapshot only") {
  const Grid g(20.0, 64);
  const PhysicalState s0{2.0, Field::sample(g, [](double x) { return std::exp(-x * x); }), Field(g)};
  const Trajectory traj = integrate(s0, 2.0, {}, kUnit, NonlinearityModel{}, IntegratorConfig{});
  REQUIRE(traj.snapshots.size() == 1);
  CHECK(traj.snapshots[0].t == 2.0);
}

TEST_CASE("integrate hits snapshot times exactly") {
  const Grid g(20.0, 128);
  const PhysicalState s0{0.0, Field::sample(g, [](double x) { return std::exp(-0.25 * x * x); }), Field(g)};
  const std::vector<double> times = {0.0, 0.3, 1.7, 2.0};
  const Trajectory traj = integrate(s0, 2.0, times, kUnit, NonlinearityModel{}, IntegratorConfig{});
  REQUIRE(traj.snapshots.size() == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(traj.snapshots[i].t == times[i]);
}

TEST_CASE("mass obeys M'' + M' = 0 with a = b = 1") {
  const Grid g(20.0, 256);
  const PhysicalState s0{0.0, Field::sample(g, [](double x) { return std::exp(-0.25 * x * x); }),
                         Field::sample(g, [](double x) { return 0.3 * std::exp(-0.25 * (x - 1) * (x - 1)); })};
  const double M0 = integrate(s0.u), M1 = integrate(s0.ut);
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.25 * i);
  const Trajectory traj = integrate(s0, 5.0, times, kUnit, NonlinearityModel{}, IntegratorConfig{});
  for (const auto& snap : traj.snapshots) {
    CHECK(std::abs(integrate(snap.ut) - M1 * std::exp(-snap.t)) < 1e-10);
    CHECK(std::abs(integrate(snap.u) - (M0 + M1 * (1 - std::exp(-snap.t)))) < 1e-10);
  }
}

TEST_CASE("large data triggers blow-up detection instead of NaN") {
  const Grid g(20.0, 256);
  const PhysicalState s0{0.0, Field::sample(g, [](double x) { return 1e3 * std::exp(-x * x); }), Field(g)};
  NonlinearityModel nl;
  nl.tilde_form = TildeForm::PowerLaw;
  nl.p = 3.0;
  IntegratorConfig cfg;
  cfg.adaptive = false;
  cfg.dt_initial = 1e-2;
  CHECK_THROWS_AS(integrate(s0, 5.0, {}, kUnit, nl, cfg), BlowUpDetectedError);
}

TEST_CASE("integrator config validation") {
  IntegratorConfig cfg;
  cfg.dt_initial = 1.0;
  cfg.dt_max = 0.5;
  CHECK_THROWS(cfg.validate());
  cfg = IntegratorConfig{};
  cfg.safety = 1.5;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("solver self-convergence and pure-beam conservation") {
  const CheckResult order = check_solver_order(Scheme::ExpMidpoint);
  INFO(order.detail);
  CHECK(order.passed);
  const CheckResult drift = check_pure_beam_drift();
  INFO(drift.detail);
  CHECK(drift.passed);
}
