#include "beamlab/verification.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "beamlab/analysis.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/scaling.hpp"

namespace beamlab {

namespace {

constexpr double kRatio = 3.7;

CheckResult at_most(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

CheckResult at_least(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value >= threshold, value, threshold, std::move(detail)};
}

CoefficientFunction coefficient(std::function<double(double)> value,
                                std::function<double(double)> derivative) {
  return {std::move(value), std::move(derivative)};
}

struct ManufacturedCase {
  std::string name;
  double k, l, m;
  int n;
};

GeneralIdentitySystem build_case(const ManufacturedCase& c, const Grid& grid) {
  const auto c1 = coefficient([](double s) { return 1.2 + 0.3 * std::sin(s); },
                              [](double s) { return 0.3 * std::cos(s); });
  const auto c2 = coefficient([](double s) { return 0.4 * std::exp(-0.5 * s); },
                              [](double s) { return -0.2 * std::exp(-0.5 * s); });
  const auto c3 = coefficient([](double s) { return 1.0 + 0.2 * std::cos(2.0 * s); },
                              [](double s) { return -0.4 * std::sin(2.0 * s); });
  const auto c4 = coefficient([](double s) { return 0.5 + 0.25 * std::tanh(s); },
                              [](double s) { return 0.25 / (std::cosh(s) * std::cosh(s)); });
  std::vector<ManufacturedMode> modes;
  modes.push_back({[](double s) { return 1.0 + 0.3 * std::sin(s); },
                   [](double s) { return 0.3 * std::cos(s); },
                   [](double s) { return -0.3 * std::sin(s); },
                   Field::sample(grid, [](double y) { return std::exp(-0.25 * y * y); })});
  modes.push_back({[](double s) { return 0.5 * std::exp(-0.4 * s); },
                   [](double s) { return -0.2 * std::exp(-0.4 * s); },
                   [](double s) { return 0.08 * std::exp(-0.4 * s); },
                   Field::sample(grid, [](double y) { return y * std::exp(-0.5 * y * y); })});
  modes.push_back({[](double s) { return 0.2 * std::cos(1.5 * s); },
                   [](double s) { return -0.3 * std::sin(1.5 * s); },
                   [](double s) { return -0.45 * std::cos(1.5 * s); },
                   Field::sample(grid, [](double y) { return (y * y - 1.0) * std::exp(-0.3 * y * y); })});
  return manufactured_system(c.k, c.l, c.m, c.n, c1, c2, c3, c4, std::move(modes));
}

double max_of(const std::vector<GeneralResidual>& r, bool second) {
  double out = 0.0;
  for (const auto& p : r) out = std::max(out, second ? p.dE2 : p.dE1);
  return out;
}

double spectral_energy(const PhysicalState& state) {
  const auto du = derivatives(state.u, 2);
  return inner(state.ut, state.ut) + inner(du[1], du[1]) + inner(du[2], du[2]);
}

double l2_distance(const PhysicalState& a, const PhysicalState& b) {
  const Field du = a.u - b.u;
  const Field dv = a.ut - b.ut;
  return std::sqrt(inner(du, du) + inner(dv, dv));
}

double log_slope(const std::function<double(double)>& fn, double s_lo, double s_hi, int samples) {
  std::vector<SeriesPoint> series;
  for (int i = 0; i <= samples; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / samples;
    series.push_back({s, fn(s)});
  }
  return fit_decay_rate(series, {s_lo, s_hi}).slope;
}

}  // namespace

RunConfig linear_reference_config() {
  RunConfig c;
  c.alpha = 0.0;
  c.beta = 0.0;
  c.mu = 0.0;
  c.epsilon = 0.05;
  c.L = 40.0;
  c.n = 1024;
  c.s_max = 6.0;
  c.snapshots_per_unit_s = 200.0;
  return c;
}

RunConfig nonlinear_reference_config(double alpha, double beta) {
  RunConfig c;
  c.alpha = alpha;
  c.beta = beta;
  c.mu = 1.0;
  c.p = 3.0;
  c.tilde_form = TildeForm::PowerLaw;
  c.epsilon = 0.01;
  c.s_max = 6.0;
  c.snapshots_per_unit_s = 100.0;
  return c;
}

CheckResult check_hardy_random(std::size_t count, std::uint64_t seed) {
  const Grid grid(20.0, 512);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t passed = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const HardyResult r = hardy_check(random_mean_zero_field(grid, rng));
    worst = std::max(worst, r.ratio);
    if (r.ratio <= 1.0 + 1e-10) ++passed;
  }
  return {"hardy_random", passed == count, worst, 1.0 + 1e-10,
          fmt::format("{}/{} fields with ratio <= 1 + 1e-10", passed, count)};
}

CheckResult check_hardy_analytic() {
  const Grid grid(20.0, 512);
  const HardyResult r =
      hardy_check(Field::sample(grid, [](double y) { return y * std::exp(-0.5 * y * y); }));
  return at_most("hardy_analytic", std::abs(r.ratio - 1.0 / 3.0), 1e-6,
                 fmt::format("ratio {:.12g}, expected 1/3", r.ratio));
}

std::vector<CheckResult> check_general_identities(double ds) {
  const Grid grid(20.0, 512);
  const std::vector<ManufacturedCase> cases = {
      {"k=1/2,l=1/2,m=3/2,n=0", 0.5, 0.5, 1.5, 0},
      {"k=1/2,l=0,m=1,n=1", 0.5, 0.0, 1.0, 1},
      {"k=1,l=1,m=2,n=1", 1.0, 1.0, 2.0, 1},
  };
  const std::vector<double> s_samples = {0.3, 0.8, 1.3, 1.8, 2.3};
  std::vector<CheckResult> out;
  for (const auto& c : cases) {
    const GeneralIdentitySystem sys = build_case(c, grid);
    const auto coarse = general_identity_residual(sys, s_samples, ds);
    const auto fine = general_identity_residual(sys, s_samples, 0.5 * ds);
    for (bool second : {false, true}) {
      const std::string id = second ? "dE2" : "dE1";
      const double r_coarse = max_of(coarse, second);
      const double r_fine = max_of(fine, second);
      out.push_back(at_most(fmt::format("general_{}[{}]", id, c.name), r_coarse, 1e-6,
                            fmt::format("max residual at ds = {}", ds)));
      out.push_back(at_least(fmt::format("general_{}_refinement[{}]", id, c.name),
                             r_fine > 0 ? r_coarse / r_fine : std::numeric_limits<double>::infinity(),
                             kRatio, fmt::format("{:.3e} -> {:.3e}", r_coarse, r_fine)));
    }
  }
  return out;
}

std::vector<CheckResult> check_run_identities(const RunResult& run) {
  std::vector<CheckResult> out;
  for (auto name : kIdentityNames) {
    const auto it = run.identity_refinement.find(std::string(name));
    if (it == run.identity_refinement.end()) {
      out.push_back({fmt::format("identity_refinement[{}]", name), false, 0, kRatio, "no residual series"});
      continue;
    }
    const RefinementSummary& r = it->second;
    out.push_back(at_least(fmt::format("identity_refinement[{}]", name), r.ratio, kRatio,
                           fmt::format("rms {:.3e} -> {:.3e}", r.rms_coarse, r.rms_fine)));
    out.push_back(at_most(fmt::format("identity_absolute[{}]", name), r.max_fine, 1e-5,
                          "max residual at the logged spacing"));
  }
  return out;
}

CheckResult check_mass_order(const RunResult& run) {
  return at_least("mass_ode_order", run.mass_order, 1.9,
                  fmt::format("rms {:.3e} -> {:.3e}", run.mass_refinement.rms_coarse,
                              run.mass_refinement.rms_fine));
}

CheckResult check_zero_mean(const RunResult& run) {
  return at_most("zero_mean", run.max_zero_mean_ratio, 1e-9, "max |int q| / sup|q| over f, g, h");
}

CheckResult check_rate(const RunResult& run) {
  if (!run.fit) return {"rate", false, 0, run.config.slope_threshold, "no fit"};
  CheckResult c = at_most("rate", run.fit->slope, run.config.slope_threshold,
                          fmt::format("r^2 = {:.4f} over [{}, {}]", run.fit->r_squared, run.fit->s_lo,
                                      run.fit->s_hi));
  c.passed = c.passed && run.fit->r_squared >= 0.95;
  return c;
}

CheckResult check_solver_order(Scheme scheme) {
  const Grid grid(20.0, 256);
  const PhysicalState initial{0.0, Field::sample(grid, [](double x) { return 0.5 * std::exp(-0.25 * x * x); }),
                              Field::sample(grid, [](double x) { return 0.2 * x * std::exp(-0.25 * x * x); })};
  NonlinearityModel nonlin;
  nonlin.mu = 1.0;
  nonlin.p = 3.0;
  nonlin.tilde_form = TildeForm::PowerLaw;
  const CoefficientModel model = CoefficientModel::power_law(0.0, 0.0);
  auto run = [&](double dt) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.adaptive = false;
    cfg.dt_initial = dt;
    cfg.dt_max = dt;
    return integrate(initial, 1.0, {1.0}, model, nonlin, cfg).snapshots.back();
  };
  const double dt0 = 0.05;
  const PhysicalState reference = run(dt0 / 32.0);
  std::vector<double> errors;
  for (double dt : {dt0, dt0 / 2.0, dt0 / 4.0}) errors.push_back(l2_distance(run(dt), reference));
  const double ratio = std::min(errors[0] / errors[1], errors[1] / errors[2]);
  return at_least(fmt::format("solver_order[{}]", to_string(scheme)), std::log2(ratio), 1.9,
                  fmt::format("errors {:.3e}, {:.3e}, {:.3e} against dt/8 of the finest", errors[0],
                              errors[1], errors[2]));
}

CheckResult check_pure_beam_drift() {
  const Grid grid(20.0, 256);
  const PhysicalState initial{0.0, Field::sample(grid, [](double x) { return std::exp(-0.25 * x * x); }),
                              Field::sample(grid, [](double x) { return x * std::exp(-0.5 * x * x); })};
  IntegratorConfig cfg;
  cfg.scheme = Scheme::ExpRK4;
  cfg.adaptive = false;
  cfg.dt_initial = 1e-3;
  cfg.dt_max = 1e-3;
  const CoefficientFn pure = [](double) { return std::array<double, 2>{1.0, 0.0}; };
  std::vector<double> times;
  for (int i = 1; i <= 10; ++i) times.push_back(i);
  const Trajectory traj = integrate(initial, 10.0, times, pure, NonlinearityModel{}, cfg);
  const double e0 = spectral_energy(initial);
  double drift = 0.0;
  for (const auto& snap : traj.snapshots) drift = std::max(drift, std::abs(spectral_energy(snap) - e0) / e0);
  return at_most("pure_beam_energy_drift", drift, 1e-8, "max relative drift of int(u_t^2 + u_x^2 + u_xx^2)");
}

std::vector<CheckResult> check_coefficient_laws() {
  std::vector<CheckResult> out;
  for (const auto& [alpha, beta] : std::vector<std::pair<double, double>>{{0, 0}, {1, 0}, {0, -0.5}}) {
    const CoefficientModel model = CoefficientModel::power_law(alpha, beta);
    const double gap = alpha - beta + 1.0;
    const double expected_c1 = -(beta + 1.0) / gap;
    const double expected_c4 = -(2.0 * alpha - beta + 1.0) / gap;
    const double c1 = log_slope([&](double s) { return scaled_factors(model, s).c1; }, 4.0, 10.0, 60);
    const double c4 = log_slope([&](double s) { return scaled_factors(model, s).c4; }, 4.0, 10.0, 60);
    out.push_back(at_most(fmt::format("c1_slope[{},{}]", alpha, beta), std::abs(c1 / expected_c1 - 1.0), 0.05,
                          fmt::format("measured {:.5f}, expected {:.5f}", c1, expected_c1)));
    out.push_back(at_most(fmt::format("c4_slope[{},{}]", alpha, beta), std::abs(c4 / expected_c4 - 1.0), 0.05,
                          fmt::format("measured {:.5f}, expected {:.5f}", c4, expected_c4)));
  }
  return out;
}

CheckResult check_region_atlas() {
  struct Probe {
    double alpha, beta;
    RegionLabel expected;
  };
  const std::vector<Probe> probes = {
      {0.0, 0.0, RegionLabel::Omega1},    {-0.5, 0.5, RegionLabel::Omega2},
      {0.0, -2.0, RegionLabel::Omega3},   {-2.0, -2.0, RegionLabel::Omega4},
      {0.0, 2.0, RegionLabel::Omega5},    {1.0, -1.0, RegionLabel::Boundary},
      {1.0, 2.0, RegionLabel::Boundary},  {0.0, 1.0, RegionLabel::Boundary},
      {-0.25, 0.5, RegionLabel::Boundary},
  };
  std::size_t matched = 0;
  std::string mismatches;
  for (const auto& p : probes) {
    const RegionLabel got = classify_region(p.alpha, p.beta);
    if (got == p.expected)
      ++matched;
    else
      mismatches += fmt::format(" ({}, {}) -> {}", p.alpha, p.beta, to_string(got));
  }
  return {"region_atlas", matched == probes.size(), static_cast<double>(matched),
          static_cast<double>(probes.size()),
          mismatches.empty() ? "all probes classified as expected" : "mismatches:" + mismatches};
}

std::vector<CheckResult> run_suite(const std::string& suite) {
  if (suite != "hardy" && suite != "identities" && suite != "convergence" && suite != "all")
    throw InvalidConfigError(
        fmt::format("unknown verify suite '{}': expected hardy, identities, convergence or all", suite));
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> more) { out.insert(out.end(), more.begin(), more.end()); };
  if (suite == "hardy" || suite == "all") {
    out.push_back(check_hardy_random());
    out.push_back(check_hardy_analytic());
  }
  if (suite == "identities" || suite == "all") {
    append(check_general_identities());
    const RunResult run = run_simulation(linear_reference_config(), {.force = false, .keep_fields = false});
    append(check_run_identities(run));
    out.push_back(check_mass_order(run));
  }
  if (suite == "convergence" || suite == "all") {
    out.push_back(check_solver_order(Scheme::ExpMidpoint));
    out.push_back(check_pure_beam_drift());
  }
  return out;
}

}  // namespace beamlab
