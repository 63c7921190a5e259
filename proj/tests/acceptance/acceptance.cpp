// Acceptance runner: one PASS/FAIL line per criterion AC-1..AC-10.

#include <fmt/format.h>

#include <chrono>
#include <cstdio>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beamlab/pipeline.hpp"
#include "beamlab/verification.hpp"

using namespace beamlab;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

Outcome combine(const std::vector<CheckResult>& checks) {
  Outcome out{true, {}};
  for (const auto& c : checks) {
    if (!c.passed) {
      out.passed = false;
      if (!out.detail.empty()) out.detail += "; ";
      out.detail += fmt::format("{} value={:.6g} threshold={:.6g} {}", c.name, c.value, c.threshold, c.detail);
    }
  }
  if (out.passed) out.detail = fmt::format("{} checks", checks.size());
  return out;
}

CheckResult flag(const RunResult& run, const std::string& name, const std::string& label) {
  return {label + ":" + name, run.checks.at(name), 0, 0, {}};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fmt::print("{} {} ({:.1f} s) {}\n", o.passed ? "PASS" : "FAIL", id, secs, o.detail);
    std::fflush(stdout);
    if (!o.passed) ++failures;
  };

  const RunOptions quiet{.force = false, .keep_fields = false};
  RunResult linear, narrow, nl00, nl10;
  bool have_linear = false, have_nl00 = false, have_nl10 = false;
  std::string linear_error, nl00_error, nl10_error;
  auto run_into = [&](RunResult& dst, bool& ok, std::string& err, const RunConfig& cfg) {
    try {
      dst = run_simulation(cfg, quiet);
      ok = true;
    } catch (const std::exception& e) {
      err = e.what();
    }
  };
  run_into(linear, have_linear, linear_error, linear_reference_config());
  run_into(nl00, have_nl00, nl00_error, nonlinear_reference_config(0.0, 0.0));
  run_into(nl10, have_nl10, nl10_error, nonlinear_reference_config(1.0, 0.0));
  auto need = [](bool ok, const std::string& err) {
    if (!ok) throw std::runtime_error(err);
  };

  report("AC-1", [] { return combine(check_general_identities()); });
  report("AC-2", [&] {
    need(have_linear, linear_error);
    return combine(check_run_identities(linear));
  });
  report("AC-3", [&] {
    need(have_linear, linear_error);
    Outcome o = combine({check_rate(linear)});
    o.detail = fmt::format("slope={:.6g} r2={:.6g}", linear.fit ? linear.fit->slope : NAN,
                           linear.fit ? linear.fit->r_squared : NAN);
    return o;
  });
  report("AC-4", [&] {
    need(have_nl00, nl00_error);
    need(have_nl10, nl10_error);
    Outcome o = combine({check_rate(nl00), check_rate(nl10), flag(nl00, "energy_bounded", "(0,0)"),
                         flag(nl10, "energy_bounded", "(1,0)")});
    o.detail += fmt::format(" slopes=({:.6g}, {:.6g}) energy_ratio=({:.6g}, {:.6g})",
                            nl00.fit ? nl00.fit->slope : NAN, nl10.fit ? nl10.fit->slope : NAN,
                            nl00.energy_growth_ratio, nl10.energy_growth_ratio);
    return o;
  });
  report("AC-5", [] { return combine({check_hardy_random(1000, 7), check_hardy_analytic()}); });
  report("AC-6", [&] {
    need(have_linear, linear_error);
    need(have_nl00, nl00_error);
    need(have_nl10, nl10_error);
    return combine({check_zero_mean(linear), check_zero_mean(nl00), check_zero_mean(nl10)});
  });
  report("AC-7", [&] {
    need(have_linear, linear_error);
    return combine({check_mass_order(linear)});
  });
  report("AC-8", [] { return combine(check_coefficient_laws()); });
  report("AC-9", [&] {
    need(have_linear, linear_error);
    RunConfig half = linear_reference_config();
    half.L = 20.0;
    half.n = 512;
    narrow = run_simulation(half, quiet);
    if (!linear.fit || !narrow.fit) throw std::runtime_error("rate fit unavailable");
    const double shift = std::abs(linear.fit->slope - narrow.fit->slope);
    CheckResult doubling{"domain_doubling_slope_shift", shift <= 0.01, shift, 0.01,
                         fmt::format("slope L=20 {:.10g}, L=40 {:.10g}", narrow.fit->slope, linear.fit->slope)};
    Outcome o = combine({check_solver_order(Scheme::ExpMidpoint), check_pure_beam_drift(), doubling});
    o.detail += fmt::format(" slope_shift={:.3g}", shift);
    return o;
  });
  report("AC-10", [] { return combine({check_region_atlas()}); });
  return failures == 0 ? 0 : 1;
}
