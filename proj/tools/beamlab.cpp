// beamlab: simulate / verify / sweep front end.
//
// Exit codes: 0 success, 1 verify failure, 2 invalid config or region gate,
// 3 blow-up detected, 4 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "beamlab/errors.hpp"
#include "beamlab/pipeline.hpp"
#include "beamlab/results_io.hpp"
#include "beamlab/sweep.hpp"
#include "beamlab/verification.hpp"

namespace {

constexpr int kVerifyFailure = 1;
constexpr int kConfigError = 2;
constexpr int kBlowUp = 3;
constexpr int kNumericalFailure = 4;

int simulate(const std::string& config_path, const std::string& out, bool force) {
  beamlab::RunConfig config = beamlab::load_config(config_path);
  if (!out.empty()) config.out_dir = out;
  const beamlab::RunResult result = beamlab::run_simulation(config, {.force = force});
  beamlab::write_run_outputs(result, config.out_dir);
  std::cout << "region " << beamlab::to_string(result.region)
            << (result.exploratory ? " (exploratory)" : "") << ", m* = " << result.m_star.m_star;
  if (result.fit) std::cout << ", slope = " << result.fit->slope << ", r^2 = " << result.fit->r_squared;
  std::cout << "\nwrote " << config.out_dir << "\n";
  for (const auto& note : result.notes) std::cout << "note: " << note << "\n";
  return 0;
}

int verify(const std::string& suite, const std::string& out) {
  const auto checks = beamlab::run_suite(suite);
  const std::filesystem::path dir(out.empty() ? "out" : out);
  beamlab::write_text((dir / "verify.json").string(), beamlab::verify_report_json(suite, checks));
  beamlab::write_text((dir / "metadata.json").string(), beamlab::metadata_json("verify " + suite));
  int status = 0;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << c.value
              << " threshold=" << c.threshold << " " << c.detail << "\n";
    if (!c.passed) {
      std::cerr << "verify check failed: " << c.name << "\n";
      status = kVerifyFailure;
    }
  }
  return status;
}

int sweep(const std::string& config_path, const std::string& alpha_range, const std::string& beta_range,
          const std::string& out, std::size_t workers) {
  const auto alphas = beamlab::parse_range(alpha_range);
  const auto betas = beamlab::parse_range(beta_range);
  beamlab::RunConfig config = config_path.empty() ? beamlab::RunConfig{} : beamlab::load_config(config_path);
  if (!out.empty()) config.out_dir = out;
  if (workers > 0) config.workers = workers;
  const auto rows = beamlab::run_sweep(alphas, betas, config, config.workers);
  const std::filesystem::path dir(config.out_dir);
  beamlab::write_text((dir / "sweep_map.csv").string(), beamlab::sweep_map_csv(rows));
  beamlab::write_text((dir / "config.json").string(), beamlab::config_to_json(config));
  beamlab::write_text((dir / "metadata.json").string(), beamlab::metadata_json("sweep"));
  std::size_t failed = 0;
  for (const auto& r : rows) {
    std::cout << r.alpha << "," << r.beta << " " << beamlab::to_string(r.region) << " " << r.status << "\n";
    if (r.status == "failed") ++failed;
  }
  return failed == rows.size() ? kNumericalFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped beam equation laboratory: scaling variables, energy identities, decay rates"};
  app.require_subcommand(1);

  std::string config_path, out, suite = "all", alpha_range, beta_range;
  bool force = false;
  std::size_t workers = 0;

  auto* sim = app.add_subcommand("simulate", "Run one configuration and write result files");
  sim->add_option("--config", config_path, "Config file (JSON)")->required();
  sim->add_option("--out", out, "Output directory (overrides out_dir)");
  sim->add_flag("--force", force, "Run outside Omega1 as an exploratory run");

  auto* ver = app.add_subcommand("verify", "Run property suites");
  ver->add_option("suite", suite, "hardy, identities, convergence or all")
      ->check(CLI::IsMember({"hardy", "identities", "convergence", "all"}));
  ver->add_option("--out", out, "Output directory for verify.json");

  auto* swp = app.add_subcommand("sweep", "Sweep the (alpha, beta) plane");
  swp->add_option("--config", config_path, "Base config file (JSON)");
  swp->add_option("--alpha", alpha_range, "start:stop:count")->required();
  swp->add_option("--beta", beta_range, "start:stop:count")->required();
  swp->add_option("--out", out, "Output directory (overrides out_dir)");
  swp->add_option("--workers", workers, "Worker threads (overrides workers)")->check(CLI::PositiveNumber);
  swp->add_flag("--force", force, "Accepted for symmetry; sweeps always run every point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*sim) return simulate(config_path, out, force);
    if (*ver) return verify(suite, out);
    return sweep(config_path, alpha_range, beta_range, out, workers);
  } catch (const beamlab::BlowUpDetectedError& e) {
    std::cerr << "blow-up detected at t = " << e.time() << " (sup norm " << e.sup_norm() << "): " << e.what()
              << "\n";
    return kBlowUp;
  } catch (const beamlab::InvalidConfigError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kConfigError;
  } catch (const beamlab::InvalidModelError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kConfigError;
  } catch (const beamlab::OutOfRegionError& e) {
    std::cerr << "region gate: " << e.what() << "\n";
    return kConfigError;
  } catch (const beamlab::SchemaVersionError& e) {
    std::cerr << "schema: " << e.what() << "\n";
    return kConfigError;
  } catch (const beamlab::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}
