#include "beamlab/results_io.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

using nlohmann::json;

std::string num(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  return fmt::format("{:.17g}", x);
}

std::string opt_num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json fit_json(const std::optional<RateFit>& fit) {
  if (!fit) return nullptr;
  return {{"s_lo", fit->s_lo},           {"s_hi", fit->s_hi},
          {"slope", fit->slope},         {"intercept", fit->intercept},
          {"r_squared", fit->r_squared}, {"sample_count", fit->sample_count}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfigError(fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string csv_cell(std::string s) {
  for (char& c : s)
    if (c == ',') c = ';';
    else if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

void check_schema_version(std::string_view version) {
  const auto dot = version.find('.');
  const std::string_view major = version.substr(0, dot);
  if (major != std::to_string(kSchemaMajor))
    throw SchemaVersionError(fmt::format("unsupported schema_version '{}' (this build reads major {})",
                                         version, kSchemaMajor));
}

std::string energy_table_csv(const RunResult& result) {
  std::string out = fmt::format("# schema_version: {}\n", kSchemaVersion);
  out += "s,t,m,m_s,err_shift,err_raw";
  for (auto name : kIdentityNames) out += fmt::format(",{}", name);
  out += ",bbE0,bbE1_0,bbE1_1,bbE2,calE,calG,calE_tilde,int_G2,int_g2,int_y2g2,int_gy2";
  out += ",H_L2,h_H01,hy_L2,nonlin_L2,nonlin_y_H01,nonlin_yy_L2";
  out += ",zero_mean_f,zero_mean_g,zero_mean_h,lower_bound,lower_bound_holds";
  for (auto name : kIdentityNames) out += fmt::format(",residual_{}", name);
  out += "\n";
  for (const auto& r : result.records) {
    const EnergyReport& e = r.report;
    std::vector<std::string> cells = {num(r.s), num(r.t), num(r.m), num(r.m_s), num(r.err_shift),
                                      opt_num(r.err_raw)};
    for (double v : e.identity.energy) cells.push_back(num(v));
    const CompositeValues& c = e.composites;
    for (double v : {c.bbE0, c.bbE1_0, c.bbE1_1, c.bbE2, c.calE, c.calG, c.calE_tilde})
      cells.push_back(num(v));
    const DissipationIntegrals& d = e.dissipation;
    for (double v : {d.G2, d.g2, d.y2g2, d.gy2}) cells.push_back(num(v));
    const RemainderNorms& n = e.remainder;
    for (double v : {n.H_L2, n.h_H01, n.hy_L2, n.nonlin_L2, n.nonlin_y_H01, n.nonlin_yy_L2})
      cells.push_back(num(v));
    for (double v : {e.zero_mean.f, e.zero_mean.g, e.zero_mean.h}) cells.push_back(num(v));
    cells.push_back(num(e.lower_bound.bound));
    cells.push_back(e.lower_bound.holds ? "1" : "0");
    for (auto name : kIdentityNames) {
      const auto it = e.identity_residuals.find(std::string(name));
      cells.push_back(it == e.identity_residuals.end() ? std::string() : num(it->second));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  }
  return out;
}

std::string snapshots_json(const RunResult& result) {
  json snaps = json::array();
  for (const auto& s : result.stored) snaps.push_back({{"s", s.s}, {"t", s.t}, {"v", s.v}, {"w", s.w}});
  const json doc = {
      {"schema_version", kSchemaVersion},
      {"grid", {{"variable", "y"}, {"half_width", result.config.L}, {"n", result.config.n}}},
      {"snapshots", snaps},
  };
  return doc.dump() + "\n";
}

std::string summary_json(const RunResult& result) {
  json identities = json::object();
  for (const auto& [name, r] : result.identity_refinement)
    identities[name] = {{"rms_fine", r.rms_fine},
                        {"rms_coarse", r.rms_coarse},
                        {"max_fine", r.max_fine},
                        {"ratio", finite_or_null(r.ratio)}};
  json exponents = nullptr;
  if (result.exponents)
    exponents = {{"delta", result.exponents->delta},
                 {"lambda_max", result.exponents->lambda_max},
                 {"supercriticality_exponent", result.exponents->supercriticality_exponent},
                 {"lambda", result.lambda},
                 {"predicted_slope", result.predicted_slope}};
  const json doc = {
      {"schema_version", kSchemaVersion},
      {"alpha", result.config.alpha},
      {"beta", result.config.beta},
      {"region", std::string(to_string(result.region))},
      {"exploratory", result.exploratory},
      {"notes", result.notes},
      {"s_max_effective", result.s_max_effective},
      {"t_end", result.t_end},
      {"x_grid", {{"half_width", result.x_half_width}, {"n", result.x_points}}},
      {"snapshots", result.records.size()},
      {"exponents", exponents},
      {"m_star", {{"value", result.m_star.m_star},
                  {"tail_spread", result.m_star.tail_spread},
                  {"samples", result.m_star.samples}}},
      {"fit_err_shift", fit_json(result.fit)},
      {"fit_err_raw", fit_json(result.fit_raw)},
      {"identity_refinement", identities},
      {"mass_ode", {{"rms_fine", result.mass_refinement.rms_fine},
                    {"rms_coarse", result.mass_refinement.rms_coarse},
                    {"ratio", finite_or_null(result.mass_refinement.ratio)},
                    {"order", finite_or_null(result.mass_order)}}},
      {"max_zero_mean_ratio", result.max_zero_mean_ratio},
      {"energy_growth_ratio", result.energy_growth_ratio},
      {"integrator", {{"accepted", result.stats.accepted},
                      {"rejected", result.stats.rejected},
                      {"dt_min", result.stats.dt_min},
                      {"dt_max", result.stats.dt_max}}},
      {"checks", result.checks},
  };
  return doc.dump(2) + "\n";
}

std::string sweep_map_csv(const std::vector<SweepPoint>& points) {
  std::string out = fmt::format("# schema_version: {}\n", kSchemaVersion);
  out += "alpha,beta,region,status,slope,r_squared,m_star,note\n";
  for (const auto& p : points)
    out += fmt::format("{},{},{},{},{},{},{},{}\n", num(p.alpha), num(p.beta), to_string(p.region),
                       p.status, opt_num(p.slope), opt_num(p.r_squared), opt_num(p.m_star),
                       csv_cell(p.note));
  return out;
}

std::string verify_report_json(const std::string& suite, const std::vector<CheckResult>& checks) {
  json items = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    items.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"value", finite_or_null(c.value)},
                     {"threshold", finite_or_null(c.threshold)},
                     {"detail", c.detail}});
  }
  const json doc = {
      {"schema_version", kSchemaVersion}, {"suite", suite}, {"passed", all}, {"checks", items}};
  return doc.dump(2) + "\n";
}

std::string metadata_json(const std::string& command) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const json doc = {{"schema_version", kSchemaVersion},
                    {"command", command},
                    {"created_utc", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now)}};
  return doc.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidConfigError(fmt::format("cannot write '{}'", path));
  out << text;
}

void write_run_outputs(const RunResult& result, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_text((dir / "config.json").string(), config_to_json(result.config));
  write_text((dir / "summary.json").string(), summary_json(result));
  const auto& formats = result.config.formats;
  if (std::find(formats.begin(), formats.end(), "csv") != formats.end())
    write_text((dir / "energy.csv").string(), energy_table_csv(result));
  if (std::find(formats.begin(), formats.end(), "json") != formats.end())
    write_text((dir / "snapshots.json").string(), snapshots_json(result));
  write_text((dir / "metadata.json").string(), metadata_json("simulate"));
}

SummaryView parse_summary(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfigError(fmt::format("summary is not valid JSON: {}", e.what()));
  }
  if (!doc.is_object() || !doc.contains("schema_version") || !doc["schema_version"].is_string())
    throw SchemaVersionError("summary carries no schema_version");
  SummaryView view;
  view.schema_version = doc["schema_version"].get<std::string>();
  check_schema_version(view.schema_version);
  view.region = doc.value("region", "");
  view.exploratory = doc.value("exploratory", false);
  if (doc.contains("m_star")) view.m_star = doc["m_star"].value("value", 0.0);
  if (doc.contains("fit_err_shift") && doc["fit_err_shift"].is_object()) {
    view.slope = doc["fit_err_shift"]["slope"].get<double>();
    view.r_squared = doc["fit_err_shift"]["r_squared"].get<double>();
  }
  if (doc.contains("checks"))
    for (const auto& [k, v] : doc["checks"].items()) view.checks[k] = v.get<bool>();
  return view;
}

SummaryView read_summary(const std::string& path) { return parse_summary(read_file(path)); }

Table parse_table(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  constexpr std::string_view prefix = "# schema_version: ";
  if (!std::getline(in, line) || line.rfind(prefix, 0) != 0)
    throw SchemaVersionError("table carries no schema_version line");
  Table table;
  table.schema_version = line.substr(prefix.size());
  check_schema_version(table.schema_version);
  if (std::getline(in, line)) table.header = split(line, ',');
  while (std::getline(in, line))
    if (!line.empty()) table.rows.push_back(split(line, ','));
  return table;
}

Table read_table(const std::string& path) { return parse_table(read_file(path)); }

}  // namespace beamlab
