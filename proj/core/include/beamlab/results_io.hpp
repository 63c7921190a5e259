#pragma once

// Result files: config echo, energy table (CSV), snapshots and summary (JSON),
// sweep map (CSV), verify report (JSON). Every file carries schema_version;
// timestamps live only in the metadata sidecar so result files are byte-stable.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beamlab/pipeline.hpp"

namespace beamlab {

inline constexpr std::string_view kSchemaVersion = "1.0";
inline constexpr int kSchemaMajor = 1;

/// Throws SchemaVersionError unless the major component equals kSchemaMajor.
void check_schema_version(std::string_view version);

struct SweepPoint {
  double alpha = 0;
  double beta = 0;
  RegionLabel region = RegionLabel::Boundary;
  std::string status;  // theorem_pass, theorem_fail, exploratory, failed
  std::optional<double> slope;
  std::optional<double> r_squared;
  std::optional<double> m_star;
  std::string note;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0;
  double threshold = 0;
  std::string detail;
};

std::string energy_table_csv(const RunResult& result);
std::string snapshots_json(const RunResult& result);
std::string summary_json(const RunResult& result);
std::string sweep_map_csv(const std::vector<SweepPoint>& points);
std::string verify_report_json(const std::string& suite, const std::vector<CheckResult>& checks);
std::string metadata_json(const std::string& command);

/// Writes config.json, summary.json, energy.csv (format csv), snapshots.json
/// (format json) and metadata.json into out_dir, creating it if needed.
void write_run_outputs(const RunResult& result, const std::string& out_dir);
void write_text(const std::string& path, const std::string& text);

struct SummaryView {
  std::string schema_version;
  std::string region;
  bool exploratory = false;
  double m_star = 0;
  std::optional<double> slope;
  std::optional<double> r_squared;
  std::map<std::string, bool> checks;
};

struct Table {
  std::string schema_version;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

SummaryView parse_summary(const std::string& json_text);
SummaryView read_summary(const std::string& path);
/// First line "# schema_version: X.Y", then a header row and data rows.
Table parse_table(const std::string& csv_text);
Table read_table(const std::string& path);

}  // namespace beamlab
