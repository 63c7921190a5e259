#include "beamlab/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <thread>

#include "beamlab/errors.hpp"
#include "beamlab/pipeline.hpp"

namespace beamlab {

namespace {

double parse_number(std::string_view token, const std::string& text) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw InvalidConfigError(fmt::format("malformed range '{}': expected start:stop:count", text));
  return value;
}

SweepPoint run_point(double alpha, double beta, const RunConfig& base) {
  SweepPoint point;
  point.alpha = alpha;
  point.beta = beta;
  point.region = classify_region(alpha, beta);
  RunConfig config = base;
  config.alpha = alpha;
  config.beta = beta;
  try {
    const RunResult result = run_simulation(config, {.force = true, .keep_fields = false});
    point.m_star = result.m_star.m_star;
    if (result.fit) {
      point.slope = result.fit->slope;
      point.r_squared = result.fit->r_squared;
    }
    if (result.exploratory)
      point.status = "exploratory";
    else
      point.status = result.checks.at("rate") ? "theorem_pass" : "theorem_fail";
    for (const auto& n : result.notes) {
      if (!point.note.empty()) point.note += "; ";
      point.note += n;
    }
  } catch (const std::exception& e) {
    point.status = "failed";
    point.note = e.what();
  }
  return point;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw InvalidConfigError(fmt::format("malformed range '{}': expected start:stop:count", text));
  const std::string_view view(text);
  const double start = parse_number(view.substr(0, first), text);
  const double stop = parse_number(view.substr(first + 1, second - first - 1), text);
  const std::string_view count_text = view.substr(second + 1);
  long long count = 0;
  const auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
  if (count_text.empty() || ec != std::errc() || ptr != count_text.data() + count_text.size() || count < 1)
    throw InvalidConfigError(fmt::format("malformed range '{}': count must be a positive integer", text));
  if (count == 1) {
    if (start != stop)
      throw InvalidConfigError(fmt::format("malformed range '{}': count 1 requires start == stop", text));
    return {start};
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<SweepPoint> run_sweep(const std::vector<double>& alphas, const std::vector<double>& betas,
                                  const RunConfig& base, std::size_t workers) {
  if (alphas.empty() || betas.empty()) throw InvalidConfigError("sweep alpha and beta lists must be nonempty");
  if (workers == 0) throw InvalidConfigError("workers must be >= 1");
  const std::size_t total = alphas.size() * betas.size();
  std::vector<SweepPoint> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      rows[i] = run_point(alphas[i / betas.size()], betas[i % betas.size()], base);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < std::min(workers, total); ++w) pool.emplace_back(worker);
  worker();
  return rows;
}

}  // namespace beamlab
