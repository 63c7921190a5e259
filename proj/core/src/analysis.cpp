#include "beamlab/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamlab/errors.hpp"
#include "beamlab/scaling.hpp"

namespace beamlab {

MStarEstimate estimate_m_star(const std::vector<SeriesPoint>& m_series,
                              std::optional<std::pair<double, double>> window) {
  if (m_series.size() < 8)
    throw InsufficientDataError(
        fmt::format("m* estimate needs at least 8 samples, got {}", m_series.size()));
  std::vector<double> tail;
  if (window) {
    for (const auto& p : m_series)
      if (p.s >= window->first && p.s <= window->second) tail.push_back(p.value);
  } else {
    const std::size_t start = m_series.size() - m_series.size() / 4;
    for (std::size_t i = start; i < m_series.size(); ++i) tail.push_back(m_series[i].value);
  }
  if (tail.empty()) throw InsufficientDataError("no m samples inside the m* window");
  double sum = 0.0;
  for (double v : tail) sum += v;
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return {sum / static_cast<double>(tail.size()), *hi - *lo, tail.size()};
}

ProfileError profile_error(const PhysicalState& state, double m_star,
                           const CoefficientModel& model, bool require_raw) {
  const double R = big_R(model, state.t);
  const Grid& g = state.u.grid();
  auto l2_gap = [&](double time) {
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double d = state.u[j] - m_star * heat_kernel(time, g.point(j));
      sum += d * d;
    }
    return std::sqrt(sum * g.spacing());
  };
  ProfileError out{l2_gap(R + 1.0), std::nullopt};
  if (R > 0.0) {
    out.err_raw = l2_gap(R);
  } else if (require_raw) {
    throw UndefinedProfileError("G(R(t), .) is singular at R(t) = 0");
  }
  return out;
}

double scaled_profile_error(double s, const Field& v, double m_star) {
  const Field gap = axpy(v, -m_star, profile_phi(v.grid()));
  return std::exp(-0.25 * s) * std::sqrt(inner(gap, gap));
}

double gaussian_difference_norm(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw UndefinedProfileError("heat kernels need positive times");
  const double pi = std::numbers::pi;
  const double sq = 1.0 / std::sqrt(8.0 * pi * t1) + 1.0 / std::sqrt(8.0 * pi * t2) -
                    2.0 / std::sqrt(4.0 * pi * (t1 + t2));
  return std::sqrt(std::max(sq, 0.0));
}

RateFit fit_decay_rate(const std::vector<SeriesPoint>& err_series,
                       std::pair<double, double> window) {
  if (!(window.first < window.second))
    throw InsufficientDataError(
        fmt::format("fit window [{}, {}] is empty", window.first, window.second));
  std::vector<double> xs, ys;
  for (const auto& p : err_series) {
    if (p.s < window.first || p.s > window.second) continue;
    if (!(p.value > 0.0))
      throw LogDomainError(fmt::format("error value {} at s = {} has no logarithm", p.value, p.s));
    xs.push_back(p.s);
    ys.push_back(std::log(p.value));
  }
  if (xs.size() < 4)
    throw InsufficientDataError(
        fmt::format("rate fit needs at least 4 samples in [{}, {}], got {}", window.first,
                    window.second, xs.size()));
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double r2 = 1.0;
  if (syy > 0.0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - (my + slope * (xs[i] - mx));
      sse += e * e;
    }
    r2 = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return {window.first, window.second, slope, my - slope * mx, r2, xs.size()};
}

HardyResult hardy_check(const Field& f) {
  const Field F = antideriv_zero_mean(f);
  const double lhs = inner(F, F);
  const double rhs = 4.0 * inner(f, f, 2);
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

Field random_mean_zero_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> amp(0.0, 1.0);
  const std::size_t kmax = std::max<std::size_t>(2, grid.size() / 8);
  std::uniform_int_distribution<std::size_t> mode(1, kmax);
  std::uniform_int_distribution<int> count(1, 6);
  std::bernoulli_distribution windowed(0.5);

  const int terms = count(rng);
  std::vector<std::tuple<double, double, double>> modes;
  for (int i = 0; i < terms; ++i) modes.emplace_back(grid.wavenumber(mode(rng)), amp(rng), amp(rng));
  auto trig = [&](double y) {
    double sum = 0.0;
    for (const auto& [xi, a, b] : modes) sum += a * std::cos(xi * y) + b * std::sin(xi * y);
    return sum;
  };
  if (!windowed(rng)) return Field::sample(grid, trig);

  std::uniform_real_distribution<double> width(0.03, 0.15);
  const double sigma = width(rng) * grid.half_width();
  const double offset = 1.0 + std::abs(amp(rng));
  Field window = Field::sample(grid, [&](double y) {
    return std::exp(-y * y / (2.0 * sigma * sigma)) * (offset + trig(y));
  });
  return deriv(window, 1);
}

}  // namespace beamlab
