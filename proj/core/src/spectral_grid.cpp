#include "beamlab/spectral_grid.hpp"

#include <fftw3.h>
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace detail {

// FFTW planning is not thread safe; execution through the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftPlans {
  explicit FftPlans(std::size_t n) : n(n) {
    std::lock_guard lock(planner_mutex());
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    const int ni = static_cast<int>(n);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    r2c = fftw_plan_dft_r2c_1d(ni, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
    c2r = fftw_plan_dft_c2r_1d(ni, c, real.data(),
                               FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  std::size_t n;
  fftw_plan r2c;
  fftw_plan c2r;
};

namespace {

std::shared_ptr<const FftPlans> plans_for(std::size_t n) {
  static std::mutex cache_mutex;
  static std::vector<std::weak_ptr<const FftPlans>> cache;
  std::lock_guard lock(cache_mutex);
  for (auto& weak : cache) {
    if (auto p = weak.lock(); p && p->n == n) return p;
  }
  auto p = std::make_shared<const FftPlans>(n);
  std::erase_if(cache, [](const auto& w) { return w.expired(); });
  cache.push_back(p);
  return p;
}

}  // namespace
}  // namespace detail

Grid::Grid(double half_width, std::size_t n) : half_width_(half_width), n_(n) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidConfigError(fmt::format("grid half-width must be positive, got {}", half_width));
  if (n < 4 || !std::has_single_bit(n))
    throw InvalidConfigError(fmt::format("grid size must be a power of two >= 4, got {}", n));
  spacing_ = 2.0 * half_width / static_cast<double>(n);
  plans_ = detail::plans_for(n);
}

double Grid::wavenumber(std::size_t k) const noexcept {
  return std::numbers::pi * static_cast<double>(k) / half_width_;
}

std::vector<double> Grid::points() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

Spectrum Grid::forward(std::span<const double> values) const {
  Spectrum out(spectrum_size());
  // r2c does not modify its input.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

std::vector<double> Grid::inverse(const Spectrum& spectrum) const {
  Spectrum scratch = spectrum;
  std::vector<double> out(n_);
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / static_cast<double>(n_);
  for (double& v : out) v *= scale;
  return out;
}

Field::Field(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidConfigError(
        fmt::format("field length {} does not match grid size {}", values_.size(), grid_.size()));
}

double Field::sup_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

Field& Field::operator*=(double c) noexcept {
  for (double& v : values_) v *= c;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double c, Field a) { return a *= c; }

Field axpy(const Field& a, double c, const Field& b) {
  Field out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t j = 0; j < o.size(); ++j) o[j] += c * bv[j];
  return out;
}

Spectrum deriv_spectrum(const Grid& grid, const Spectrum& spectrum, int order) {
  Spectrum out(spectrum.size());
  const std::size_t nyquist = grid.size() / 2;
  const std::complex<double> i(0.0, 1.0);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double xi = grid.wavenumber(k);
    std::complex<double> factor = 1.0;
    for (int p = 0; p < order; ++p) factor *= i * xi;
    out[k] = factor * spectrum[k];
  }
  if (order % 2 == 1) out[nyquist] = 0.0;
  return out;
}

Field deriv(const Field& field, int order) {
  if (order < 1 || order > 4)
    throw InvalidConfigError(fmt::format("derivative order must be in 1..4, got {}", order));
  const Grid& g = field.grid();
  return Field(g, g.inverse(deriv_spectrum(g, g.forward(field.values()), order)));
}

std::vector<Field> derivatives(const Field& field, int max_order) {
  const Grid& g = field.grid();
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(max_order) + 1);
  out.push_back(field);
  if (max_order <= 0) return out;
  const Spectrum base = g.forward(field.values());
  for (int order = 1; order <= max_order; ++order)
    out.emplace_back(g, g.inverse(deriv_spectrum(g, base, order)));
  return out;
}

Field antideriv_zero_mean(const Field& field, double reference_scale) {
  const Grid& g = field.grid();
  const double sup = field.sup_norm();
  if (sup == 0.0) return Field(g);
  const double mean = integrate(field) / (2.0 * g.half_width());
  if (std::abs(mean) > 1e-10 * std::max(sup, reference_scale))
    throw ZeroMeanViolationError(fmt::format(
        "antiderivative of a field with mean {:.3e} (sup-norm {:.3e})", mean, sup));

  Spectrum spec = g.forward(field.values());
  const std::complex<double> i(0.0, 1.0);
  spec[0] = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) spec[k] /= i * g.wavenumber(k);
  spec[g.size() / 2] = 0.0;
  std::vector<double> values = g.inverse(spec);
  const double offset = values.front();
  for (double& v : values) v -= offset;
  return Field(g, std::move(values));
}

double integrate(const Field& field) {
  double sum = 0.0;
  for (double v : field.values()) sum += v;
  return sum * field.grid().spacing();
}

double inner(const Field& a, const Field& b, int weight_power) {
  const Grid& g = a.grid();
  auto av = a.values();
  auto bv = b.values();
  double sum = 0.0;
  for (std::size_t j = 0; j < av.size(); ++j) {
    double w = 1.0;
    const double y = g.point(j);
    for (int p = 0; p < weight_power; ++p) w *= y;
    sum += w * av[j] * bv[j];
  }
  return sum * g.spacing();
}

double moment(const Field& field, int power) {
  if (power < 0 || power > 2)
    throw InvalidConfigError(fmt::format("moment power must be in 0..2, got {}", power));
  const Grid& g = field.grid();
  double sum = 0.0;
  auto v = field.values();
  for (std::size_t j = 0; j < v.size(); ++j) sum += std::pow(g.point(j), power) * v[j];
  return sum * g.spacing();
}

double weighted_norm(const Field& field, int k, double m) {
  if (k < 0 || k > 3)
    throw InvalidConfigError(fmt::format("weighted norm order must be in 0..3, got {}", k));
  const Grid& g = field.grid();
  std::vector<double> weight(g.size());
  for (std::size_t j = 0; j < weight.size(); ++j) weight[j] = std::pow(1.0 + std::abs(g.point(j)), m);
  double total = 0.0;
  for (const Field& d : derivatives(field, k)) {
    double sum = 0.0;
    auto v = d.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double wv = weight[j] * v[j];
      sum += wv * wv;
    }
    total += std::sqrt(sum * g.spacing());
  }
  return total;
}

double spectral_square_integral(const Field& field) {
  const Grid& g = field.grid();
  const Spectrum s = g.forward(field.values());
  const std::size_t n = g.size();
  double sum = std::norm(s[0]) + std::norm(s[n / 2]);
  for (std::size_t k = 1; k < n / 2; ++k) sum += 2.0 * std::norm(s[k]);
  return sum * g.spacing() / static_cast<double>(n);
}

std::vector<double> interpolate_uniform(const Grid& grid, const Spectrum& spectrum, double x0,
                                        double dx, std::size_t count, double prune) {
  const std::size_t n = grid.size();
  const std::size_t nyquist = n / 2;
  std::vector<double> out(count, 0.0);
  double largest = 0.0;
  for (const auto& c : spectrum) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return out;
  const double threshold = prune * largest;
  const double inv_n = 1.0 / static_cast<double>(n);
  // Phases are measured from the first grid point -L.
  const double shift = x0 + grid.half_width();

  for (std::size_t k = 0; k <= nyquist; ++k) {
    const std::complex<double> c = spectrum[k];
    if (std::abs(c) <= threshold) continue;
    const double xi = grid.wavenumber(k);
    const double weight = (k == 0 || k == nyquist) ? inv_n : 2.0 * inv_n;
    if (k == nyquist) {
      for (std::size_t j = 0; j < count; ++j)
        out[j] += weight * c.real() * std::cos(xi * (shift + static_cast<double>(j) * dx));
      continue;
    }
    // Rotate e^{i xi x_j} along j, re-anchoring periodically to bound drift.
    const std::complex<double> rot = std::polar(1.0, xi * dx);
    std::complex<double> z;
    for (std::size_t j = 0; j < count; ++j) {
      if (j % 64 == 0) z = std::polar(1.0, xi * (shift + static_cast<double>(j) * dx));
      out[j] += weight * (c.real() * z.real() - c.imag() * z.imag());
      z *= rot;
    }
  }
  return out;
}

}  // namespace beamlab
