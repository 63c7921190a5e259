#pragma once

// Truncated periodic domain [-L, L) standing in for the real line, with
// Fourier differentiation, antidifferentiation, trigonometric interpolation
// and trapezoid quadrature (spectrally accurate for smooth decaying fields).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace beamlab {

/// Half-spectrum of a real field, FFTW r2c layout, unnormalized (size n/2+1).
using Spectrum = std::vector<std::complex<double>>;

namespace detail {
struct FftPlans;
}

class Grid {
 public:
  /// Requires half_width > 0 and n a power of two (n >= 4).
  Grid(double half_width, std::size_t n);

  double half_width() const noexcept { return half_width_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  double point(std::size_t j) const noexcept {
    return -half_width_ + static_cast<double>(j) * spacing_;
  }
  /// xi_k = pi k / L for k = 0..n/2.
  double wavenumber(std::size_t k) const noexcept;
  std::vector<double> points() const;

  Spectrum forward(std::span<const double> values) const;
  std::vector<double> inverse(const Spectrum& spectrum) const;

  bool same_as(const Grid& other) const noexcept {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  double half_width_;
  std::size_t n_;
  double spacing_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

/// Grid samples of a real function; value semantics.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  template <class F>
  static Field sample(const Grid& grid, F&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.point(j));
    return Field(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  double& operator[](std::size_t j) noexcept { return values_[j]; }

  double sup_norm() const noexcept;
  bool all_finite() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double c) noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double c, Field a);
/// a + c * b
Field axpy(const Field& a, double c, const Field& b);

/// Multiplies by (i xi)^order; the Nyquist mode is zeroed for odd orders.
Spectrum deriv_spectrum(const Grid& grid, const Spectrum& spectrum, int order);

/// Spectral derivative, order in 1..4.
Field deriv(const Field& field, int order);

/// Derivatives 0..max_order sharing a single forward transform.
std::vector<Field> derivatives(const Field& field, int max_order);

/// Antiderivative F(y) = int_{-L}^{y} f for a numerically mean-zero f.
/// Throws ZeroMeanViolationError when |int f| / (2L) > 1e-10 max(sup|f|, reference_scale);
/// reference_scale lets callers measure round-off against the fields f was built from.
Field antideriv_zero_mean(const Field& field, double reference_scale = 0.0);

/// sum_{l<=k} || (1+|y|)^m d^l f ||_{L^2}, k in 0..3.
double weighted_norm(const Field& field, int k, double m);

/// int y^power f dy, power in 0..2.
double moment(const Field& field, int power);

double integrate(const Field& field);
/// int y^weight_power a b dy.
double inner(const Field& a, const Field& b, int weight_power = 0);
/// Parseval-side evaluation of int f^2 from the spectrum.
double spectral_square_integral(const Field& field);

/// Trigonometric interpolant of the field behind `spectrum` evaluated at the
/// uniform points x0 + j dx, j < count. Modes below `prune` times the largest
/// magnitude are skipped.
std::vector<double> interpolate_uniform(const Grid& grid, const Spectrum& spectrum, double x0,
                                        double dx, std::size_t count, double prune = 1e-18);

}  // namespace beamlab
