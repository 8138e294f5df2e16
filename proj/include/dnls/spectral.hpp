#pragma once

// Periodic spectral grid standing in for the real line, with the unitary
// Fourier transform
//
//   f^(xi) = (2 pi)^{-1/2} \int e^{-i x xi} f(x) dx
//
// discretized on x_k = -L/2 + k dx and xi_m = 2 pi m / L, m = -n/2 .. n/2-1.

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace dnls {

using Complex = std::complex<double>;

namespace detail {
class FftPlan;
}

class Grid {
public:
  Grid(std::size_t n, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  /// Frequency spacing 2 pi / L.
  double dxi() const noexcept;

  std::span<const double> x() const noexcept { return data_->x; }
  /// Ascending frequencies; xi()[0] is the unpaired mode -n/2 * dxi.
  std::span<const double> xi() const noexcept { return data_->xi; }

  const detail::FftPlan& fft() const noexcept { return *data_->plan; }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

private:
  struct Data {
    std::vector<double> x;
    std::vector<double> xi;
    std::shared_ptr<const detail::FftPlan> plan;
  };
  std::size_t n_;
  double length_;
  std::shared_ptr<const Data> data_;
};

Grid make_grid(std::size_t n, double length);

enum class Side { space, frequency };

const char* to_string(Side side) noexcept;

/// Samples of one complex function on a grid, tagged with the side they live on.
class ComplexField {
public:
  ComplexField(Grid grid, Side side);
  ComplexField(Grid grid, Side side, std::vector<Complex> values);

  const Grid& grid() const noexcept { return grid_; }
  Side side() const noexcept { return side_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  /// Sample spacing on this field's side (dx or dxi).
  double spacing() const noexcept;

  /// Throws SimulationError naming `where` if any sample is NaN/Inf.
  void require_finite(const char* where) const;

  ComplexField& operator*=(Complex s);

  friend bool operator==(const ComplexField&, const ComplexField&) = default;

private:
  Grid grid_;
  Side side_;
  std::vector<Complex> values_;
};

ComplexField forward_ft(const ComplexField& f);
ComplexField inverse_ft(const ComplexField& g);

/// U(t) = exp(i t/2 d_x^2), applied as the multiplier exp(-i t xi^2 / 2).
ComplexField free_propagate(const ComplexField& f, double t);

double l2_norm(const ComplexField& f);
double sup_norm(const ComplexField& f);

/// ||J f|| with J = x + i t d_x, computed through U(t) x U(-t).
double j_norm(const ComplexField& f, double t);

ComplexField gaussian_profile(const Grid& grid, Complex amplitude, double width,
                              double center, double wavenumber);

namespace detail {

/// Thin FFTW wrapper. Transforms run in a per-thread aligned scratch buffer.
class FftPlan {
public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// Unnormalized DFT, out[m] = sum_k in[k] e^{-2 pi i k m / n}.
  void forward(const Complex* in, Complex* out) const;
  /// Unnormalized inverse DFT, out[k] = sum_m in[m] e^{+2 pi i k m / n}.
  void backward(const Complex* in, Complex* out) const;

  std::size_t size() const noexcept { return n_; }
  /// This thread's n-sample work buffer; the *_in_scratch calls transform it in place.
  Complex* scratch() const;
  void forward_in_scratch() const;
  void backward_in_scratch() const;

private:
  std::size_t n_;
  void* fwd_;
  void* bwd_;
};

/// Space samples -> ascending-frequency samples, in-place capable via scratch.
void forward_transform(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);
void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<Complex> out);

}  // namespace detail

}  // namespace dnls
