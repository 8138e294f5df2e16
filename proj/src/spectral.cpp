#include "dnls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dnls/errors.hpp"

namespace dnls {

namespace detail {
std::shared_ptr<const FftPlan> shared_plan(std::size_t n);
}

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void require_side(const ComplexField& f, Side expected, const char* op) {
  if (f.side() != expected) {
    throw InvalidArgument(std::string(op) + ": expected a " + to_string(expected) +
                          "-side field, got " + to_string(f.side()));
  }
}

}  // namespace

Grid::Grid(std::size_t n, double length) : n_(n), length_(length) {
  if (n < 16 || !is_power_of_two(n)) {
    throw InvalidArgument("grid size " + std::to_string(n) + " is not a power of two >= 16");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw InvalidArgument("grid length must be positive and finite");
  }
  auto data = std::make_shared<Data>();
  data->x.resize(n);
  data->xi.resize(n);
  const double h = dx();
  const double dk = dxi();
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t k = 0; k < n; ++k) {
    data->x[k] = -0.5 * length + static_cast<double>(k) * h;
    data->xi[k] = dk * static_cast<double>(static_cast<std::ptrdiff_t>(k) - half);
  }
  data->plan = detail::shared_plan(n);
  data_ = std::move(data);
}

double Grid::dxi() const noexcept { return 2.0 * std::numbers::pi / length_; }

Grid make_grid(std::size_t n, double length) { return Grid(n, length); }

const char* to_string(Side side) noexcept {
  return side == Side::space ? "space" : "frequency";
}

ComplexField::ComplexField(Grid grid, Side side)
    : grid_(std::move(grid)), side_(side), values_(grid_.size(), Complex{}) {}

ComplexField::ComplexField(Grid grid, Side side, std::vector<Complex> values)
    : grid_(std::move(grid)), side_(side), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("field has " + std::to_string(values_.size()) +
                          " samples for a grid of " + std::to_string(grid_.size()));
  }
}

double ComplexField::spacing() const noexcept {
  return side_ == Side::space ? grid_.dx() : grid_.dxi();
}

void ComplexField::require_finite(const char* where) const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i].real()) || !std::isfinite(values_[i].imag())) {
      throw SimulationError(std::string(where) + ": non-finite sample at index " +
                            std::to_string(i));
    }
  }
}

ComplexField& ComplexField::operator*=(Complex s) {
  for (auto& v : values_) v *= s;
  return *this;
}

namespace detail {

// With x_k = -L/2 + k dx and xi_m = 2 pi m / L, e^{-i x_k xi_m} = (-1)^m e^{-2 pi i k m / n}.
// The ascending index j = m + n/2 is the DFT bin shifted by n/2; since n/2 is
// even, (-1)^m = (-1)^j.
void forward_transform(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  Complex* bins = grid.fft().scratch();
  std::copy(in.begin(), in.end(), bins);
  grid.fft().forward_in_scratch();
  const double scale = grid.dx() * kInvSqrt2Pi;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t q = j < half ? j + half : j - half;
    const double sign = (j % 2 == 0) ? scale : -scale;
    out[j] = sign * bins[q];
  }
}

void inverse_transform(const Grid& grid, std::span<const Complex> in, std::span<Complex> out) {
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  Complex* bins = grid.fft().scratch();
  const double scale = grid.dxi() * kInvSqrt2Pi;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t q = j < half ? j + half : j - half;
    bins[q] = (j % 2 == 0) ? scale * in[j] : -scale * in[j];
  }
  grid.fft().backward_in_scratch();
  std::copy(bins, bins + n, out.begin());
}

}  // namespace detail

ComplexField forward_ft(const ComplexField& f) {
  require_side(f, Side::space, "forward_ft");
  ComplexField out(f.grid(), Side::frequency);
  detail::forward_transform(f.grid(), f.values(), out.values());
  out.require_finite("forward_ft");
  return out;
}

ComplexField inverse_ft(const ComplexField& g) {
  require_side(g, Side::frequency, "inverse_ft");
  ComplexField out(g.grid(), Side::space);
  detail::inverse_transform(g.grid(), g.values(), out.values());
  out.require_finite("inverse_ft");
  return out;
}

ComplexField free_propagate(const ComplexField& f, double t) {
  require_side(f, Side::space, "free_propagate");
  if (!std::isfinite(t)) throw InvalidArgument("free_propagate: non-finite time");
  if (t == 0.0) return f;
  auto spectrum = forward_ft(f);
  const auto xi = f.grid().xi();
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    spectrum[j] *= std::polar(1.0, -0.5 * t * xi[j] * xi[j]);
  }
  return inverse_ft(spectrum);
}

double l2_norm(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return std::sqrt(sum * f.spacing());
}

double sup_norm(const ComplexField& f) {
  double best = 0.0;
  for (const auto& v : f.values()) best = std::max(best, std::abs(v));
  return best;
}

double j_norm(const ComplexField& f, double t) {
  require_side(f, Side::space, "j_norm");
  // ||U(t) x U(-t) f|| = ||x U(-t) f|| since U(t) is unitary.
  auto back = free_propagate(f, -t);
  const auto x = f.grid().x();
  double sum = 0.0;
  for (std::size_t k = 0; k < back.size(); ++k) sum += x[k] * x[k] * std::norm(back[k]);
  return std::sqrt(sum * f.grid().dx());
}

ComplexField gaussian_profile(const Grid& grid, Complex amplitude, double width, double center,
                              double wavenumber) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian_profile: width must be positive");
  ComplexField out(grid, Side::space);
  const auto x = grid.x();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double s = (x[k] - center) / width;
    out[k] = amplitude * std::exp(-0.5 * s * s) * std::polar(1.0, wavenumber * x[k]);
  }
  out.require_finite("gaussian_profile");
  return out;
}

}  // namespace dnls
