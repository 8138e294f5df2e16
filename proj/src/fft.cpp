#include "dnls/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace dnls::detail {

namespace {

// FFTW's planner is not thread-safe; execution on caller arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(n);
  const int len = static_cast<int>(n);
  // ESTIMATE keeps the plan, and so the round-off, identical from run to run.
  fwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  if (fwd_ == nullptr || bwd_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

Complex* FftPlan::scratch() const {
  // Plans are in-place on SIMD-aligned storage; each thread gets its own buffer.
  struct Buffer {
    fftw_complex* data = nullptr;
    std::size_t size = 0;
    ~Buffer() { fftw_free(data); }
  };
  thread_local std::map<std::size_t, Buffer> buffers;
  auto& b = buffers[n_];
  if (b.data == nullptr) {
    b.data = fftw_alloc_complex(n_);
    b.size = n_;
  }
  return reinterpret_cast<Complex*>(b.data);
}

void FftPlan::forward_in_scratch() const {
  auto* buf = reinterpret_cast<fftw_complex*>(scratch());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), buf, buf);
}

void FftPlan::backward_in_scratch() const {
  auto* buf = reinterpret_cast<fftw_complex*>(scratch());
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), buf, buf);
}

void FftPlan::forward(const Complex* in, Complex* out) const {
  auto* buf = scratch();
  std::copy(in, in + n_, buf);
  forward_in_scratch();
  std::copy(buf, buf + n_, out);
}

void FftPlan::backward(const Complex* in, Complex* out) const {
  auto* buf = scratch();
  std::copy(in, in + n_, buf);
  backward_in_scratch();
  std::copy(buf, buf + n_, out);
}

std::shared_ptr<const FftPlan> shared_plan(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::weak_ptr<const FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto existing = cache[n].lock()) return existing;
  auto plan = std::make_shared<const FftPlan>(n);
  cache[n] = plan;
  return plan;
}

}  // namespace dnls::detail
