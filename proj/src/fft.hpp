#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace selfaccel::detail {

// FFTW's planner is not thread-safe; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place forward/backward transform pair over an owned aligned buffer.
/// FFTW_ESTIMATE keeps plans (and therefore results) deterministic.
class FftPair {
 public:
  explicit FftPair(int n) : n_(n) {
    std::lock_guard lock(fftw_planner_mutex());
    buffer_ = fftw_alloc_complex(n);
    forward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward_) fftw_destroy_plan(forward_);
    if (backward_) fftw_destroy_plan(backward_);
    if (buffer_) fftw_free(buffer_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  int size() const { return n_; }
  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buffer_); }
  void forward() { fftw_execute(forward_); }
  /// Unnormalised; caller divides by n.
  void backward() { fftw_execute(backward_); }

 private:
  int n_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace selfaccel::detail
