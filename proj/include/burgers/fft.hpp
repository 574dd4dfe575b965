#pragma once

// Thin RAII wrapper over FFTW's real-to-complex transforms.

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "errors.hpp"

namespace burgers {

using cplx = std::complex<double>;

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Forward transform is unnormalized; inverse divides by n.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    if (n < 2) throw ValidationError("RealFft: size must be at least 2");
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    if (!real_ || !spec_) throw NumericError("RealFft: allocation failed");
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }

  int size() const { return n_; }
  int modes() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<cplx> out) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(fwd_);
    for (int m = 0; m < modes(); ++m) out[m] = {spec_[m][0], spec_[m][1]};
  }

  std::vector<cplx> forward(std::span<const double> in) {
    std::vector<cplx> out(modes());
    forward(in, out);
    return out;
  }

  void inverse(std::span<const cplx> in, std::span<double> out) {
    for (int m = 0; m < modes(); ++m) {
      spec_[m][0] = in[m].real();
      spec_[m][1] = in[m].imag();
    }
    fftw_execute(bwd_);
    const double s = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out[j] = real_[j] * s;
  }

  std::vector<double> inverse(std::span<const cplx> in) {
    std::vector<double> out(n_);
    inverse(in, out);
    return out;
  }

 private:
  int n_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// Per-thread cache so repeated diagnostics do not re-plan.
inline RealFft& fft_for(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

}  // namespace burgers
