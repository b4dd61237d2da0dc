#pragma once

// Thin RAII layer over FFTW for in-place multidimensional complex transforms.
// FFTW's planner is not re-entrant, so planning and destruction are serialized;
// executing distinct plans concurrently is safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace hcross::detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

enum class FftDirection : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

class FftPlan {
 public:
  FftPlan(std::span<std::complex<double>> data, std::span<const std::size_t> sizes, FftDirection dir) {
    std::vector<int> n(sizes.begin(), sizes.end());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, static_cast<int>(dir), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fftw: failed to create plan");
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }

  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

/// Unnormalized in-place transform of a row-major tensor (axis 0 slowest).
inline void fft_inplace(std::vector<std::complex<double>>& data, std::span<const std::size_t> sizes,
                        FftDirection dir) {
  if (data.empty()) return;
  FftPlan plan(data, sizes, dir);
  plan.execute();
}

}  // namespace hcross::detail
