#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "nskp/spectral/grid.hpp"

namespace nskp::fft {

namespace detail {

// FFTW plans for one (dim, n) shape. Planned with FFTW_ESTIMATE so planning
// never touches caller data and results are reproducible run to run.
class PlanPair {
 public:
  PlanPair(int dim, int n) {
    const Grid g(dim, n, 1.0);
    double* in = fftw_alloc_real(g.real_size());
    fftw_complex* out = fftw_alloc_complex(g.spectral_size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 2) {
      forward_ = fftw_plan_dft_r2c_2d(n, n, in, out, flags);
      backward_ = fftw_plan_dft_c2r_2d(n, n, out, in, flags);
    } else {
      forward_ = fftw_plan_dft_r2c_3d(n, n, n, in, out, flags);
      backward_ = fftw_plan_dft_c2r_3d(n, n, n, out, in, flags);
    }
    fftw_free(in);
    fftw_free(out);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  fftw_plan forward() const noexcept { return forward_; }
  fftw_plan backward() const noexcept { return backward_; }

 private:
  fftw_plan forward_;
  fftw_plan backward_;
};

inline const PlanPair& plans(const Grid& g) {
  // The FFTW planner is not thread safe; execution of an existing plan is.
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{g.dim(), g.n()}];
  if (!slot) slot = std::make_unique<PlanPair>(g.dim(), g.n());
  return *slot;
}

}  // namespace detail

/// Real values -> normalized half-spectrum coefficients (c_k = (1/N) sum f e^{-ikx}).
inline void forward(const Grid& g, std::span<const double> values,
                    std::span<std::complex<double>> coeffs) {
  const auto& p = detail::plans(g);
  // r2c out-of-place preserves its input.
  fftw_execute_dft_r2c(p.forward(), const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(coeffs.data()));
  const double scale = 1.0 / static_cast<double>(g.real_size());
  for (auto& c : coeffs) c *= scale;
}

/// Normalized half-spectrum coefficients -> real values.
inline void backward(const Grid& g, std::span<const std::complex<double>> coeffs,
                     std::span<double> values) {
  const auto& p = detail::plans(g);
  // Multi-dimensional c2r destroys its input, so work on a copy.
  std::vector<std::complex<double>> scratch(coeffs.begin(), coeffs.end());
  fftw_execute_dft_c2r(p.backward(), reinterpret_cast<fftw_complex*>(scratch.data()),
                       values.data());
}

}  // namespace nskp::fft
