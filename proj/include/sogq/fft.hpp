#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace sogq {

using cplx = std::complex<double>;

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const { return true; }
};

template <class T>
using aligned_vector = std::vector<T, FftwAllocator<T>>;

/// Batched real-to-complex transform of `howmany` contiguous row-major arrays of shape dims.
/// forward: unnormalized; backward: unnormalized (callers divide by the element count).
class RealFft {
 public:
  RealFft(std::vector<int> dims, int howmany = 1) : dims_(std::move(dims)), howmany_(howmany) {
    if (dims_.empty() || howmany < 1) throw std::invalid_argument("bad FFT shape");
    real_n_ = 1;
    for (int d : dims_) {
      if (d < 1) throw std::invalid_argument("FFT dimension must be positive");
      real_n_ *= static_cast<std::size_t>(d);
    }
    complex_n_ = real_n_ / dims_.back() * (dims_.back() / 2 + 1);
    real_.resize(real_n_ * howmany_);
    spec_.resize(complex_n_ * howmany_);
    std::lock_guard lock(detail::fftw_planner_mutex());
    const int rank = static_cast<int>(dims_.size());
    auto* sp = reinterpret_cast<fftw_complex*>(spec_.data());
    fwd_ = fftw_plan_many_dft_r2c(rank, dims_.data(), howmany_, real_.data(), nullptr, 1, static_cast<int>(real_n_),
                                  sp, nullptr, 1, static_cast<int>(complex_n_), FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft_c2r(rank, dims_.data(), howmany_, sp, nullptr, 1, static_cast<int>(complex_n_),
                                  real_.data(), nullptr, 1, static_cast<int>(real_n_), FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw std::runtime_error("FFTW planning failed");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
  }

  const std::vector<int>& dims() const { return dims_; }
  int batch() const { return howmany_; }
  std::size_t real_size() const { return real_n_; }
  std::size_t complex_size() const { return complex_n_; }

  double* real_data() { return real_.data(); }
  cplx* spectrum_data() { return spec_.data(); }

  void forward() { fftw_execute(fwd_); }
  /// Overwrites the spectrum buffer.
  void backward() { fftw_execute(bwd_); }

 private:
  std::vector<int> dims_;
  int howmany_;
  std::size_t real_n_ = 0, complex_n_ = 0;
  aligned_vector<double> real_;
  aligned_vector<cplx> spec_;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

/// Signed frequency index for position n of an axis of length I.
inline int signed_frequency(int n, int I) { return n < (I + 1) / 2 ? n : n - I; }

}  // namespace sogq
