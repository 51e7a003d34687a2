#include "symflow/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace symflow {

Fft::Fft(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("Fft dim must be 2 or 3");
  if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft size must be a power of two");
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(n);
  buf_.resize(size_);
  auto* raw = reinterpret_cast<fftw_complex*>(buf_.data());
  // Plans are bound to the internal buffer; ESTIMATE keeps the chosen
  // algorithm independent of runtime measurements (bit-reproducible runs).
  if (dim == 2) {
    fwd_ = fftw_plan_dft_2d(n, n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n, n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    fwd_ = fftw_plan_dft_3d(n, n, n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_3d(n, n, n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (!fwd_ || !bwd_) throw std::runtime_error("FFTW plan creation failed");
}

Fft::~Fft() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::run(void* plan, std::vector<Cplx>& data, double scale) const {
  if (data.size() != size_) throw std::invalid_argument("Fft data size mismatch");
  std::memcpy(buf_.data(), data.data(), size_ * sizeof(Cplx));
  fftw_execute(static_cast<fftw_plan>(plan));
  if (scale == 1.0) {
    std::memcpy(data.data(), buf_.data(), size_ * sizeof(Cplx));
  } else {
    for (std::size_t i = 0; i < size_; ++i) data[i] = buf_[i] * scale;
  }
}

void Fft::forward(std::vector<Cplx>& data) const { run(fwd_, data, 1.0); }

void Fft::backward(std::vector<Cplx>& data) const {
  run(bwd_, data, 1.0 / static_cast<double>(size_));
}

const Fft& shared_fft(int dim, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<Fft>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, n}];
  if (!slot) slot = std::make_unique<Fft>(dim, n);
  return *slot;
}

}  // namespace symflow
