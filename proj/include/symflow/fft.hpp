#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace symflow {

using Cplx = std::complex<double>;

// Thin complex-to-complex FFTW wrapper for N^dim cubes, x-fastest layout
// (index ix + N*(iy + N*iz)). Plans are created with FFTW_ESTIMATE so the
// transform is deterministic across runs and machines with the same FFTW.
// forward() leaves coefficients unnormalized; backward() divides by N^dim.
class Fft {
 public:
  Fft(int dim, int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  void forward(std::vector<Cplx>& data) const;
  void backward(std::vector<Cplx>& data) const;

  int dim() const { return dim_; }
  int n() const { return n_; }
  std::size_t size() const { return size_; }

 private:
  void run(void* plan, std::vector<Cplx>& data, double scale) const;

  int dim_;
  int n_;
  std::size_t size_;
  mutable std::vector<Cplx> buf_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
};

// Signed integer frequency for mode index k on an N-point axis: k for
// k <= N/2, k - N above (the Nyquist mode N/2 keeps +N/2).
inline int freq_index(int k, int n) { return k <= n / 2 ? k : k - n; }

// Process-wide plan cache keyed by (dim, n). Instances are not safe for
// concurrent use; callers transform from one thread at a time.
const Fft& shared_fft(int dim, int n);

}  // namespace symflow
