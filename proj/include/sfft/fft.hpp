#pragma once

#include <span>
#include <vector>

#include "sfft/core.hpp"

namespace sfft {

// Transform convention: the forward 2D DFT carries no scaling,
//   X[i,j] = sum_{u,v} x[u,v] * w^(iu + jv),   w = exp(-2 pi i / N),
// and the inverse carries 1/N^2, so ifft2d(fft2d(x)) == x.

/// Precomputed twiddles and bit-reversal table for one radix-2 length.
class FftPlan {
 public:
  explicit FftPlan(int n);

  int size() const { return n_; }

  // In place, unscaled in both directions.
  void forward(std::span<Complex> a) const { run(a, false); }
  void inverse(std::span<Complex> a) const { run(a, true); }

 private:
  void run(std::span<Complex> a, bool inverse) const;

  int n_;
  std::vector<Complex> twiddle_;  // exp(-2 pi i k / n), k < n/2
  std::vector<int> bitrev_;
};

/// Straight evaluation of the 2D DFT definition, O(N^4). Oracle only.
ComplexMatrix dft2d_naive(const ComplexMatrix& x);

/// Row-column radix-2 2D FFT. The side must be a power of two.
ComplexMatrix fft2d(const ComplexMatrix& x, int threads = 1);

/// Inverse of fft2d, including the 1/N^2 factor.
ComplexMatrix ifft2d(const ComplexMatrix& xhat, int threads = 1);

}  // namespace sfft
