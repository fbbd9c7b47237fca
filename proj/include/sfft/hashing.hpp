#pragma once

#include <vector>

#include "sfft/core.hpp"
#include "sfft/flat_window.hpp"
#include "sfft/permutation.hpp"
#include "sfft/sparse_spectrum.hpp"

namespace sfft {

/// Space-domain block of a permuted and windowed signal. Sample (a, b) holds
/// space index (origin + a, origin + b) mod N; all other samples are zero.
class WindowedBlock {
 public:
  WindowedBlock(int n, int origin, int width);

  int n() const { return n_; }
  int origin() const { return origin_; }
  int width() const { return width_; }

  Complex& local(int a, int b) { return data_[static_cast<std::size_t>(a) * width_ + b]; }
  const Complex& local(int a, int b) const { return data_[static_cast<std::size_t>(a) * width_ + b]; }

  /// Expands to the full N x N signal (zero outside the support).
  ComplexMatrix to_dense() const;

 private:
  int n_;
  int origin_;
  int width_;
  std::vector<Complex> data_;
};

/// z[u,v] = G[u,v] * x[sigma1*u + tau1, sigma2*v + tau2] over the window
/// support. Reads support^2 samples of x.
WindowedBlock permute_filter(const ComplexMatrix& x, const PermutationParams& p, const FlatWindow& w);

/// y[i,j] = sum of z over every translate (i + B*s, j + B*t). The B x B
/// DFT of y is the (N/B)-strided subsample of the N x N DFT of z.
ComplexMatrix subsample_sum(const WindowedBlock& z, int bins);
ComplexMatrix subsample_sum(const ComplexMatrix& z, int bins);

/// permute_filter, subsample_sum and the B x B fft2d in one pass; returns
/// the bin spectrum. Same result as the three steps composed, without the
/// intermediate block.
ComplexMatrix hash_to_bins(const ComplexMatrix& x, const PermutationParams& p, const FlatWindow& w);

/// Bin of a permuted frequency along one axis: round(t * B / N) mod B,
/// rounding half up.
int bin_of(std::int64_t permuted, int n, int bins);

/// Bin of frequency (i, j) under p, hashing each axis separately.
Coord hash_coord(int i, int j, const PermutationParams& p, int n, int bins);

/// Residual of the permuted frequency from its bin center, wrapped to
/// (-N/2, N/2]. Always within [-N/(2B), N/(2B)].
Coord offset_coord(int i, int j, const PermutationParams& p, int n, int bins);

/// Every frequency (i, j) with hash_coord(i, j) == bin, ordered by (i, j).
std::vector<Coord> unhash_bin(Coord bin, const PermutationParams& p, int n, int bins);

}  // namespace sfft
