#pragma once

#include <cstdint>
#include <iosfwd>

#include "sfft/core.hpp"
#include "sfft/sparse_spectrum.hpp"

namespace sfft {

/// Space-domain signal whose spectrum is exactly `truth`: k unit-magnitude
/// coefficients at distinct, uniformly drawn coordinates.
struct PlantedSignal {
  ComplexMatrix x;
  SparseSpectrum truth;
  std::uint64_t seed = 0;
  int k = 0;
};

struct PlantOptions {
  bool random_phase = true;  // false: every coefficient is exactly 1
};

/// Deterministic per seed. Throws std::invalid_argument when k > N^2.
PlantedSignal generate_planted(int n, int k, std::uint64_t seed, const PlantOptions& options = {});

/// (1/k) * sum over all N^2 coordinates of |approx - exact|, absent sparse
/// entries read as zero. With k == 0 the result is 0 for identical inputs and
/// +infinity otherwise.
double error_metric(const SparseSpectrum& approx, const SparseSpectrum& exact, int k);
double error_metric(const SparseSpectrum& approx, const ComplexMatrix& exact, int k);

// Binary signal file, all fields little-endian:
//   bytes 0-3   magic "SF2D"
//   bytes 4-7   uint32 N
//   bytes 8-11  uint32 k
//   bytes 12-19 uint64 seed
//   then N*N (re, im) float64 pairs, row-major.
inline constexpr char kSignalMagic[4] = {'S', 'F', '2', 'D'};

struct SignalFile {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  ComplexMatrix x;
};

void write_signal(std::ostream& out, const PlantedSignal& s);
/// Throws std::runtime_error on a bad magic, bad size or short read.
SignalFile read_signal(std::istream& in);

}  // namespace sfft
