#pragma once

#include <cstdint>
#include <vector>

#include "sfft/core.hpp"
#include "sfft/flat_window.hpp"
#include "sfft/random.hpp"
#include "sfft/sparse_spectrum.hpp"

namespace sfft {

struct TunerConfig {
  int b0 = 16;             // initial bin count
  double eps1 = 0.5;       // shrink: B -> eps1 * B
  double eps2 = 1.0;       // grow:   B -> (1 + eps2) * B
  double delta1 = 0.02;    // r below delta1 shrinks B
  double delta2 = 0.05;    // r at or above delta2 grows B
  int max_tuning_iters = 0;  // 0: 2 * log2(N)
  // Local maxima below mag_floor * (largest bin magnitude) are ignored.
  double mag_floor = 1e-3;
  // Neighbouring bins within this relative margin count as tied; a frequency
  // on a bin edge lights both bins equally.
  double tie_tol = 1e-6;

  // Estimation stage, shared with the fixed-sparsity transform.
  double delta_stop = 1e-8;
  double gain_floor = 1e-6;
  double prune_ratio = 1e-4;
  double leak_tol = 1e-6;
  int threads = 1;

  int resolved_max_iters(int n) const { return max_tuning_iters > 0 ? max_tuning_iters : 2 * log2_exact(n); }
  /// Throws std::invalid_argument unless 0 < delta1 < delta2 < 1,
  /// 0 < eps1 < 1, eps2 >= 0, B0 a power of two and mag_floor in [0, 1).
  void validate() const;
};

struct TuningStep {
  int bins = 0;
  int count = 0;   // local maxima at this B
  // |1 - k_i / k_{i-1}|. NaN on the first step and when both counts are zero;
  // +inf when only the previous count is zero.
  double ratio = 0.0;
};

struct TunerState {
  std::vector<TuningStep> history;
  bool converged = false;
  int detected_k = 0;
  int final_bins = 0;
};

struct LocalMaxima {
  int count = 0;
  std::vector<Coord> coords;   // one bin per maximum, largest magnitude first-found, sorted
  std::vector<Coord> members;  // every bin of every maximum, sorted
};

/// Bins whose magnitude is strictly above all 8 toroidal neighbours and at
/// least mag_floor times the largest magnitude. An all-zero grid has none.
///
/// Ties are resolved as plateaus: neighbouring bins within a relative
/// tie_tol of each other are grouped, and a group above every bin around it
/// by more than tie_tol counts once. With distinct magnitudes this is the
/// plain strict rule; with tie_tol = 0 only exactly equal bins group.
LocalMaxima count_local_maxima(const ComplexMatrix& bins, double mag_floor, double tie_tol = 0.0);

/// r < delta1: eps1 * B. delta1 <= r < delta2: B. r >= delta2: (1 + eps2) * B.
/// The product is rounded to the nearest power of two and clamped to [4, N].
int update_B(int bins, double ratio, const TunerConfig& cfg, int n);

struct Detection {
  TunerState state;
  std::vector<std::vector<Coord>> candidate_sets;  // one per tuning iteration
  std::vector<Coord> selected;                     // coordinates in >= ceil(iters/2) sets
};

/// Adaptive search for B: hash, count local maxima, update B from the change
/// ratio until it settles in [delta1, delta2), a (B, count) pair repeats, or
/// the iteration cap is hit. Local-maximum bins are reverse-hashed every
/// iteration and vote for candidate coordinates.
Detection detect_sparsity(const ComplexMatrix& x, const TunerConfig& cfg, Rng& rng, WindowCache* cache = nullptr);

struct AtsfftResult {
  SparseSpectrum spectrum;
  TunerState state;
};

/// Sparse FFT without a sparsity input: detect_sparsity, then est_loops
/// estimation rounds at the final B with median combine.
AtsfftResult atsfft2d(const ComplexMatrix& x, const TunerConfig& cfg, int est_loops, std::uint64_t seed,
                      WindowCache* cache = nullptr);

}  // namespace sfft
