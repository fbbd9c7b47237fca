#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sfft/core.hpp"
#include "sfft/flat_window.hpp"
#include "sfft/permutation.hpp"
#include "sfft/sparse_spectrum.hpp"

namespace sfft {

/// Power of two nearest to sqrt(N*k) on a log scale (ties up), clamped to
/// [4, N].
int default_bins(int n, int k);

struct SfftConfig {
  int n = 0;
  int k = 0;
  int loops = 8;           // location loops, and again estimation loops
  int d_factor = 2;        // bins kept per location loop = d_factor * k
  int vote_threshold = 0;  // 0: ceil(loops / 2)
  int bins = 0;            // 0: default_bins(n, k)
  double delta_stop = 1e-8;
  // An estimate is unusable when the window gain at its offset is below
  // gain_floor * gain(0,0).
  double gain_floor = 1e-6;
  // Output coefficients with |v| <= prune_ratio * max|v| are dropped.
  double prune_ratio = 1e-4;
  // An estimate is dropped when other candidates leak more than
  // leak_tol * (own gain) into its bin; 0 disables the check.
  double leak_tol = 1e-6;
  // Bins within this relative margin of an already kept neighbour are kept
  // without using the budget (a frequency on a bin edge lights both bins).
  double tie_tol = 1e-6;
  int threads = 1;

  int resolved_bins() const { return bins > 0 ? bins : default_bins(n, k); }
  int resolved_threshold() const { return vote_threshold > 0 ? vote_threshold : (loops + 1) / 2; }
  /// Throws std::invalid_argument on an inconsistent configuration,
  /// including a bin budget d_factor * k above B^2.
  void validate() const;
};

struct LocationResult {
  PermutationParams permutation;
  std::vector<Coord> candidates;  // sorted, distinct
};

/// The `count` bins of largest magnitude; ties go to the lower (i, j).
std::vector<Coord> largest_bins(const ComplexMatrix& bin_spectrum, int count);

/// Location bins from one hash: walks bins by decreasing magnitude, keeping
/// `count` of them; a bin tied (within tie_tol) to a kept neighbour is kept
/// too but does not use the budget. With distinct magnitudes and no ties
/// this is largest_bins(bin_spectrum, count).
std::vector<Coord> select_location_bins(const ComplexMatrix& bin_spectrum, int count, double tie_tol);

/// One location loop: hash, keep the d*k largest bins, reverse-hash them.
LocationResult seek_location_once(const ComplexMatrix& x, const SfftConfig& cfg, const FlatWindow& w,
                                  const PermutationParams& p);
LocationResult seek_location_once(const ComplexMatrix& x, const SfftConfig& cfg, const FlatWindow& w, Rng& rng);

/// Coordinates that appear in at least `threshold` of the sets, sorted.
std::vector<Coord> vote_and_select(const std::vector<std::vector<Coord>>& candidate_sets, int threshold);

/// Per-coordinate estimates from one hash of `x` under `p`, aligned with
/// `coords`. Each estimate undoes the permutation phase and the window gain:
///   N^2 * Z[h(i,j)] * w^(tau1*i + tau2*j) / G[o(i,j)].
/// The N^2 factor comes from the unscaled forward DFT. Entries whose window
/// gain is below `gain_floor` are empty, and so are entries whose bin also
/// collects more than leak_tol * (own gain) from the other coordinates of
/// `coords` (checked only when leak_tol > 0).
struct LoopEstimate {
  std::optional<Complex> value;  // empty when the window gain is below the floor
  bool clean = true;             // false when other coordinates leak into the bin
};

/// Estimates for one loop with the leak check recorded rather than applied.
std::vector<LoopEstimate> estimate_loop(const ComplexMatrix& x, const std::vector<Coord>& coords,
                                        const PermutationParams& p, const FlatWindow& w, double gain_floor,
                                        double leak_tol);

std::vector<std::optional<Complex>> estimate_once(const ComplexMatrix& x, const std::vector<Coord>& coords,
                                                  const PermutationParams& p, const FlatWindow& w,
                                                  double gain_floor = 1e-6, double leak_tol = 0.0);

/// Componentwise (real, imaginary) median across loops. Coordinates with no
/// usable estimate are left out.
SparseSpectrum median_combine(const std::vector<std::vector<std::optional<Complex>>>& per_loop,
                              const std::vector<Coord>& coords, int n);

/// Drops entries with |v| <= ratio * max|v|.
SparseSpectrum prune_small(const SparseSpectrum& s, double ratio);

/// `loops` estimation passes over `coords` with fresh permutations drawn
/// from streams derived from `seed`, then median and prune. The median uses
/// a coordinate's clean estimates when it has any and all usable ones
/// otherwise.
SparseSpectrum estimate_coefficients(const ComplexMatrix& x, const std::vector<Coord>& coords, const FlatWindow& w,
                                     int loops, std::uint64_t seed, double gain_floor, double prune_ratio,
                                     double leak_tol = 0.0, int threads = 1);

/// Fixed-sparsity 2D sparse FFT. Windows come from `cache` when given.
SparseSpectrum sfft2d(const ComplexMatrix& x, const SfftConfig& cfg, std::uint64_t seed,
                      WindowCache* cache = nullptr);

}  // namespace sfft
