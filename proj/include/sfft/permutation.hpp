#pragma once

#include <cstdint>

#include "sfft/random.hpp"

namespace sfft {

/// Multiplicative inverse of `a` modulo a power of two `n`.
/// Throws std::invalid_argument when `a` is even (no inverse exists).
std::int64_t mod_inverse(std::int64_t a, std::int64_t n);

/// Spectrum permutation (Px)[u,v] = x[sigma1*u + tau1, sigma2*v + tau2].
///
/// In frequency this moves coefficient (i,j) to (sigma1*i, sigma2*j) and
/// multiplies it by w^-(tau1*i + tau2*j); magnitudes are unchanged.
struct PermutationParams {
  std::int64_t n = 0;
  std::int64_t sigma1 = 1;
  std::int64_t sigma2 = 1;
  std::int64_t tau1 = 0;
  std::int64_t tau2 = 0;
  std::int64_t sigma1_inv = 1;
  std::int64_t sigma2_inv = 1;

  /// Validates ranges and parity, and fills in the inverses.
  static PermutationParams make(std::int64_t n, std::int64_t sigma1, std::int64_t sigma2,
                                std::int64_t tau1, std::int64_t tau2);
  static PermutationParams identity(std::int64_t n) { return make(n, 1, 1, 0, 0); }

  bool operator==(const PermutationParams&) const = default;
};

/// sigma uniform over odd residues, tau uniform over all residues.
PermutationParams draw_permutation(std::int64_t n, Rng& rng);

}  // namespace sfft
