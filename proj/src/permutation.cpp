#include "sfft/permutation.hpp"

#include <stdexcept>

#include "sfft/core.hpp"

namespace sfft {

std::int64_t mod_inverse(std::int64_t a, std::int64_t n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("mod_inverse: modulus must be a power of 2");
  if (n == 1) return 0;
  a %= n;
  if (a < 0) a += n;
  if (a % 2 == 0) throw std::invalid_argument("mod_inverse: even value has no inverse modulo a power of 2");
  // Extended Euclid on (a, n).
  std::int64_t old_r = a, r = n;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  std::int64_t inv = old_s % n;
  if (inv < 0) inv += n;
  return inv;
}

PermutationParams PermutationParams::make(std::int64_t n, std::int64_t sigma1, std::int64_t sigma2,
                                          std::int64_t tau1, std::int64_t tau2) {
  if (!is_power_of_two(n) || n < 2) throw std::invalid_argument("PermutationParams: N must be a power of 2, N >= 2");
  auto odd_in_range = [n](std::int64_t s) { return s >= 1 && s < n && s % 2 == 1; };
  if (!odd_in_range(sigma1) || !odd_in_range(sigma2)) {
    throw std::invalid_argument("PermutationParams: sigma must be odd and in [1, N)");
  }
  if (tau1 < 0 || tau1 >= n || tau2 < 0 || tau2 >= n) {
    throw std::invalid_argument("PermutationParams: tau must be in [0, N)");
  }
  PermutationParams p;
  p.n = n;
  p.sigma1 = sigma1;
  p.sigma2 = sigma2;
  p.tau1 = tau1;
  p.tau2 = tau2;
  p.sigma1_inv = mod_inverse(sigma1, n);
  p.sigma2_inv = mod_inverse(sigma2, n);
  return p;
}

PermutationParams draw_permutation(std::int64_t n, Rng& rng) {
  if (!is_power_of_two(n) || n < 2) throw std::invalid_argument("draw_permutation: N must be a power of 2, N >= 2");
  const auto half = static_cast<std::uint64_t>(n / 2);
  const auto sigma1 = static_cast<std::int64_t>(2 * rng.below(half) + 1);
  const auto sigma2 = static_cast<std::int64_t>(2 * rng.below(half) + 1);
  const auto tau1 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
  const auto tau2 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n)));
  return PermutationParams::make(n, sigma1, sigma2, tau1, tau2);
}

}  // namespace sfft
