#include "sfft/signal.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "sfft/fft.hpp"
#include "sfft/random.hpp"

namespace sfft {

PlantedSignal generate_planted(int n, int k, std::uint64_t seed, const PlantOptions& options) {
  if (!is_power_of_two(n)) throw std::invalid_argument("generate_planted: N must be a power of 2");
  const auto cells = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  if (k < 0 || static_cast<std::uint64_t>(k) > cells) throw std::invalid_argument("generate_planted: k must lie in [0, N^2]");

  Rng rng(seed);
  std::vector<std::uint64_t> support;
  support.reserve(static_cast<std::size_t>(k));
  if (static_cast<std::uint64_t>(k) * 2 <= cells) {
    std::unordered_set<std::uint64_t> seen;
    while (support.size() < static_cast<std::size_t>(k)) {
      const std::uint64_t idx = rng.below(cells);
      if (seen.insert(idx).second) support.push_back(idx);
    }
  } else {
    std::vector<std::uint64_t> all(cells);
    std::iota(all.begin(), all.end(), std::uint64_t{0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(cells - i));
      std::swap(all[i], all[j]);
      support.push_back(all[i]);
    }
  }

  PlantedSignal s{ComplexMatrix(n), SparseSpectrum(n), seed, k};
  ComplexMatrix dense(n);
  for (std::uint64_t idx : support) {
    Complex v{1.0, 0.0};
    if (options.random_phase) {
      const double phase = 2.0 * kPi * rng.uniform();
      v = {std::cos(phase), std::sin(phase)};
    }
    const Coord c{static_cast<int>(idx / static_cast<std::uint64_t>(n)), static_cast<int>(idx % static_cast<std::uint64_t>(n))};
    s.truth.set(c, v);
    dense(c.i, c.j) = v;
  }
  s.x = ifft2d(dense);
  return s;
}

namespace {

double finish(double sum, int k) {
  if (k == 0) return sum == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return sum / k;
}

}  // namespace

double error_metric(const SparseSpectrum& approx, const SparseSpectrum& exact, int k) {
  if (k < 0) throw std::invalid_argument("error_metric: k must be non-negative");
  double sum = 0.0;
  for (const auto& [c, v] : approx) sum += std::abs(v - exact.value_at(c));
  for (const auto& [c, v] : exact) {
    if (!approx.find(c)) sum += std::abs(v);
  }
  return finish(sum, k);
}

double error_metric(const SparseSpectrum& approx, const ComplexMatrix& exact, int k) {
  if (k < 0) throw std::invalid_argument("error_metric: k must be non-negative");
  if (approx.n() != exact.side()) throw std::invalid_argument("error_metric: size mismatch");
  double sum = 0.0;
  const int n = exact.side();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) sum += std::abs(exact(i, j) - approx.value_at({i, j}));
  }
  return finish(sum, k);
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  auto bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>(bits & 0xffu);
    bits >>= 8;
  }
  out.write(bytes, sizeof(U));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw std::runtime_error("read_signal: truncated file");
  U bits = 0;
  for (std::size_t i = sizeof(U); i-- > 0;) bits = (bits << 8) | bytes[i];
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_signal(std::ostream& out, const PlantedSignal& s) {
  out.write(kSignalMagic, 4);
  put_le(out, static_cast<std::uint32_t>(s.x.side()));
  put_le(out, static_cast<std::uint32_t>(s.k));
  put_le(out, s.seed);
  for (const Complex& v : s.x.data()) {
    put_le(out, v.real());
    put_le(out, v.imag());
  }
}

SignalFile read_signal(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kSignalMagic)) {
    throw std::runtime_error("read_signal: bad magic");
  }
  SignalFile f;
  f.n = static_cast<int>(get_le<std::uint32_t>(in));
  f.k = static_cast<int>(get_le<std::uint32_t>(in));
  f.seed = get_le<std::uint64_t>(in);
  if (!is_power_of_two(f.n)) throw std::runtime_error("read_signal: N is not a power of 2");
  f.x = ComplexMatrix(f.n);
  for (Complex& v : f.x.data()) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    v = {re, im};
  }
  return f;
}

}  // namespace sfft
