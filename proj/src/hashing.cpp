#include "sfft/hashing.hpp"

#include <algorithm>
#include <stdexcept>

#include "sfft/fft.hpp"

namespace sfft {

namespace {

std::int64_t wrap(std::int64_t v, std::int64_t n) {
  const std::int64_t m = v % n;
  return m < 0 ? m + n : m;
}

void check_bins(int n, int bins) {
  if (!is_power_of_two(bins) || bins > n || n % bins != 0) {
    throw std::invalid_argument("hashing: B must be a power of 2 dividing N");
  }
}

}  // namespace

WindowedBlock::WindowedBlock(int n, int origin, int width)
    : n_(n), origin_(origin), width_(width), data_(static_cast<std::size_t>(width) * width) {}

ComplexMatrix WindowedBlock::to_dense() const {
  ComplexMatrix out(n_);
  for (int a = 0; a < width_; ++a) {
    for (int b = 0; b < width_; ++b) out(origin_ + a, origin_ + b) += local(a, b);
  }
  return out;
}

WindowedBlock permute_filter(const ComplexMatrix& x, const PermutationParams& p, const FlatWindow& w) {
  if (x.side() != w.n() || p.n != w.n()) throw std::invalid_argument("permute_filter: window/signal size mismatch");
  const int n = x.side();
  const int width = w.support();
  WindowedBlock z(n, w.origin(), width);
  for (int a = 0; a < width; ++a) {
    const std::int64_t u = w.origin() + a;
    const std::int64_t src_row = wrap(p.sigma1 * u + p.tau1, n);
    const double ga = w.taps()[static_cast<std::size_t>(a)];
    for (int b = 0; b < width; ++b) {
      const std::int64_t v = w.origin() + b;
      const std::int64_t src_col = wrap(p.sigma2 * v + p.tau2, n);
      z.local(a, b) = ga * w.taps()[static_cast<std::size_t>(b)] * x(src_row, src_col);
    }
  }
  return z;
}

ComplexMatrix subsample_sum(const WindowedBlock& z, int bins) {
  check_bins(z.n(), bins);
  ComplexMatrix y(bins);
  for (int a = 0; a < z.width(); ++a) {
    for (int b = 0; b < z.width(); ++b) y(z.origin() + a, z.origin() + b) += z.local(a, b);
  }
  return y;
}

ComplexMatrix subsample_sum(const ComplexMatrix& z, int bins) {
  check_bins(z.side(), bins);
  ComplexMatrix y(bins);
  for (int i = 0; i < z.side(); ++i) {
    for (int j = 0; j < z.side(); ++j) y(i, j) += z(i, j);
  }
  return y;
}

ComplexMatrix hash_to_bins(const ComplexMatrix& x, const PermutationParams& p, const FlatWindow& w) {
  if (x.side() != w.n() || p.n != w.n()) throw std::invalid_argument("hash_to_bins: window/signal size mismatch");
  const int n = x.side();
  const int bins = w.bins();
  const int width = w.support();
  std::vector<int> src_row(static_cast<std::size_t>(width));
  std::vector<int> src_col(static_cast<std::size_t>(width));
  std::vector<int> fold(static_cast<std::size_t>(width));
  for (int a = 0; a < width; ++a) {
    const std::int64_t t = w.origin() + a;
    src_row[static_cast<std::size_t>(a)] = static_cast<int>(wrap(p.sigma1 * t + p.tau1, n));
    src_col[static_cast<std::size_t>(a)] = static_cast<int>(wrap(p.sigma2 * t + p.tau2, n));
    fold[static_cast<std::size_t>(a)] = static_cast<int>(wrap(t, bins));
  }
  const double* taps = w.taps().data();
  ComplexMatrix y(bins);
  std::vector<Complex> acc(static_cast<std::size_t>(bins));
  for (int a = 0; a < width; ++a) {
    std::fill(acc.begin(), acc.end(), Complex{});
    const auto row = x.row(src_row[static_cast<std::size_t>(a)]);
    for (int b = 0; b < width; ++b) {
      acc[static_cast<std::size_t>(fold[static_cast<std::size_t>(b)])] +=
          taps[b] * row[static_cast<std::size_t>(src_col[static_cast<std::size_t>(b)])];
    }
    auto out = y.row(fold[static_cast<std::size_t>(a)]);
    const double ga = taps[a];
    for (int c = 0; c < bins; ++c) out[static_cast<std::size_t>(c)] += ga * acc[static_cast<std::size_t>(c)];
  }
  return fft2d(y);
}

int bin_of(std::int64_t permuted, int n, int bins) {
  const std::int64_t t = wrap(permuted, n);
  return static_cast<int>(wrap((2 * t * bins + n) / (2 * static_cast<std::int64_t>(n)), bins));
}

Coord hash_coord(int i, int j, const PermutationParams& p, int n, int bins) {
  check_bins(n, bins);
  return {bin_of(p.sigma1 * i, n, bins), bin_of(p.sigma2 * j, n, bins)};
}

Coord offset_coord(int i, int j, const PermutationParams& p, int n, int bins) {
  check_bins(n, bins);
  const std::int64_t width = n / bins;
  auto axis = [&](std::int64_t sigma, int f) {
    const std::int64_t t = wrap(sigma * f, n);
    std::int64_t off = wrap(t - bin_of(t, n, bins) * width, n);
    if (off > n / 2) off -= n;
    return static_cast<int>(off);
  };
  return {axis(p.sigma1, i), axis(p.sigma2, j)};
}

std::vector<Coord> unhash_bin(Coord bin, const PermutationParams& p, int n, int bins) {
  check_bins(n, bins);
  if (bin.i < 0 || bin.i >= bins || bin.j < 0 || bin.j >= bins) throw std::out_of_range("unhash_bin: bin out of range");
  const std::int64_t width = n / bins;
  // round(t / width) == b  <=>  b*width - width/2 <= t < b*width + width/2
  auto axis = [&](int b, std::int64_t sigma_inv) {
    const std::int64_t first = b * width - width / 2;
    const std::int64_t count = width;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t t = first; t < first + count; ++t) out.push_back(static_cast<int>(wrap(sigma_inv * wrap(t, n), n)));
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto rows = axis(bin.i, p.sigma1_inv);
  const auto cols = axis(bin.j, p.sigma2_inv);
  std::vector<Coord> out;
  out.reserve(rows.size() * cols.size());
  for (int i : rows) {
    for (int j : cols) out.push_back({i, j});
  }
  return out;
}

}  // namespace sfft
