#include "sfft/fft.hpp"

#include <cmath>
#include <utility>

#include "sfft/parallel.hpp"

namespace sfft {

double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.side() != b.side()) throw std::invalid_argument("relative_frobenius_error: size mismatch");
  double diff = 0.0;
  double ref = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    diff += std::norm(da[i] - db[i]);
    ref += std::norm(db[i]);
  }
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.side() != b.side()) throw std::invalid_argument("max_abs_difference: size mismatch");
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

FftPlan::FftPlan(int n) : n_(n) {
  if (!is_power_of_two(n)) throw std::invalid_argument("FftPlan: length must be a power of 2");
  twiddle_.resize(static_cast<std::size_t>(n / 2));
  for (int k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  const int bits = log2_exact(n);
  bitrev_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    bitrev_[static_cast<std::size_t>(i)] = r;
  }
}

void FftPlan::run(std::span<Complex> a, bool inverse) const {
  if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("FftPlan: buffer length mismatch");
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[static_cast<std::size_t>(i)];
    if (i < j) std::swap(a[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(j)]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len / 2;
    const int stride = n_ / len;
    for (int start = 0; start < n_; start += len) {
      for (int k = 0; k < half; ++k) {
        Complex w = twiddle_[static_cast<std::size_t>(k * stride)];
        if (inverse) w = std::conj(w);
        Complex& lo = a[static_cast<std::size_t>(start + k)];
        Complex& hi = a[static_cast<std::size_t>(start + k + half)];
        const Complex t = w * hi;
        hi = lo - t;
        lo += t;
      }
    }
  }
}

ComplexMatrix dft2d_naive(const ComplexMatrix& x) {
  const int n = x.side();
  std::vector<Complex> root(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double angle = -2.0 * kPi * static_cast<double>(m) / static_cast<double>(n);
    root[static_cast<std::size_t>(m)] = {std::cos(angle), std::sin(angle)};
  }
  ComplexMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc{};
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          const auto e = (static_cast<std::int64_t>(i) * u + static_cast<std::int64_t>(j) * v) % n;
          acc += x(u, v) * root[static_cast<std::size_t>(e)];
        }
      }
      out(i, j) = acc;
    }
  }
  return out;
}

namespace {

void transpose_into(const ComplexMatrix& src, ComplexMatrix& dst) {
  const int n = src.side();
  constexpr int kBlock = 32;
  for (int r0 = 0; r0 < n; r0 += kBlock) {
    for (int c0 = 0; c0 < n; c0 += kBlock) {
      const int r1 = std::min(n, r0 + kBlock);
      const int c1 = std::min(n, c0 + kBlock);
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) dst(c, r) = src(r, c);
      }
    }
  }
}

ComplexMatrix transform2d(const ComplexMatrix& x, bool inverse, int threads) {
  const int n = x.side();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft2d: side must be a power of 2");
  const FftPlan plan(n);
  auto rows = [&](ComplexMatrix& m) {
    parallel_for(n, threads, [&](int r) {
      if (inverse) {
        plan.inverse(m.row(r));
      } else {
        plan.forward(m.row(r));
      }
    });
  };
  ComplexMatrix a = x;
  rows(a);
  ComplexMatrix b(n);
  transpose_into(a, b);
  rows(b);
  transpose_into(b, a);
  if (inverse) {
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (auto& v : a.data()) v *= scale;
  }
  return a;
}

}  // namespace

ComplexMatrix fft2d(const ComplexMatrix& x, int threads) { return transform2d(x, false, threads); }

ComplexMatrix ifft2d(const ComplexMatrix& xhat, int threads) { return transform2d(xhat, true, threads); }

}  // namespace sfft
