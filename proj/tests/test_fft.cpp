#include <gtest/gtest.h>

#include <cmath>

#include "sfft/fft.hpp"
#include "test_support.hpp"

namespace sfft {
namespace {

using test::random_matrix;
using test::reference_dft;

TEST(Fft, ZeroMapsToZero) {
  const ComplexMatrix x(4);
  EXPECT_EQ(dft2d_naive(x), x);
  EXPECT_EQ(fft2d(x), x);
}

TEST(Fft, DeltaMapsToOnes) {
  for (int n : {4, 16}) {
    ComplexMatrix x(n);
    x(0, 0) = 1.0;
    const ComplexMatrix f = fft2d(x);
    const ComplexMatrix d = dft2d_naive(x);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(std::abs(f(i, j) - 1.0), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(d(i, j) - 1.0), 0.0, 1e-12);
      }
    }
  }
}

TEST(Fft, NaiveMatchesQuadrupleLoopOnIntegers) {
  Rng rng(11);
  ComplexMatrix x(8);
  for (Complex& v : x.data()) v = {static_cast<double>(rng.below(21)) - 10.0, static_cast<double>(rng.below(21)) - 10.0};
  const ComplexMatrix ref = reference_dft(x);
  EXPECT_LE(max_abs_difference(dft2d_naive(x), ref), 1e-9);
  EXPECT_LE(max_abs_difference(fft2d(x), ref), 1e-9);
}

TEST(Fft, MatchesNaiveAcrossSizes) {
  Rng rng(12);
  for (int n = 4; n <= 64; n *= 2) {
    const ComplexMatrix x = random_matrix(n, rng);
    EXPECT_LE(relative_frobenius_error(fft2d(x), dft2d_naive(x)), 1e-9) << "N=" << n;
  }
}

TEST(Fft, RoundTrip) {
  Rng rng(13);
  for (int n : {16, 32, 128}) {
    const ComplexMatrix x = random_matrix(n, rng);
    EXPECT_LE(relative_frobenius_error(ifft2d(fft2d(x)), x), 1e-10);
  }
}

TEST(Fft, InverseOfOnesIsDelta) {
  ComplexMatrix ones(4);
  for (Complex& v : ones.data()) v = 1.0;
  const ComplexMatrix d = ifft2d(ones);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(d(i, j) - (i == 0 && j == 0 ? 1.0 : 0.0)), 0.0, 1e-15);
  }
}

TEST(Fft, InverseOfSingleCoefficient) {
  const int n = 16;
  ComplexMatrix xhat(n);
  xhat(3, 5) = 1.0;
  const ComplexMatrix x = ifft2d(xhat);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const Complex expect = test::unit_root(3 * u + 5 * v, n, +1.0) / 256.0;
      EXPECT_NEAR(std::abs(x(u, v) - expect), 0.0, 1e-15);
    }
  }
}

TEST(Fft, Linearity) {
  Rng rng(14);
  for (int n : {8, 32}) {
    const ComplexMatrix x = random_matrix(n, rng);
    const ComplexMatrix y = random_matrix(n, rng);
    const Complex a{rng.uniform(), rng.uniform()};
    const Complex b{rng.uniform(), -rng.uniform()};
    ComplexMatrix combo(n);
    for (std::size_t t = 0; t < combo.size(); ++t) combo.data()[t] = a * x.data()[t] + b * y.data()[t];
    const ComplexMatrix fx = fft2d(x), fy = fft2d(y), fc = fft2d(combo);
    ComplexMatrix expect(n);
    for (std::size_t t = 0; t < expect.size(); ++t) expect.data()[t] = a * fx.data()[t] + b * fy.data()[t];
    EXPECT_LE(max_abs_difference(fc, expect), 1e-9);
  }
}

TEST(Fft, ParsevalUnscaled) {
  Rng rng(15);
  const int n = 64;
  const ComplexMatrix x = random_matrix(n, rng);
  const ComplexMatrix f = fft2d(x);
  double sx = 0.0, sf = 0.0;
  for (const Complex& v : x.data()) sx += std::norm(v);
  for (const Complex& v : f.data()) sf += std::norm(v);
  EXPECT_NEAR(sf / (static_cast<double>(n) * n * sx), 1.0, 1e-6);
}

TEST(Fft, RejectsNonPowerOfTwo) {
  EXPECT_THROW(ComplexMatrix(12), std::invalid_argument);
  EXPECT_THROW(FftPlan(6), std::invalid_argument);
}

TEST(Fft, IdenticalAcrossThreadCounts) {
  Rng rng(16);
  const ComplexMatrix x = random_matrix(256, rng);
  const ComplexMatrix one = fft2d(x, 1);
  for (int t : {2, 3, 8}) {
    EXPECT_EQ(fft2d(x, t), one);
    EXPECT_EQ(ifft2d(one, t), ifft2d(one, 1));
  }
}

TEST(Fft, IndicesWrap) {
  ComplexMatrix m(8);
  m(-1, 9) = 2.0;
  EXPECT_EQ(m(7, 1), Complex(2.0));
}

}  // namespace
}  // namespace sfft
