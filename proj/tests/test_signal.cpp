#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sfft/fft.hpp"
#include "sfft/signal.hpp"
#include "test_support.hpp"

namespace sfft {
namespace {

TEST(Planted, ZeroSparsityIsZeroSignal) {
  const PlantedSignal s = generate_planted(32, 0, 1);
  EXPECT_TRUE(s.truth.empty());
  EXPECT_EQ(s.x, ComplexMatrix(32));
}

TEST(Planted, DcCoefficientGivesConstantSignal) {
  const PlantedSignal one = generate_planted(1, 1, 5, {.random_phase = false});
  EXPECT_EQ(one.truth.value_at({0, 0}), Complex(1.0));
  EXPECT_EQ(one.x(0, 0), Complex(1.0));
  // Same construction at N = 16: x = 1/N^2 everywhere.
  SparseSpectrum dc(16);
  dc.set({0, 0}, 1.0);
  const ComplexMatrix x = ifft2d(dc.to_dense());
  for (const Complex& v : x.data()) EXPECT_NEAR(std::abs(v - 1.0 / 256.0), 0.0, 1e-15);
  const ComplexMatrix back = fft2d(x);
  EXPECT_NEAR(std::abs(back(0, 0) - 1.0), 0.0, 1e-12);
}

TEST(Planted, SpectrumMatchesTruth) {
  const PlantedSignal s = generate_planted(64, 8, 123);
  ASSERT_EQ(s.truth.size(), 8u);
  const ComplexMatrix f = fft2d(s.x);
  int big = 0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const auto t = s.truth.find({i, j});
      if (t) {
        ++big;
        EXPECT_NEAR(std::abs(f(i, j)), 1.0, 1e-9);
        EXPECT_NEAR(std::abs(f(i, j) - *t), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(*t), 1.0, 1e-15);
      } else {
        EXPECT_LE(std::abs(f(i, j)), 1e-9);
      }
    }
  }
  EXPECT_EQ(big, 8);
}

TEST(Planted, PhaseZeroMode) {
  const PlantedSignal s = generate_planted(32, 5, 9, {.random_phase = false});
  for (const auto& [c, v] : s.truth) EXPECT_EQ(v, Complex(1.0));
}

TEST(Planted, DeterministicPerSeed) {
  const PlantedSignal a = generate_planted(128, 16, 77);
  const PlantedSignal b = generate_planted(128, 16, 77);
  const PlantedSignal c = generate_planted(128, 16, 78);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_NE(a.truth, c.truth);
}

TEST(Planted, FullSupport) {
  const PlantedSignal s = generate_planted(4, 16, 2);
  EXPECT_EQ(s.truth.size(), 16u);
}

TEST(Planted, RejectsBadArguments) {
  EXPECT_THROW(generate_planted(4, 17, 1), std::invalid_argument);
  EXPECT_THROW(generate_planted(4, -1, 1), std::invalid_argument);
  EXPECT_THROW(generate_planted(12, 1, 1), std::invalid_argument);
}

TEST(ErrorMetric, Examples) {
  const PlantedSignal s = generate_planted(16, 4, 3);
  EXPECT_EQ(error_metric(s.truth, s.truth, 4), 0.0);
  SparseSpectrum spike(8);
  spike.set({2, 3}, 1.0);
  EXPECT_DOUBLE_EQ(error_metric(SparseSpectrum(8), spike, 1), 1.0);
  EXPECT_DOUBLE_EQ(error_metric(spike, SparseSpectrum(8), 1), 1.0);
  EXPECT_EQ(error_metric(SparseSpectrum(8), SparseSpectrum(8), 0), 0.0);
  EXPECT_TRUE(std::isinf(error_metric(spike, SparseSpectrum(8), 0)));
  EXPECT_THROW(error_metric(spike, spike, -1), std::invalid_argument);
  EXPECT_THROW(error_metric(spike, ComplexMatrix(16), 1), std::invalid_argument);
}

TEST(ErrorMetric, MatchesSingleLoopSum) {
  Rng rng(51);
  const ComplexMatrix exact = test::random_matrix(4, rng);
  SparseSpectrum approx(4);
  for (int t = 0; t < 6; ++t) {
    approx.set({static_cast<int>(rng.below(4)), static_cast<int>(rng.below(4))}, {rng.uniform(), rng.uniform()});
  }
  const ComplexMatrix dense = approx.to_dense();
  double sum = 0.0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const double dr = exact.data()[idx].real() - dense.data()[idx].real();
    const double di = exact.data()[idx].imag() - dense.data()[idx].imag();
    sum += std::sqrt(dr * dr + di * di);
  }
  EXPECT_NEAR(error_metric(approx, exact, 3), sum / 3.0, 1e-12);
}

TEST(ErrorMetric, IsAScaledMetric) {
  Rng rng(52);
  auto random_sparse = [&] {
    SparseSpectrum s(16);
    for (int t = 0; t < 10; ++t) {
      s.set({static_cast<int>(rng.below(16)), static_cast<int>(rng.below(16))}, {rng.uniform() - 0.5, rng.uniform()});
    }
    return s;
  };
  for (int t = 0; t < 20; ++t) {
    const SparseSpectrum a = random_sparse(), b = random_sparse(), c = random_sparse();
    const double ab = error_metric(a, b, 5), ba = error_metric(b, a, 5);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GT(ab, 0.0);
    EXPECT_LE(ab, error_metric(a, c, 5) + error_metric(c, b, 5) + 1e-12);
    EXPECT_EQ(error_metric(a, a, 5), 0.0);
    EXPECT_NEAR(error_metric(a, b.to_dense(), 5), ab, 1e-12);
  }
}

TEST(SignalFile, RoundTrip) {
  const PlantedSignal s = generate_planted(32, 4, 66);
  std::stringstream buf;
  write_signal(buf, s);
  EXPECT_EQ(buf.str().size(), 20u + 32u * 32u * 16u);
  EXPECT_EQ(buf.str().substr(0, 4), "SF2D");
  EXPECT_EQ(static_cast<unsigned char>(buf.str()[4]), 32u);  // little-endian N
  const SignalFile f = read_signal(buf);
  EXPECT_EQ(f.n, 32);
  EXPECT_EQ(f.k, 4);
  EXPECT_EQ(f.seed, 66u);
  EXPECT_EQ(f.x, s.x);
}

TEST(SignalFile, RejectsCorruptInput) {
  const PlantedSignal s = generate_planted(8, 2, 1);
  std::stringstream buf;
  write_signal(buf, s);
  std::string bytes = buf.str();
  std::string bad = bytes;
  bad[0] = 'X';
  std::stringstream b1(bad);
  EXPECT_THROW(read_signal(b1), std::runtime_error);
  std::stringstream b2(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_signal(b2), std::runtime_error);
  std::string odd = bytes;
  odd[4] = 6;
  std::stringstream b3(odd);
  EXPECT_THROW(read_signal(b3), std::runtime_error);
}

}  // namespace
}  // namespace sfft
