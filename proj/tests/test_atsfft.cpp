#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sfft/atsfft.hpp"
#include "sfft/fft.hpp"
#include "sfft/hashing.hpp"
#include "sfft/sfft.hpp"
#include "sfft/signal.hpp"
#include "test_support.hpp"

namespace sfft {
namespace {

TEST(LocalMaxima, ZeroGridHasNone) {
  const LocalMaxima lm = count_local_maxima(ComplexMatrix(8), 1e-3);
  EXPECT_EQ(lm.count, 0);
  EXPECT_TRUE(lm.coords.empty());
}

TEST(LocalMaxima, SingleSpike) {
  ComplexMatrix z(8);
  z(7, 0) = Complex{0, 3};
  const LocalMaxima lm = count_local_maxima(z, 1e-3);
  EXPECT_EQ(lm.count, 1);
  EXPECT_EQ(lm.coords, (std::vector<Coord>{{7, 0}}));
}

TEST(LocalMaxima, StrictNeighbourhoodIsToroidal) {
  ComplexMatrix z(8);
  z(0, 0) = 2.0;
  z(7, 7) = 1.0;  // diagonal neighbour across both edges
  z(4, 4) = 1.0;
  const LocalMaxima lm = count_local_maxima(z, 1e-3);
  EXPECT_EQ(lm.coords, (std::vector<Coord>{{0, 0}, {4, 4}}));
}

TEST(LocalMaxima, ToleranceDecidesNearTies) {
  ComplexMatrix z(8);
  z(3, 3) = 1.0;
  z(3, 4) = 1.0;
  EXPECT_EQ(count_local_maxima(z, 1e-3, 0.0).count, 1);  // exact plateau
  z(3, 4) = 1.0 + 1e-9;
  EXPECT_EQ(count_local_maxima(z, 1e-3, 0.0).coords, (std::vector<Coord>{{3, 4}}));
  EXPECT_EQ(count_local_maxima(z, 1e-3, 1e-6).members, (std::vector<Coord>{{3, 3}, {3, 4}}));
  z(3, 4) = 1.1;
  EXPECT_EQ(count_local_maxima(z, 1e-3, 1e-6).members, (std::vector<Coord>{{3, 4}}));
}

TEST(LocalMaxima, PlateauCountsOnce) {
  ComplexMatrix z(8);
  z(3, 3) = 1.0;
  z(3, 4) = 1.0 + 1e-9;
  z(3, 5) = 0.2;
  const LocalMaxima lm = count_local_maxima(z, 1e-3, 1e-6);
  EXPECT_EQ(lm.count, 1);
  EXPECT_EQ(lm.coords, (std::vector<Coord>{{3, 4}}));
  EXPECT_EQ(lm.members, (std::vector<Coord>{{3, 3}, {3, 4}}));
  // A plateau touching a higher bin is not a maximum.
  z(2, 2) = 3.0;
  EXPECT_EQ(count_local_maxima(z, 1e-3, 1e-6).coords, (std::vector<Coord>{{2, 2}}));
}

TEST(LocalMaxima, MagnitudeFloor) {
  ComplexMatrix z(8);
  z(1, 1) = 1.0;
  z(5, 5) = 5e-4;
  EXPECT_EQ(count_local_maxima(z, 1e-3).count, 1);
  EXPECT_EQ(count_local_maxima(z, 1e-4).count, 2);
  EXPECT_EQ(count_local_maxima(z, 0.0).count, 2);
}

TEST(LocalMaxima, ShiftCovariant) {
  Rng rng(41);
  const ComplexMatrix z = test::random_matrix(16, rng);
  const LocalMaxima base = count_local_maxima(z, 1e-3);
  ASSERT_GT(base.count, 0);
  for (auto [di, dj] : {std::pair{3, 0}, std::pair{5, 11}, std::pair{15, 15}}) {
    ComplexMatrix s(16);
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 16; ++j) s(i + di, j + dj) = z(i, j);
    }
    const LocalMaxima moved = count_local_maxima(s, 1e-3);
    EXPECT_EQ(moved.count, base.count);
    std::vector<Coord> expect;
    for (const Coord c : base.coords) expect.push_back({(c.i + di) % 16, (c.j + dj) % 16});
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(moved.coords, expect);
  }
}

TEST(LocalMaxima, TwoSpikesIntoSixtyFourBins) {
  const int n = 2048;
  const PlantedSignal s = generate_planted(n, 2, 8);
  const FlatWindow w = select_engine_window(n, 64, 1e-8);
  Rng rng(42);
  int twos = 0;
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix z = hash_to_bins(s.x, draw_permutation(n, rng), w);
    if (count_local_maxima(z, 1e-3, 1e-6).count == 2) ++twos;
  }
  EXPECT_GE(twos, 9);
}

TEST(UpdateB, Examples) {
  const TunerConfig cfg;
  EXPECT_EQ(update_B(64, 0.01, cfg, 256), 32);
  EXPECT_EQ(update_B(64, 0.03, cfg, 256), 64);
  EXPECT_EQ(update_B(64, 0.5, cfg, 256), 128);
  EXPECT_EQ(update_B(64, std::numeric_limits<double>::infinity(), cfg, 256), 128);
}

TEST(UpdateB, BranchTable) {
  const TunerConfig cfg;
  const int n = 1024;
  for (int b = 8; b <= n; b *= 2) {
    EXPECT_EQ(update_B(b, 0.0, cfg, n), b / 2);
    EXPECT_EQ(update_B(b, 0.019, cfg, n), b / 2);
    EXPECT_EQ(update_B(b, 0.02, cfg, n), b);
    EXPECT_EQ(update_B(b, 0.049, cfg, n), b);
    EXPECT_EQ(update_B(b, 0.05, cfg, n), std::min(2 * b, n));
    EXPECT_EQ(update_B(b, 1.0, cfg, n), std::min(2 * b, n));
  }
  EXPECT_EQ(update_B(4, 0.0, cfg, n), 4);  // clamped below
}

TEST(TunerConfig, Validation) {
  EXPECT_NO_THROW(TunerConfig{}.validate());
  EXPECT_EQ(TunerConfig{}.resolved_max_iters(256), 16);
  auto bad = [](auto mutate) {
    TunerConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](TunerConfig& c) { c.delta1 = 0.06; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.delta1 = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.delta2 = 1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.eps1 = 1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.eps2 = -0.5; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.b0 = 12; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.mag_floor = 1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](TunerConfig& c) { c.max_tuning_iters = -1; }).validate(), std::invalid_argument);
}

TEST(Detect, SingleSpike) {
  TunerConfig cfg;
  cfg.b0 = 8;
  for (int t = 0; t < 20; ++t) {
    const PlantedSignal s = generate_planted(64, 1, 400 + t);
    Rng rng(500 + t);
    const Detection d = detect_sparsity(s.x, cfg, rng);
    EXPECT_EQ(d.state.detected_k, 1) << "seed " << 400 + t;
    EXPECT_TRUE(std::binary_search(d.selected.begin(), d.selected.end(), s.truth.begin()->first));
  }
}

TEST(Detect, ZeroSignal) {
  Rng rng(43);
  const Detection d = detect_sparsity(ComplexMatrix(64), TunerConfig{}, rng);
  EXPECT_EQ(d.state.detected_k, 0);
  EXPECT_TRUE(d.state.converged);
  ASSERT_EQ(d.state.history.size(), 2u);
  EXPECT_TRUE(std::isnan(d.state.history[1].ratio));
  const AtsfftResult r = atsfft2d(ComplexMatrix(64), TunerConfig{}, 8, 1);
  EXPECT_TRUE(r.spectrum.empty());
}

TEST(Detect, TrajectoryStaysOnPowersOfTwo) {
  const TunerConfig cfg;
  for (int t = 0; t < 30; ++t) {
    const int n = t % 2 == 0 ? 256 : 512;
    const int k = 1 << (t % 5);
    const PlantedSignal s = generate_planted(n, k, 600 + t);
    Rng rng(700 + t);
    const Detection d = detect_sparsity(s.x, cfg, rng);
    ASSERT_LE(static_cast<int>(d.state.history.size()), cfg.resolved_max_iters(n));
    ASSERT_EQ(d.candidate_sets.size(), d.state.history.size());
    EXPECT_TRUE(std::isnan(d.state.history[0].ratio));
    for (const TuningStep& st : d.state.history) {
      ASSERT_TRUE(is_power_of_two(st.bins));
      ASSERT_GE(st.bins, 4);
      ASSERT_LE(st.bins, n);
      ASSERT_EQ(n % st.bins, 0);
    }
    for (std::size_t i = 1; i < d.state.history.size(); ++i) {
      const TuningStep& a = d.state.history[i - 1];
      const TuningStep& b = d.state.history[i];
      if (a.count > 0) {
        ASSERT_DOUBLE_EQ(b.ratio, std::abs(1.0 - static_cast<double>(b.count) / a.count));
      }
    }
  }
}

TEST(Detect, CapReturnsBestStateUnconverged) {
  TunerConfig cfg;
  cfg.max_tuning_iters = 1;
  const PlantedSignal s = generate_planted(256, 4, 3);
  Rng rng(44);
  const Detection d = detect_sparsity(s.x, cfg, rng);
  EXPECT_FALSE(d.state.converged);
  EXPECT_EQ(d.state.history.size(), 1u);
  EXPECT_EQ(d.state.final_bins, 16);
  EXPECT_EQ(d.state.detected_k, d.state.history[0].count);
}

TEST(Atsfft, DcSpikeMatchesNaiveDft) {
  const int n = 64;
  ComplexMatrix xh(n);
  xh(0, 0) = Complex{0.6, -0.8};
  const ComplexMatrix x = ifft2d(xh);
  const AtsfftResult r = atsfft2d(x, TunerConfig{}, 8, 11);
  const Complex ref = dft2d_naive(x)(0, 0);
  ASSERT_EQ(r.spectrum.size(), 1u);
  EXPECT_NEAR(std::abs(r.spectrum.value_at({0, 0}) - ref), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(ref - static_cast<double>(n) * n * x(0, 0)), 0.0, 1e-9);
}

TEST(Atsfft, ErrorComparableToSfft) {
  const int n = 256, k = 8;
  std::vector<double> ats, sf;
  for (int t = 0; t < 20; ++t) {
    const PlantedSignal s = generate_planted(n, k, 800 + t);
    SfftConfig cfg;
    cfg.n = n;
    cfg.k = k;
    sf.push_back(error_metric(sfft2d(s.x, cfg, 900 + t), s.truth, k));
    ats.push_back(error_metric(atsfft2d(s.x, TunerConfig{}, 8, 900 + t).spectrum, s.truth, k));
  }
  std::nth_element(ats.begin(), ats.begin() + 10, ats.end());
  std::nth_element(sf.begin(), sf.begin() + 10, sf.end());
  EXPECT_LE(ats[10], 10.0 * sf[10] + 1e-15);
}

TEST(Atsfft, DeterministicAndThreadIndependent) {
  const PlantedSignal s = generate_planted(256, 8, 21);
  TunerConfig cfg;
  const AtsfftResult a = atsfft2d(s.x, cfg, 8, 5);
  cfg.threads = 3;
  WindowCache cache;
  const AtsfftResult b = atsfft2d(s.x, cfg, 8, 5, &cache);
  EXPECT_EQ(a.spectrum, b.spectrum);
  EXPECT_EQ(a.state.detected_k, b.state.detected_k);
  EXPECT_EQ(a.state.final_bins, b.state.final_bins);
  EXPECT_THROW(atsfft2d(s.x, cfg, 0, 5), std::invalid_argument);
}

}  // namespace
}  // namespace sfft
