#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "sfft/atsfft.hpp"
#include "sfft/bench.hpp"
#include "sfft/fft.hpp"
#include "sfft/flat_window.hpp"
#include "sfft/hashing.hpp"
#include "sfft/permutation.hpp"
#include "sfft/random.hpp"
#include "sfft/sfft.hpp"
#include "sfft/signal.hpp"

namespace sfft::bench {

namespace {

ComplexMatrix random_matrix(int n, Rng& rng) {
  ComplexMatrix m(n);
  for (Complex& v : m.data()) v = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  return m;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

CheckResult fft_oracle(Rng& rng) {
  double worst = 0.0;
  for (int n = 4; n <= 32; n *= 2) {
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix x = random_matrix(n, rng);
      worst = std::max(worst, relative_frobenius_error(fft2d(x), dft2d_naive(x)));
    }
  }
  return {"fft2d matches the naive DFT", worst <= 1e-9, "max relative error " + sci(worst)};
}

CheckResult permutation_identity(Rng& rng) {
  double worst = 0.0;
  const int n = 16;
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix x = random_matrix(n, rng);
    const PermutationParams p = draw_permutation(n, rng);
    ComplexMatrix px(n);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) px(u, v) = x(static_cast<int>((p.sigma1 * u + p.tau1) % n), static_cast<int>((p.sigma2 * v + p.tau2) % n));
    }
    const ComplexMatrix xh = fft2d(x);
    const ComplexMatrix ph = fft2d(px);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double angle = 2.0 * kPi * static_cast<double>((p.tau1 * i + p.tau2 * j) % n) / n;
        const Complex expect = xh(i, j) * Complex{std::cos(angle), std::sin(angle)};
        const Complex got = ph(static_cast<int>((p.sigma1 * i) % n), static_cast<int>((p.sigma2 * j) % n));
        worst = std::max(worst, std::abs(got - expect));
      }
    }
  }
  return {"permutation moves and phase-twists the spectrum", worst <= 1e-9, "max deviation " + sci(worst)};
}

CheckResult subsample_identity(Rng& rng) {
  double worst = 0.0;
  const int n = 32, b = 8;
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix z = random_matrix(n, rng);
    const ComplexMatrix full = fft2d(z);
    const ComplexMatrix folded = fft2d(subsample_sum(z, b));
    for (int i = 0; i < b; ++i) {
      for (int j = 0; j < b; ++j) worst = std::max(worst, std::abs(folded(i, j) - full(i * (n / b), j * (n / b))));
    }
  }
  return {"subsample-and-sum gives the strided spectrum", worst <= 1e-9, "max deviation " + sci(worst)};
}

CheckResult window_quality() {
  const FlatWindow w = build_flat_window(256, 16, 1e-8);
  const double pass = w.measured_pass_deviation();
  const double stop = w.measured_stop_leakage();
  return {"flat window N=256 B=16 meets its tolerances", pass <= 1e-6 && stop <= 1e-8,
          "pass deviation " + sci(pass) + ", stop leakage " + sci(stop)};
}

CheckResult hash_roundtrip(Rng& rng) {
  const int n = 64, b = 8;
  bool ok = true;
  for (int t = 0; t < 3 && ok; ++t) {
    const PermutationParams p = draw_permutation(n, rng);
    std::vector<int> seen(static_cast<std::size_t>(n) * n, 0);
    for (int bi = 0; bi < b; ++bi) {
      for (int bj = 0; bj < b; ++bj) {
        for (const Coord& c : unhash_bin({bi, bj}, p, n, b)) {
          ok = ok && hash_coord(c.i, c.j, p, n, b) == Coord{bi, bj};
          ++seen[static_cast<std::size_t>(c.i) * n + c.j];
        }
      }
    }
    for (int s : seen) ok = ok && s == 1;
  }
  return {"reverse hashing partitions the frequencies", ok, ok ? "every frequency in exactly one bin" : "mismatch"};
}

CheckResult update_table() {
  const TunerConfig cfg;
  const double rs[] = {0.0, 0.019, 0.02, 0.049, 0.05, 1.0};
  const int expect_factor_x2[] = {1, 1, 2, 2, 4, 4};  // target B = factor/2 * B
  bool ok = true;
  for (int b = 8; b <= 256; b *= 2) {
    for (int r = 0; r < 6; ++r) {
      const int want = std::min(256, b * expect_factor_x2[r] / 2);
      ok = ok && update_B(b, rs[r], cfg, 256) == want;
    }
  }
  return {"bin update follows the three ratio bands", ok, ok ? "all branches" : "mismatch"};
}

CheckResult degenerate_exactness(Rng& rng) {
  const int n = 16;
  const ComplexMatrix x = random_matrix(n, rng);
  const FlatWindow w = build_flat_window(n, n, 1e-8);
  std::vector<Coord> all;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) all.push_back({i, j});
  }
  const auto est = estimate_once(x, all, PermutationParams::identity(n), w);
  const ComplexMatrix ref = fft2d(x);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < all.size(); ++idx) {
    worst = std::max(worst, est[idx] ? std::abs(*est[idx] - ref(all[idx].i, all[idx].j)) : 1.0);
  }
  return {"B = N estimates reproduce fft2d", worst <= 1e-9, "max deviation " + sci(worst)};
}

CheckResult planted_recovery() {
  const PlantedSignal s = generate_planted(64, 4, 99);
  SfftConfig cfg;
  cfg.n = 64;
  cfg.k = 4;
  const double e = error_metric(sfft2d(s.x, cfg, 5), s.truth, 4);
  return {"sfft2d recovers a planted 4-sparse spectrum", e <= 1e-6, "error " + sci(e)};
}

CheckResult csv_roundtrip() {
  std::vector<ResultRow> rows(3);
  rows[0] = {Algorithm::Dense, 256, 8, 0, 0.012345678901234567, 1.1e-17, {}, {}, {}, "ok"};
  rows[1] = {Algorithm::Sfft, 256, 8, 1, 3e-3, 2.5e-16, {}, {}, 64, "ok"};
  rows[2] = {Algorithm::Atsfft, 512, 2, 7, 1.0 / 3.0, 0.125, 2, true, 32, "ok"};
  std::stringstream ss;
  write_csv(ss, rows);
  const bool ok = read_csv(ss) == rows;
  return {"result CSV round-trips", ok, ok ? "identical rows" : "rows differ"};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CheckResult> out;
  auto guarded = [&](auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({"(check threw)", false, e.what()});
    }
  };
  guarded([&] { return fft_oracle(rng); });
  guarded([&] { return permutation_identity(rng); });
  guarded([&] { return subsample_identity(rng); });
  guarded([&] { return window_quality(); });
  guarded([&] { return hash_roundtrip(rng); });
  guarded([&] { return update_table(); });
  guarded([&] { return degenerate_exactness(rng); });
  guarded([&] { return planted_recovery(); });
  guarded([&] { return csv_roundtrip(); });
  return out;
}

}  // namespace sfft::bench
