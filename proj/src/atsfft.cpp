#include "sfft/atsfft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "sfft/hashing.hpp"
#include "sfft/permutation.hpp"
#include "sfft/sfft.hpp"

namespace sfft {

namespace {

constexpr std::uint64_t kDetectionStream = 3;

int clamp_bins(int bins, int n) { return std::clamp(bins, std::min(4, n), n); }

std::shared_ptr<const FlatWindow> window_for(int n, int bins, const TunerConfig& cfg, WindowCache* cache) {
  if (cache != nullptr) return cache->get(n, bins);
  return std::make_shared<const FlatWindow>(select_engine_window(n, bins, cfg.delta_stop));
}

}  // namespace

void TunerConfig::validate() const {
  if (!(0.0 < delta1 && delta1 < delta2 && delta2 < 1.0)) {
    throw std::invalid_argument("TunerConfig: need 0 < delta1 < delta2 < 1");
  }
  if (!(0.0 < eps1 && eps1 < 1.0)) throw std::invalid_argument("TunerConfig: need 0 < eps1 < 1");
  if (!(eps2 >= 0.0)) throw std::invalid_argument("TunerConfig: need eps2 >= 0");
  if (!is_power_of_two(b0)) throw std::invalid_argument("TunerConfig: B0 must be a power of 2");
  if (!(mag_floor >= 0.0 && mag_floor < 1.0)) throw std::invalid_argument("TunerConfig: mag_floor must lie in [0, 1)");
  if (!(tie_tol >= 0.0 && tie_tol < 1.0)) throw std::invalid_argument("TunerConfig: tie_tol must lie in [0, 1)");
  if (max_tuning_iters < 0) throw std::invalid_argument("TunerConfig: max_tuning_iters must be >= 0");
}

LocalMaxima count_local_maxima(const ComplexMatrix& bins, double mag_floor, double tie_tol) {
  const int b = bins.side();
  const std::size_t cells = static_cast<std::size_t>(b) * b;
  std::vector<double> mag(cells);
  auto data = bins.data();
  double peak = 0.0;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    mag[idx] = std::abs(data[idx]);
    peak = std::max(peak, mag[idx]);
  }
  LocalMaxima out;
  if (peak <= 0.0) return out;
  const double floor = mag_floor * peak;
  const int mask = b - 1;
  auto index = [&](int i, int j) { return static_cast<std::size_t>(i & mask) * b + (j & mask); };

  // A bin is on a peak when no neighbour beats it by more than the tie
  // tolerance. Connected peak bins form one maximum.
  std::vector<char> on_peak(cells, 0);
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) {
      const double m = mag[index(i, j)];
      if (m < floor || m <= 0.0) continue;
      bool ok = true;
      for (int di = -1; di <= 1 && ok; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di != 0 || dj != 0) && mag[index(i + di, j + dj)] > m * (1.0 + tie_tol)) {
            ok = false;
            break;
          }
        }
      }
      on_peak[index(i, j)] = ok ? 1 : 0;
    }
  }

  std::vector<char> seen(cells, 0);
  std::vector<Coord> stack;
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < b; ++j) {
      if (!on_peak[index(i, j)] || seen[index(i, j)]) continue;
      std::vector<Coord> group;
      stack.assign(1, Coord{i, j});
      seen[index(i, j)] = 1;
      while (!stack.empty()) {
        const Coord c = stack.back();
        stack.pop_back();
        group.push_back(c);
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const std::size_t nb = index(c.i + di, c.j + dj);
            if (on_peak[nb] && !seen[nb]) {
              seen[nb] = 1;
              stack.push_back({(c.i + di) & mask, (c.j + dj) & mask});
            }
          }
        }
      }
      // A plateau whose edge is tied with, or below, a higher bin is a
      // shoulder, not a maximum.
      bool strict = true;
      for (const Coord& c : group) {
        for (int di = -1; di <= 1 && strict; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const std::size_t nb = index(c.i + di, c.j + dj);
            if (!on_peak[nb] && !(mag[index(c.i, c.j)] > mag[nb] * (1.0 + tie_tol))) {
              strict = false;
              break;
            }
          }
        }
      }
      if (!strict) continue;
      std::sort(group.begin(), group.end());
      Coord top = group.front();
      for (const Coord& c : group) {
        if (mag[index(c.i, c.j)] > mag[index(top.i, top.j)]) top = c;
      }
      out.coords.push_back(top);
      out.members.insert(out.members.end(), group.begin(), group.end());
    }
  }
  std::sort(out.coords.begin(), out.coords.end());
  std::sort(out.members.begin(), out.members.end());
  out.count = static_cast<int>(out.coords.size());
  return out;
}

int update_B(int bins, double ratio, const TunerConfig& cfg, int n) {
  double factor = 1.0;
  if (ratio < cfg.delta1) {
    factor = cfg.eps1;
  } else if (ratio >= cfg.delta2) {
    factor = 1.0 + cfg.eps2;
  }
  const double target = std::log2(static_cast<double>(bins) * factor);
  const int exponent = std::clamp(static_cast<int>(std::lround(target)), 0, 30);
  return clamp_bins(1 << exponent, n);
}

Detection detect_sparsity(const ComplexMatrix& x, const TunerConfig& cfg, Rng& rng, WindowCache* cache) {
  cfg.validate();
  const int n = x.side();
  if (n < 2) throw std::invalid_argument("detect_sparsity: N must be >= 2");
  const int max_iters = std::max(1, cfg.resolved_max_iters(n));

  Detection det;
  TunerState& st = det.state;

  auto pass = [&](int bins) {
    const auto w = window_for(n, bins, cfg, cache);
    const PermutationParams p = draw_permutation(n, rng);
    const LocalMaxima lm = count_local_maxima(hash_to_bins(x, p, *w), cfg.mag_floor, cfg.tie_tol);
    std::vector<Coord> cands;
    for (const Coord& bin : lm.members) {
      auto coords = unhash_bin(bin, p, n, bins);
      cands.insert(cands.end(), coords.begin(), coords.end());
    }
    std::sort(cands.begin(), cands.end());
    det.candidate_sets.push_back(std::move(cands));
    return lm.count;
  };
  auto finish = [&](std::size_t step) {
    st.detected_k = st.history[step].count;
    st.final_bins = st.history[step].bins;
  };

  int bins = clamp_bins(cfg.b0, n);
  st.history.push_back({bins, pass(bins), std::numeric_limits<double>::quiet_NaN()});
  bins = clamp_bins(2 * bins, n);

  while (static_cast<int>(st.history.size()) < max_iters) {
    const int prev = st.history.back().count;
    const int count = pass(bins);
    double ratio;
    bool in_band;
    if (prev == 0) {
      // Both counts zero: nothing to find. Zero then nonzero: bins were too coarse.
      ratio = count == 0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
      in_band = count == 0;
    } else {
      ratio = std::abs(1.0 - static_cast<double>(count) / prev);
      in_band = ratio >= cfg.delta1 && ratio < cfg.delta2;
    }
    st.history.push_back({bins, count, ratio});
    const std::size_t now = st.history.size() - 1;

    if (in_band) {
      st.converged = true;
      finish(now);
      break;
    }
    std::size_t seen = now;
    for (std::size_t s = 0; s < now; ++s) {
      if (st.history[s].bins == bins && st.history[s].count == count) {
        seen = s;
        break;
      }
    }
    if (seen != now) {
      // A repeated state closes a cycle; settle on its largest B. Hash
      // collisions only ever merge maxima, so the count reported is the
      // largest one seen on the whole trajectory.
      int top = 0;
      for (std::size_t s = seen; s <= now; ++s) top = std::max(top, st.history[s].bins);
      int most = 0;
      for (const TuningStep& step : st.history) most = std::max(most, step.count);
      st.converged = true;
      st.detected_k = most;
      st.final_bins = top;
      break;
    }
    bins = update_B(bins, ratio, cfg, n);
  }

  if (!st.converged) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < st.history.size(); ++s) {
      const TuningStep& a = st.history[s];
      const TuningStep& b = st.history[best];
      if (a.count > b.count || (a.count == b.count && a.bins >= b.bins)) best = s;
    }
    finish(best);
  }

  const int iters = static_cast<int>(det.candidate_sets.size());
  det.selected = vote_and_select(det.candidate_sets, (iters + 1) / 2);
  return det;
}

AtsfftResult atsfft2d(const ComplexMatrix& x, const TunerConfig& cfg, int est_loops, std::uint64_t seed,
                      WindowCache* cache) {
  if (est_loops < 1) throw std::invalid_argument("atsfft2d: est_loops must be >= 1");
  Rng rng(derive_seed(seed, kDetectionStream));
  Detection det = detect_sparsity(x, cfg, rng, cache);
  AtsfftResult out{SparseSpectrum(x.side()), det.state};
  if (det.state.detected_k == 0 || det.selected.empty()) return out;
  const auto w = window_for(x.side(), det.state.final_bins, cfg, cache);
  out.spectrum = estimate_coefficients(x, det.selected, *w, est_loops, seed, cfg.gain_floor, cfg.prune_ratio,
                                       cfg.leak_tol, cfg.threads);
  return out;
}

}  // namespace sfft
