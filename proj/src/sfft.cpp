#include "sfft/sfft.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "sfft/hashing.hpp"
#include "sfft/parallel.hpp"
#include "sfft/random.hpp"

namespace sfft {

namespace {

constexpr std::uint64_t kLocationStream = 1;
constexpr std::uint64_t kEstimationStream = 2;

double median_of(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

int default_bins(int n, int k) {
  if (n <= 4) return n;
  // Nearest in log2, ties rounding up. With N and k powers of two, sqrt(N*k)
  // is either a power of two or exactly halfway between two of them.
  const double target = 0.5 * std::log2(static_cast<double>(n) * std::max(k, 1));
  const int exponent = static_cast<int>(std::floor(target + 0.5 + 1e-12));
  return std::clamp(1 << std::clamp(exponent, 0, 30), 4, n);
}

void SfftConfig::validate() const {
  if (!is_power_of_two(n) || n < 2) throw std::invalid_argument("SfftConfig: N must be a power of 2, N >= 2");
  if (k < 0) throw std::invalid_argument("SfftConfig: k must be non-negative");
  if (loops < 1) throw std::invalid_argument("SfftConfig: loops must be >= 1");
  if (d_factor < 1) throw std::invalid_argument("SfftConfig: d_factor must be >= 1");
  const int b = resolved_bins();
  if (!is_power_of_two(b) || b > n) throw std::invalid_argument("SfftConfig: B must be a power of 2 dividing N");
  const int t = resolved_threshold();
  if (t < 1 || t > loops) throw std::invalid_argument("SfftConfig: vote threshold must lie in [1, loops]");
  if (static_cast<std::int64_t>(d_factor) * k > static_cast<std::int64_t>(b) * b) {
    throw std::invalid_argument("SfftConfig: bin budget d*k = " + std::to_string(d_factor * k) + " exceeds B^2 = " +
                                std::to_string(b * b));
  }
}

std::vector<Coord> largest_bins(const ComplexMatrix& bin_spectrum, int count) {
  const int b = bin_spectrum.side();
  std::vector<std::pair<double, int>> mags(static_cast<std::size_t>(b) * b);
  auto data = bin_spectrum.data();
  for (std::size_t idx = 0; idx < data.size(); ++idx) mags[idx] = {std::abs(data[idx]), static_cast<int>(idx)};
  count = std::clamp(count, 0, static_cast<int>(mags.size()));
  auto before = [](const auto& l, const auto& r) { return l.first > r.first || (l.first == r.first && l.second < r.second); };
  std::nth_element(mags.begin(), mags.begin() + count, mags.end(), before);
  std::vector<Coord> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int r = 0; r < count; ++r) {
    const int idx = mags[static_cast<std::size_t>(r)].second;
    out.push_back({idx / b, idx % b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Coord> select_location_bins(const ComplexMatrix& bin_spectrum, int count, double tie_tol) {
  const int b = bin_spectrum.side();
  const int cells = b * b;
  const int mask = b - 1;
  std::vector<double> mag(static_cast<std::size_t>(cells));
  auto data = bin_spectrum.data();
  for (int idx = 0; idx < cells; ++idx) mag[static_cast<std::size_t>(idx)] = std::abs(data[static_cast<std::size_t>(idx)]);
  count = std::clamp(count, 0, cells);
  if (count == 0) return {};
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  auto before = [&](int l, int r) {
    const double ml = mag[static_cast<std::size_t>(l)], mr = mag[static_cast<std::size_t>(r)];
    return ml > mr || (ml == mr && l < r);
  };

  for (int ranked = std::min(cells, 9 * count + 16);; ranked = std::min(cells, 2 * ranked)) {
    std::partial_sort(order.begin(), order.begin() + ranked, order.end(), before);
    std::vector<char> chosen(static_cast<std::size_t>(cells), 0);
    std::vector<Coord> out;
    int used = 0;
    double lowest = 0.0;
    bool done = false;
    for (int r = 0; r < ranked; ++r) {
      const int idx = order[static_cast<std::size_t>(r)];
      const double m = mag[static_cast<std::size_t>(idx)];
      if (used == count && m < (1.0 - tie_tol) * lowest) {
        done = true;
        break;
      }
      const int i = idx / b, j = idx % b;
      bool tied = false;
      for (int di = -1; di <= 1 && !tied; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int nb = ((i + di) & mask) * b + ((j + dj) & mask);
          if (nb != idx && chosen[static_cast<std::size_t>(nb)] &&
              std::abs(m - mag[static_cast<std::size_t>(nb)]) <= tie_tol * mag[static_cast<std::size_t>(nb)]) {
            tied = true;
            break;
          }
        }
      }
      if (!tied && used == count) continue;
      if (!tied) ++used;
      chosen[static_cast<std::size_t>(idx)] = 1;
      lowest = m;
      out.push_back({i, j});
    }
    if (done || ranked == cells) {
      std::sort(out.begin(), out.end());
      return out;
    }
  }
}

LocationResult seek_location_once(const ComplexMatrix& x, const SfftConfig& cfg, const FlatWindow& w,
                                  const PermutationParams& p) {
  const int n = x.side();
  const int bins = w.bins();
  if (static_cast<std::int64_t>(cfg.d_factor) * cfg.k > static_cast<std::int64_t>(bins) * bins) {
    throw std::invalid_argument("seek_location_once: bin budget d*k exceeds B^2");
  }
  const ComplexMatrix zhat = hash_to_bins(x, p, w);
  LocationResult result{p, {}};
  for (const Coord& bin : select_location_bins(zhat, cfg.d_factor * cfg.k, cfg.tie_tol)) {
    auto coords = unhash_bin(bin, p, n, bins);
    result.candidates.insert(result.candidates.end(), coords.begin(), coords.end());
  }
  std::sort(result.candidates.begin(), result.candidates.end());
  return result;
}

LocationResult seek_location_once(const ComplexMatrix& x, const SfftConfig& cfg, const FlatWindow& w, Rng& rng) {
  return seek_location_once(x, cfg, w, draw_permutation(x.side(), rng));
}

std::vector<Coord> vote_and_select(const std::vector<std::vector<Coord>>& candidate_sets, int threshold) {
  std::vector<Coord> all;
  for (const auto& set : candidate_sets) {
    std::vector<Coord> distinct = set;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    all.insert(all.end(), distinct.begin(), distinct.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<Coord> selected;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    if (static_cast<int>(j - i) >= threshold) selected.push_back(all[i]);
    i = j;
  }
  return selected;
}

namespace {

struct LoopData {
  std::vector<LoopEstimate> est;
  std::vector<Coord> bin;
  std::vector<Coord> pos;  // permuted frequency
  std::vector<double> gain;
};

LoopData compute_loop(const ComplexMatrix& x, const std::vector<Coord>& coords, const PermutationParams& p,
                      const FlatWindow& w, double gain_floor) {
  const int n = x.side();
  const int bins = w.bins();
  const ComplexMatrix zhat = hash_to_bins(x, p, w);
  const double scale = static_cast<double>(n) * static_cast<double>(n);
  const double floor = gain_floor * std::abs(w.gain(0, 0));
  LoopData d;
  d.est.resize(coords.size());
  d.bin.resize(coords.size());
  d.pos.resize(coords.size());
  d.gain.resize(coords.size());
  for (std::size_t idx = 0; idx < coords.size(); ++idx) {
    const Coord c = coords[idx];
    d.bin[idx] = hash_coord(c.i, c.j, p, n, bins);
    d.pos[idx] = {static_cast<int>((p.sigma1 * c.i) % n), static_cast<int>((p.sigma2 * c.j) % n)};
    const Coord off = offset_coord(c.i, c.j, p, n, bins);
    d.gain[idx] = w.gain(off.i, off.j);
    if (std::abs(d.gain[idx]) < floor) continue;
    const std::int64_t e = (p.tau1 * c.i + p.tau2 * c.j) % n;
    const double angle = -2.0 * kPi * static_cast<double>(e) / static_cast<double>(n);
    const Complex phase{std::cos(angle), std::sin(angle)};
    d.est[idx].value = scale * zhat(d.bin[idx].i, d.bin[idx].j) * phase / d.gain[idx];
  }
  return d;
}

// Flags estimates whose bin collects more than leak_tol * (own gain) from the
// other coordinates, each weighted by weight[other] (1 when weight is empty).
void mark_leaks(LoopData& d, const FlatWindow& w, double leak_tol, const std::vector<double>& weight) {
  if (!(leak_tol > 0.0)) return;
  const int bins = w.bins();
  const int width = w.n() / bins;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> by_bin;
  for (std::size_t idx = 0; idx < d.bin.size(); ++idx) {
    if (weight.empty() || weight[idx] > 0.0) {
      by_bin[static_cast<std::int64_t>(d.bin[idx].i) * bins + d.bin[idx].j].push_back(idx);
    }
  }
  // Coordinates more than `reach` bins away sit in the stop band.
  const int reach = (w.stop_start() + width - 1) / width;
  const int span = std::min(2 * reach + 1, bins);
  for (std::size_t idx = 0; idx < d.bin.size(); ++idx) {
    if (!d.est[idx].value) continue;
    const Coord b = d.bin[idx];
    const double limit = leak_tol * std::abs(d.gain[idx]);
    double sum = 0.0;
    for (int di = -reach; di < span - reach && sum <= limit; ++di) {
      for (int dj = -reach; dj < span - reach; ++dj) {
        const std::int64_t key = static_cast<std::int64_t>((b.i + di) & (bins - 1)) * bins + ((b.j + dj) & (bins - 1));
        auto it = by_bin.find(key);
        if (it == by_bin.end()) continue;
        for (std::size_t other : it->second) {
          if (other == idx) continue;
          const double g = std::abs(w.gain(static_cast<std::int64_t>(b.i) * width - d.pos[other].i,
                                           static_cast<std::int64_t>(b.j) * width - d.pos[other].j));
          sum += weight.empty() ? g : g * weight[other];
        }
      }
    }
    d.est[idx].clean = sum <= limit;
  }
}

}  // namespace

std::vector<LoopEstimate> estimate_loop(const ComplexMatrix& x, const std::vector<Coord>& coords,
                                        const PermutationParams& p, const FlatWindow& w, double gain_floor,
                                        double leak_tol) {
  LoopData d = compute_loop(x, coords, p, w, gain_floor);
  mark_leaks(d, w, leak_tol, {});
  return std::move(d.est);
}

std::vector<std::optional<Complex>> estimate_once(const ComplexMatrix& x, const std::vector<Coord>& coords,
                                                  const PermutationParams& p, const FlatWindow& w,
                                                  double gain_floor, double leak_tol) {
  std::vector<std::optional<Complex>> out;
  out.reserve(coords.size());
  for (const LoopEstimate& e : estimate_loop(x, coords, p, w, gain_floor, leak_tol)) {
    out.push_back(e.clean ? e.value : std::nullopt);
  }
  return out;
}

SparseSpectrum median_combine(const std::vector<std::vector<std::optional<Complex>>>& per_loop,
                              const std::vector<Coord>& coords, int n) {
  SparseSpectrum out(n);
  std::vector<double> re;
  std::vector<double> im;
  for (std::size_t idx = 0; idx < coords.size(); ++idx) {
    re.clear();
    im.clear();
    for (const auto& loop : per_loop) {
      if (idx < loop.size() && loop[idx]) {
        re.push_back(loop[idx]->real());
        im.push_back(loop[idx]->imag());
      }
    }
    if (re.empty()) continue;
    out.set(coords[idx], {median_of(re), median_of(im)});
  }
  return out;
}

SparseSpectrum prune_small(const SparseSpectrum& s, double ratio) {
  double peak = 0.0;
  for (const auto& [c, v] : s) peak = std::max(peak, std::abs(v));
  SparseSpectrum out(s.n());
  for (const auto& [c, v] : s) {
    if (std::abs(v) > ratio * peak) out.set(c, v);
  }
  return out;
}

SparseSpectrum estimate_coefficients(const ComplexMatrix& x, const std::vector<Coord>& coords, const FlatWindow& w,
                                     int loops, std::uint64_t seed, double gain_floor, double prune_ratio,
                                     double leak_tol, int threads) {
  if (coords.empty()) return SparseSpectrum(x.side());
  std::vector<LoopData> per_loop(static_cast<std::size_t>(loops));
  parallel_for(loops, threads, [&](int l) {
    Rng rng(derive_seed(seed, kEstimationStream, static_cast<std::uint64_t>(l)));
    const PermutationParams p = draw_permutation(x.side(), rng);
    per_loop[static_cast<std::size_t>(l)] = compute_loop(x, coords, p, w, gain_floor);
  });
  auto gather = [&](bool clean_only) {
    std::vector<std::vector<std::optional<Complex>>> chosen(per_loop.size(),
                                                            std::vector<std::optional<Complex>>(coords.size()));
    for (std::size_t idx = 0; idx < coords.size(); ++idx) {
      bool any_clean = false;
      for (const LoopData& d : per_loop) any_clean = any_clean || (d.est[idx].value && d.est[idx].clean);
      for (std::size_t l = 0; l < per_loop.size(); ++l) {
        const LoopEstimate& e = per_loop[l].est[idx];
        if (e.value && (!clean_only || e.clean || !any_clean)) chosen[l][idx] = e.value;
      }
    }
    return median_combine(chosen, coords, x.side());
  };
  if (!(leak_tol > 0.0)) return prune_small(gather(false), prune_ratio);

  // A first median over every estimate says which coordinates carry energy;
  // leakage from each neighbour is then weighted by its relative magnitude.
  const SparseSpectrum rough = gather(false);
  double peak = 0.0;
  for (const auto& [c, v] : rough) peak = std::max(peak, std::abs(v));
  std::vector<double> weight(coords.size(), 0.0);
  if (peak > 0.0) {
    for (std::size_t idx = 0; idx < coords.size(); ++idx) weight[idx] = std::abs(rough.value_at(coords[idx])) / peak;
  }
  for (LoopData& d : per_loop) mark_leaks(d, w, leak_tol, weight);
  // Clean estimates where a coordinate has any; otherwise every usable one.
  return prune_small(gather(true), prune_ratio);
}

SparseSpectrum sfft2d(const ComplexMatrix& x, const SfftConfig& cfg, std::uint64_t seed, WindowCache* cache) {
  cfg.validate();
  if (x.side() != cfg.n) throw std::invalid_argument("sfft2d: signal side does not match config N");
  const int bins = cfg.resolved_bins();
  std::shared_ptr<const FlatWindow> window;
  if (cache != nullptr) {
    window = cache->get(cfg.n, bins);
  } else {
    window = std::make_shared<const FlatWindow>(select_engine_window(cfg.n, bins, cfg.delta_stop));
  }

  std::vector<std::vector<Coord>> candidate_sets(static_cast<std::size_t>(cfg.loops));
  parallel_for(cfg.loops, cfg.threads, [&](int l) {
    Rng rng(derive_seed(seed, kLocationStream, static_cast<std::uint64_t>(l)));
    candidate_sets[static_cast<std::size_t>(l)] = seek_location_once(x, cfg, *window, rng).candidates;
  });
  const std::vector<Coord> selected = vote_and_select(candidate_sets, cfg.resolved_threshold());
  return estimate_coefficients(x, selected, *window, cfg.loops, seed, cfg.gain_floor, cfg.prune_ratio, cfg.leak_tol,
                               cfg.threads);
}

}  // namespace sfft
