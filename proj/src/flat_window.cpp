#include "sfft/flat_window.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sfft/core.hpp"
#include "sfft/fft.hpp"

namespace sfft {

namespace {

// Upper-tail probability of the standard normal.
double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// z with normal_tail(z) == q, for q in (0, 1).
double normal_tail_inverse(double q) {
  double lo = -40.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normal_tail(mid) > q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int circular_distance(int f, int n) {
  const int m = ((f % n) + n) % n;
  return std::min(m, n - m);
}

}  // namespace

FlatWindow build_flat_window(int n, int bins, double delta_stop, const WindowOptions& options) {
  if (!is_power_of_two(n) || !is_power_of_two(bins) || bins > n) {
    throw std::invalid_argument("build_flat_window: N and B must be powers of 2 with B dividing N");
  }
  if (!(delta_stop > 0.0 && delta_stop < 1.0) || !(options.delta_pass > 0.0 && options.delta_pass < 1.0)) {
    throw std::invalid_argument("build_flat_window: tolerances must lie in (0, 1)");
  }
  const int max_support = options.max_support > 0 ? std::min(options.max_support, n) : n;
  if (bins == n) {
    // One frequency per bin: constant taps, so each frequency reaches only
    // its own bin.
    FlatWindow w;
    w.n_ = n;
    w.bins_ = bins;
    w.origin_ = -n / 2;
    w.taps_.assign(static_cast<std::size_t>(n), 1.0 / n);
    w.response_.assign(static_cast<std::size_t>(n), 0.0);
    w.response_[0] = 1.0;
    w.stop_start_ = 1;
    w.delta_pass_ = options.delta_pass;
    w.delta_stop_ = delta_stop;
    return w;
  }

  const int bin_width = n / bins;
  const int pass = bin_width / 2;
  const int stop = std::min(n / 2, static_cast<int>(std::ceil(options.stop_bins * bin_width - 1e-9)));
  if (stop <= pass) throw std::invalid_argument("build_flat_window: stop band must start beyond the pass band");

  // Per-axis budgets. The 2D deviation over the pass square is at most
  // 1 - (1 - d1)^2, so d1 = 1 - sqrt(1 - delta_pass). Half of each budget is
  // held back for truncation error.
  const double d1 = 1.0 - std::sqrt(1.0 - options.delta_pass);
  const double a = normal_tail_inverse(0.5 * d1);
  const double b = normal_tail_inverse(0.3 * delta_stop);
  const double sigma = static_cast<double>(stop - pass) / (a + b);
  const double h = pass + a * sigma;

  std::vector<Complex> spectrum(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) {
    const double d = circular_distance(f, n);
    spectrum[static_cast<std::size_t>(f)] = normal_tail((d - h) / sigma) - normal_tail((d + h) / sigma);
  }
  const FftPlan plan(n);
  plan.inverse(spectrum);
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) g[static_cast<std::size_t>(t)] = spectrum[static_cast<std::size_t>(t)].real() / n;
  // The prototype is even; average out round-off so taps are exactly symmetric.
  for (int t = 1; t < n / 2; ++t) {
    const double v = 0.5 * (g[static_cast<std::size_t>(t)] + g[static_cast<std::size_t>(n - t)]);
    g[static_cast<std::size_t>(t)] = v;
    g[static_cast<std::size_t>(n - t)] = v;
  }

  // Smallest half-width whose discarded taps sum below the truncation budget.
  const double tail_budget = 0.05 * delta_stop;
  const int half_n = n / 2;
  double tail = std::abs(g[static_cast<std::size_t>(half_n)]);
  int half = half_n;  // half == half_n means full support
  for (int t = half_n - 1; t >= 0; --t) {
    if (tail > tail_budget) break;
    half = t;
    tail += std::abs(g[static_cast<std::size_t>(t)]) + (t > 0 ? std::abs(g[static_cast<std::size_t>(n - t)]) : 0.0);
  }

  FlatWindow w;
  w.n_ = n;
  w.bins_ = bins;
  w.pass_halfwidth_ = pass;
  w.stop_start_ = stop;
  w.delta_pass_ = options.delta_pass;
  w.delta_stop_ = delta_stop;
  w.boxcar_halfwidth_ = h;
  w.gaussian_sigma_ = sigma;
  if (half >= half_n || 2 * half + 1 >= n) {
    w.origin_ = -half_n;
    w.taps_.resize(static_cast<std::size_t>(n));
  } else {
    w.origin_ = -half;
    w.taps_.resize(static_cast<std::size_t>(2 * half + 1));
  }
  if (w.support() > max_support) {
    throw std::invalid_argument("build_flat_window: tolerance needs support " + std::to_string(w.support()) +
                                " > " + std::to_string(max_support));
  }
  double tap_sum = 0.0;
  for (int t = w.origin_; t < w.origin_ + w.support(); ++t) {
    const double v = g[static_cast<std::size_t>(((t % n) + n) % n)];
    w.taps_[static_cast<std::size_t>(t - w.origin_)] = v;
    tap_sum += v;
  }
  for (auto& v : w.taps_) v /= tap_sum;

  std::vector<Complex> padded(static_cast<std::size_t>(n));
  for (int t = w.origin_; t < w.origin_ + w.support(); ++t) {
    padded[static_cast<std::size_t>(((t % n) + n) % n)] = w.tap(t);
  }
  plan.forward(padded);
  w.response_.resize(static_cast<std::size_t>(n));
  for (int f = 0; f < n; ++f) w.response_[static_cast<std::size_t>(f)] = padded[static_cast<std::size_t>(f)].real();

  // Separable checks; the exhaustive 2D scans give the same answer.
  double pass_lo = w.response(0), pass_hi = w.response(0), stop_max = 0.0, all_max = 0.0;
  for (int f = 0; f < n; ++f) {
    const double r = w.response(f);
    const int d = circular_distance(f, n);
    if (d <= pass) {
      pass_lo = std::min(pass_lo, r);
      pass_hi = std::max(pass_hi, r);
    }
    if (d >= stop) stop_max = std::max(stop_max, std::abs(r));
    all_max = std::max(all_max, std::abs(r));
  }
  const double dc = w.gain(0, 0);
  const double pass_dev = std::max({std::abs(pass_lo * pass_lo - dc), std::abs(pass_hi * pass_hi - dc),
                                    std::abs(pass_lo * pass_hi - dc)}) / dc;
  const double stop_leak = stop_max * all_max / dc;
  if (pass_dev > w.delta_pass_ || stop_leak > w.delta_stop_) {
    throw std::invalid_argument("build_flat_window: tolerances not reachable for N=" + std::to_string(n) +
                                ", B=" + std::to_string(bins));
  }
  return w;
}

std::vector<double> FlatWindow::frequency_response_2d() const {
  std::vector<double> out(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(i) * n_ + j] = gain(i, j);
  }
  return out;
}

double FlatWindow::measured_pass_deviation() const {
  const double dc = gain(0, 0);
  double worst = 0.0;
  for (int i = -pass_halfwidth_; i <= pass_halfwidth_; ++i) {
    for (int j = -pass_halfwidth_; j <= pass_halfwidth_; ++j) {
      worst = std::max(worst, std::abs(gain(i, j) - dc));
    }
  }
  return worst / std::abs(dc);
}

double FlatWindow::measured_stop_leakage() const {
  const double dc = gain(0, 0);
  double worst = 0.0;
  for (int i = 0; i < n_; ++i) {
    const bool row_stop = circular_distance(i, n_) >= stop_start_;
    for (int j = 0; j < n_; ++j) {
      if (row_stop || circular_distance(j, n_) >= stop_start_) worst = std::max(worst, std::abs(gain(i, j)));
    }
  }
  return worst / std::abs(dc);
}

FlatWindow select_engine_window(int n, int bins, double delta_stop) {
  if (bins < n) {
    WindowOptions relaxed;
    relaxed.delta_pass = 0.9;
    relaxed.stop_bins = 2.0;
    FlatWindow w = build_flat_window(n, bins, delta_stop, relaxed);
    // Strict full support reads N^2 samples; keep the relaxed window only
    // when that is more than twice its own cost.
    if (2.0 * w.support() * w.support() < static_cast<double>(n) * n) return w;
  }
  return build_flat_window(n, bins, delta_stop);
}

std::shared_ptr<const FlatWindow> WindowCache::get(int n, int bins) {
  std::lock_guard lock(mutex_);
  auto& slot = windows_[{n, bins}];
  if (!slot) slot = std::make_shared<const FlatWindow>(select_engine_window(n, bins, delta_stop_));
  return slot;
}

void WindowCache::prewarm(int n) {
  for (int b = std::min(4, n); b <= n; b *= 2) get(n, b);
}

void WindowCache::clear() {
  std::lock_guard lock(mutex_);
  windows_.clear();
}

}  // namespace sfft
