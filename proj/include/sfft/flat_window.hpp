#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace sfft {

struct WindowOptions {
  // Allowed relative deviation of the 2D response from its DC value inside
  // the pass region max(|i|,|j|) <= N/(2B).
  double delta_pass = 1e-6;
  // The stop band starts at stop_bins * N/B (circular distance, per axis).
  double stop_bins = 1.0;
  // Upper bound on the per-axis space-domain support; 0 means N.
  int max_support = 0;
};

/// Separable flat window: a boxcar of frequency half-width h smoothed by a
/// Gaussian of width sigma, truncated in space to `support()` taps per axis.
///
/// The 2D window is the outer product of one real, even 1D prototype, so the
/// 2D response is gain(i,j) = response(i) * response(j). The response is the
/// exact length-N DFT of the truncated taps, normalized to 1 at DC.
class FlatWindow {
 public:
  int n() const { return n_; }
  int bins() const { return bins_; }

  // Per-axis taps cover space indices origin() ... origin() + support() - 1.
  int support() const { return static_cast<int>(taps_.size()); }
  int origin() const { return origin_; }
  bool full_support() const { return support() == n_; }
  double tap(int t) const { return taps_[static_cast<std::size_t>(t - origin_)]; }
  const std::vector<double>& taps() const { return taps_; }

  double response(std::int64_t f) const { return response_[static_cast<std::size_t>(f & (n_ - 1))]; }
  const std::vector<double>& response() const { return response_; }
  double gain(std::int64_t i, std::int64_t j) const { return response(i) * response(j); }

  /// N*N samples of the 2D response, row-major.
  std::vector<double> frequency_response_2d() const;

  int pass_halfwidth() const { return pass_halfwidth_; }
  int stop_start() const { return stop_start_; }
  double delta_pass() const { return delta_pass_; }
  double delta_stop() const { return delta_stop_; }
  double boxcar_halfwidth() const { return boxcar_halfwidth_; }
  double gaussian_sigma() const { return gaussian_sigma_; }

  /// Largest 2D pass-band deviation and stop-band magnitude, each relative
  /// to gain(0,0), computed by scanning all N*N frequencies.
  double measured_pass_deviation() const;
  double measured_stop_leakage() const;

 private:
  friend FlatWindow build_flat_window(int, int, double, const WindowOptions&);

  int n_ = 0;
  int bins_ = 0;
  int origin_ = 0;
  std::vector<double> taps_;
  std::vector<double> response_;
  int pass_halfwidth_ = 0;
  int stop_start_ = 0;
  double delta_pass_ = 0.0;
  double delta_stop_ = 0.0;
  double boxcar_halfwidth_ = 0.0;
  double gaussian_sigma_ = 0.0;
};

/// Builds a window for N x N signals hashed into B x B bins.
/// Throws std::invalid_argument when B does not divide N or the tolerances
/// cannot be met (support over `max_support`, or below round-off).
FlatWindow build_flat_window(int n, int bins, double delta_stop, const WindowOptions& options = {});

/// Window used by the transforms. A window with a wider transition (stop band
/// from 2N/B, loose pass band) is used when its support samples fewer than
/// half of the N^2 inputs; otherwise the strict full-support window is
/// returned, since it costs at most twice as much and leaks far less.
FlatWindow select_engine_window(int n, int bins, double delta_stop);

/// Thread-safe memo of select_engine_window keyed by (N, B).
class WindowCache {
 public:
  explicit WindowCache(double delta_stop = 1e-8) : delta_stop_(delta_stop) {}

  std::shared_ptr<const FlatWindow> get(int n, int bins);

  /// Builds every window for N and B in {4, 8, ..., N}.
  void prewarm(int n);
  void clear();
  double delta_stop() const { return delta_stop_; }

 private:
  double delta_stop_;
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const FlatWindow>> windows_;
};

}  // namespace sfft
