#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>

#include "sfft/core.hpp"

namespace sfft {

/// Frequency (or bin) coordinate: row i, column j.
struct Coord {
  int i = 0;
  int j = 0;
  auto operator<=>(const Coord&) const = default;
};

/// Sparse map from frequency coordinate to coefficient, ordered by (i, j).
class SparseSpectrum {
 public:
  SparseSpectrum() = default;
  explicit SparseSpectrum(int n) : n_(n) {}

  int n() const { return n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Inserts or overwrites. Throws when the coordinate is outside [0,N)^2.
  void set(Coord c, Complex value);
  std::optional<Complex> find(Coord c) const;
  /// Absent coordinates read as zero.
  Complex value_at(Coord c) const;
  void erase(Coord c) { entries_.erase(c); }

  const std::map<Coord, Complex>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  ComplexMatrix to_dense() const;

  bool operator==(const SparseSpectrum&) const = default;

 private:
  int n_ = 0;
  std::map<Coord, Complex> entries_;
};

}  // namespace sfft
