#include "sfft/sparse_spectrum.hpp"

#include <stdexcept>

namespace sfft {

void SparseSpectrum::set(Coord c, Complex value) {
  if (c.i < 0 || c.i >= n_ || c.j < 0 || c.j >= n_) {
    throw std::out_of_range("SparseSpectrum: coordinate outside [0,N)^2");
  }
  entries_[c] = value;
}

std::optional<Complex> SparseSpectrum::find(Coord c) const {
  auto it = entries_.find(c);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

Complex SparseSpectrum::value_at(Coord c) const { return find(c).value_or(Complex{}); }

ComplexMatrix SparseSpectrum::to_dense() const {
  ComplexMatrix m(n_);
  for (const auto& [c, v] : entries_) m(c.i, c.j) = v;
  return m;
}

}  // namespace sfft
