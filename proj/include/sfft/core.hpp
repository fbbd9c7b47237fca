#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sfft {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

constexpr bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr int log2_exact(std::int64_t n) {
  int r = 0;
  while ((std::int64_t{1} << r) < n) ++r;
  return r;
}

/// Square N x N grid of complex samples, stored row-major.
///
/// The side is always a power of two, and every index is taken modulo the
/// side, so `m(-1, 0)` names the last row. Negative indices are fine because
/// wrapping is a mask on the two's-complement value.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(int side) : side_(side), mask_(side - 1) {
    if (!is_power_of_two(side)) {
      throw std::invalid_argument("ComplexMatrix: side must be a power of 2");
    }
    data_.assign(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), Complex{});
  }

  int side() const { return side_; }
  std::size_t size() const { return data_.size(); }

  Complex& operator()(std::int64_t r, std::int64_t c) {
    return data_[static_cast<std::size_t>(r & mask_) * side_ + static_cast<std::size_t>(c & mask_)];
  }
  const Complex& operator()(std::int64_t r, std::int64_t c) const {
    return data_[static_cast<std::size_t>(r & mask_) * side_ + static_cast<std::size_t>(c & mask_)];
  }

  std::span<Complex> row(int r) {
    return {data_.data() + static_cast<std::size_t>(r & mask_) * side_, static_cast<std::size_t>(side_)};
  }
  std::span<const Complex> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r & mask_) * side_, static_cast<std::size_t>(side_)};
  }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

 private:
  int side_ = 0;
  std::int64_t mask_ = -1;
  std::vector<Complex> data_;
};

/// Frobenius norm of `a - b` divided by the Frobenius norm of `b` (absolute
/// when `b` is zero).
double relative_frobenius_error(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace sfft
