#pragma once

#include "refmlm/uword.hpp"

#include <cstdint>

namespace refmlm {

// Split of a nonzero operand n into 2^k + mantissa_bits, mantissa_bits < 2^k.
// The mantissa read as a binary fraction is x = mantissa_bits / 2^k.
struct LogDecomposition
{
  unsigned k = 0;
  std::uint64_t mantissa_bits = 0;

  double fraction() const noexcept;
  std::uint64_t reconstruct() const noexcept { return (std::uint64_t{1} << k) + mantissa_bits; }

  friend bool operator==(const LogDecomposition&, const LogDecomposition&) = default;
};

struct MitchellProduct
{
  UWord value;
  bool carry_case = false;   // x1 + x2 >= 1
};

// Position of the most significant set bit. Throws std::domain_error on zero.
unsigned leading_one(const UWord& n);

LogDecomposition log_decompose(const UWord& n);

// Mitchell logarithmic multiplication of two w-bit operands, exact fixed
// point, product carries width 2w. A zero operand gives zero.
MitchellProduct mitchell_multiply(const UWord& a, const UWord& b);

// 2x2 Mitchell multiplier with the single-case correction (3x3 -> 9).
UWord efmlm2_multiply(const UWord& a, const UWord& b);

namespace detail {

// Raw-value kernels shared by the recursive multiplier. Zero operands give
// zero; operands must be small enough that the product fits 64 bits.
std::uint64_t mitchell_raw(std::uint64_t a, std::uint64_t b, bool* carry_case = nullptr) noexcept;

std::uint64_t efmlm2_raw(std::uint64_t a, std::uint64_t b) noexcept;

} // namespace detail

} // namespace refmlm
