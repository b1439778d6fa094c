#include "refmlm/mitchell.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace refmlm {

namespace {

void require_multiplier_operands(const UWord& a, const UWord& b)
{
  if (a.width() != b.width())
    throw std::invalid_argument("operand widths differ: " + std::to_string(a.width()) + " vs "
                                + std::to_string(b.width()));
  if (a.width() < 2 || a.width() > 32)
    throw std::invalid_argument("multiplier width must be in 2..32, got "
                                + std::to_string(a.width()));
}

} // namespace

double LogDecomposition::fraction() const noexcept
{
  return static_cast<double>(mantissa_bits) / static_cast<double>(std::uint64_t{1} << k);
}

unsigned leading_one(const UWord& n)
{
  if (n.value() == 0)
    throw std::domain_error("no leading one: operand is zero");
  return static_cast<unsigned>(std::bit_width(n.value())) - 1;
}

LogDecomposition log_decompose(const UWord& n)
{
  const unsigned k = leading_one(n);
  return {k, n.value() - (std::uint64_t{1} << k)};
}

namespace detail {

std::uint64_t mitchell_raw(std::uint64_t a, std::uint64_t b, bool* carry_case) noexcept
{
  if (carry_case)
    *carry_case = false;
  if (a == 0 || b == 0)
    return 0;

  const unsigned k1 = static_cast<unsigned>(std::bit_width(a)) - 1;
  const unsigned k2 = static_cast<unsigned>(std::bit_width(b)) - 1;
  const std::uint64_t m1 = a - (std::uint64_t{1} << k1);
  const std::uint64_t m2 = b - (std::uint64_t{1} << k2);

  // (x1 + x2) * 2^(k1+k2), with both fractions aligned on k1+k2 bits.
  const std::uint64_t mantissa_sum = (m1 << k2) + (m2 << k1);
  const std::uint64_t one = std::uint64_t{1} << (k1 + k2);

  if (mantissa_sum < one)
    return one + mantissa_sum;

  if (carry_case)
    *carry_case = true;
  return mantissa_sum << 1;
}

std::uint64_t efmlm2_raw(std::uint64_t a, std::uint64_t b) noexcept
{
  // 3x3 is the only 2-bit pair Mitchell gets wrong (1000b instead of 1001b).
  const std::uint64_t correction = (a == 3 && b == 3) ? 1 : 0;
  return mitchell_raw(a, b) + correction;
}

} // namespace detail

MitchellProduct mitchell_multiply(const UWord& a, const UWord& b)
{
  require_multiplier_operands(a, b);
  bool carry = false;
  const std::uint64_t p = detail::mitchell_raw(a.value(), b.value(), &carry);
  return {UWord(p, 2 * a.width()), carry};
}

UWord efmlm2_multiply(const UWord& a, const UWord& b)
{
  if (a.width() != 2 || b.width() != 2)
    throw std::invalid_argument("efmlm2_multiply takes 2-bit operands");
  return UWord(detail::efmlm2_raw(a.value(), b.value()), 4);
}

} // namespace refmlm
