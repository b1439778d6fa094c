#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace refmlm {

inline constexpr unsigned kMaxWordWidth = 64;

// Mask of the low `width` bits. width must be in 1..64.
constexpr std::uint64_t low_mask(unsigned width) noexcept
{
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

constexpr bool is_power_of_two(std::uint64_t v) noexcept
{
  return v != 0 && (v & (v - 1)) == 0;
}

// Unsigned integer tagged with its declared bit width. value < 2^width always.
class UWord
{
public:
  constexpr UWord() = default;

  UWord(std::uint64_t value, unsigned width)
    : value_(value), width_(width)
  {
    if (width == 0 || width > kMaxWordWidth)
      throw std::invalid_argument("UWord width must be in 1..64, got " + std::to_string(width));
    if (value > low_mask(width))
      throw std::out_of_range("value " + std::to_string(value) + " does not fit in "
                              + std::to_string(width) + " bits");
  }

  constexpr std::uint64_t value() const noexcept { return value_; }
  constexpr unsigned width() const noexcept { return width_; }

  friend constexpr bool operator==(const UWord&, const UWord&) = default;

private:
  std::uint64_t value_ = 0;
  unsigned width_ = 1;
};

} // namespace refmlm
