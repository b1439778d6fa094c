#pragma once

#include <cstdint>
#include <stdexcept>

namespace refmlm {

// xorshift64* generator. The stream is part of the noise and sampling
// contracts, so it is spelled out here rather than taken from <random>.
class Xorshift64Star
{
public:
  explicit Xorshift64Star(std::uint64_t seed)
    : state_(seed)
  {
    if (seed == 0)
      throw std::invalid_argument("seed must be nonzero");
  }

  std::uint64_t next() noexcept
  {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 2685821657736338717ull;
  }

  // Uniform in [0, 1) from the top 53 bits of the output.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [1, 2^width - 1] by multiply-high range reduction.
  std::uint64_t next_nonzero(unsigned width) noexcept
  {
    const std::uint64_t span = (width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1);
    __extension__ typedef unsigned __int128 u128;
    return 1 + static_cast<std::uint64_t>((static_cast<u128>(next()) * span) >> 64);
  }

  std::uint64_t state() const noexcept { return state_; }

private:
  std::uint64_t state_;
};

} // namespace refmlm
