#pragma once

// Reference computations for the tests. Nothing here calls into the library
// code paths it is used to check.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline std::uint64_t true_product(std::uint64_t a, std::uint64_t b) { return a * b; }

inline unsigned leading_one_by_scan(std::uint64_t n)
{
  unsigned k = 0;
  for (unsigned i = 0; i < 64; ++i)
    if ((n >> i) & 1u)
      k = i;
  return k;
}

inline bool power_of_two_by_scan(std::uint64_t n)
{
  unsigned ones = 0;
  for (unsigned i = 0; i < 64; ++i)
    ones += (n >> i) & 1u;
  return ones == 1;
}

// Mitchell's antilog rule evaluated in floating point with real-valued
// fractions. Exact for operands below 2^20.
inline std::uint64_t mitchell_float(std::uint64_t a, std::uint64_t b)
{
  if (a == 0 || b == 0)
    return 0;
  const unsigned k1 = leading_one_by_scan(a);
  const unsigned k2 = leading_one_by_scan(b);
  const double x1 = static_cast<double>(a) / std::ldexp(1.0, static_cast<int>(k1)) - 1.0;
  const double x2 = static_cast<double>(b) / std::ldexp(1.0, static_cast<int>(k2)) - 1.0;
  const double scale = std::ldexp(1.0, static_cast<int>(k1 + k2));
  const double p = (x1 + x2 < 1.0) ? scale * (1.0 + x1 + x2) : 2.0 * scale * (x1 + x2);
  return static_cast<std::uint64_t>(p);
}

// Schoolbook Karatsuba-Ofman recursion with a caller-supplied 2x2 leaf and
// four half-width products, written independently of the library.
template<class Leaf>
std::uint64_t kom_four(std::uint64_t a, std::uint64_t b, unsigned w, Leaf leaf)
{
  if (w == 2)
    return leaf(a, b);
  const unsigned h = w / 2;
  const std::uint64_t m = (std::uint64_t{1} << h) - 1;
  const std::uint64_t al = a & m, ah = a >> h, bl = b & m, bh = b >> h;
  return kom_four(al, bl, h, leaf) + ((kom_four(ah, bl, h, leaf) + kom_four(al, bh, h, leaf)) << h)
         + (kom_four(ah, bh, h, leaf) << w);
}

// 2x2 Mitchell truth table: every pair is exact except 3x3 -> 8.
inline std::uint64_t mitchell2_table(std::uint64_t a, std::uint64_t b)
{
  return (a == 3 && b == 3) ? 8 : a * b;
}

// Direct 3x3 correlation with exact products, truncating shift, copied borders.
inline std::vector<std::uint8_t> convolve_exact(const std::vector<std::uint8_t>& px, std::size_t rows,
                                                std::size_t cols, const unsigned (&k)[3][3], unsigned shift)
{
  std::vector<std::uint8_t> out = px;
  for (std::size_t r = 1; r + 1 < rows; ++r)
    for (std::size_t c = 1; c + 1 < cols; ++c) {
      unsigned long sum = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          sum += k[i][j] * px[(r + i - 1) * cols + (c + j - 1)];
      out[r * cols + c] = static_cast<std::uint8_t>(sum >> shift);
    }
  return out;
}

} // namespace oracle
