#pragma once

#include "refmlm/kom.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace refmlm {

// 8-bit grayscale raster, row-major.
class GrayImage
{
public:
  GrayImage() = default;
  GrayImage(std::size_t rows, std::size_t cols, std::uint8_t fill = 0);
  GrayImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  std::uint8_t at(std::size_t r, std::size_t c) const noexcept { return pixels_[r * cols_ + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) noexcept { return pixels_[r * cols_ + c]; }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Raised for malformed image files; the message names the offending field.
class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Binary PGM (P5, maxval 255). Header comments are accepted on load.
GrayImage load_pgm(std::span<const std::byte> bytes);
std::vector<std::byte> save_pgm(const GrayImage& img);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const GrayImage& img, const std::filesystem::path& path);

struct NoiseSpec
{
  double density = 0.0;      // fraction of pixels corrupted, in [0, 1]
  std::uint64_t seed = 1;    // nonzero

  void validate() const;
};

// Pixels are visited in row-major order with one uniform draw each:
// below p/2 becomes 0, below p becomes 255, otherwise unchanged.
GrayImage add_salt_pepper(const GrayImage& img, const NoiseSpec& spec);

// 3x3 integer kernel whose coefficients sum to exactly 2^scale_shift.
struct Kernel
{
  std::array<std::uint32_t, 9> coefficients{};   // row-major, centre at index 4
  unsigned scale_shift = 0;

  std::uint32_t at(int dr, int dc) const noexcept { return coefficients[(dr + 1) * 3 + (dc + 1)]; }
  void validate() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

// The fixed 21/31/48 kernel with scale 256.
Kernel gaussian_kernel_default();

// Samples exp(-(i^2+j^2)/(2 sigma^2)) on the 3x3 grid, scales to 2^scale_shift
// with round-to-nearest and moves any residue onto the centre coefficient.
Kernel gaussian_kernel_from_sigma(double sigma, unsigned scale_shift);

// Correlates the interior with the kernel, every product going through the
// configured 8x8 multiplier, then shifts right by scale_shift. Border rows
// and columns are copied from the input.
GrayImage convolve3x3(const GrayImage& img, const Kernel& k, const MultiplierConfig& cfg,
                      unsigned threads = 0);

double mse(const GrayImage& a, const GrayImage& b);

// Throws std::domain_error when the images are identical.
double psnr(const GrayImage& a, const GrayImage& b);

} // namespace refmlm
