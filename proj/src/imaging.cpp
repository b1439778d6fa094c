#include "refmlm/imaging.hpp"
#include "refmlm/prng.hpp"

#include "parallel.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>

namespace refmlm {

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::uint8_t fill)
  : rows_(rows), cols_(cols), pixels_(rows * cols, fill)
{}

GrayImage::GrayImage(std::size_t rows, std::size_t cols, std::vector<std::uint8_t> pixels)
  : rows_(rows), cols_(cols), pixels_(std::move(pixels))
{
  if (pixels_.size() != rows * cols)
    throw std::invalid_argument("pixel count " + std::to_string(pixels_.size()) + " does not match "
                                + std::to_string(rows) + "x" + std::to_string(cols));
}

// ---------------------------------------------------------------------------
// PGM

namespace {

class HeaderReader
{
public:
  explicit HeaderReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal field.
  std::uint64_t number(std::string_view field)
  {
    skip_separators();
    if (pos_ >= bytes_.size())
      throw ParseError("PGM header truncated before " + std::string(field));
    if (!std::isdigit(peek()))
      throw ParseError("PGM " + std::string(field) + " is not a decimal number");
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(peek())) {
      v = v * 10 + static_cast<unsigned>(peek() - '0');
      if (v > std::numeric_limits<std::uint32_t>::max())
        throw ParseError("PGM " + std::string(field) + " is too large");
      ++pos_;
    }
    return v;
  }

  void magic()
  {
    if (bytes_.size() < 2 || static_cast<char>(bytes_[0]) != 'P' || static_cast<char>(bytes_[1]) != '5')
      throw ParseError("PGM magic must be P5");
    pos_ = 2;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void end_of_header()
  {
    if (pos_ >= bytes_.size() || !std::isspace(peek()))
      throw ParseError("PGM maxval must be followed by a single whitespace byte");
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

private:
  int peek() const { return static_cast<unsigned char>(bytes_[pos_]); }

  void skip_separators()
  {
    while (pos_ < bytes_.size()) {
      if (std::isspace(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (pos_ < bytes_.size() && peek() != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

} // namespace

GrayImage load_pgm(std::span<const std::byte> bytes)
{
  HeaderReader in(bytes);
  in.magic();
  const auto cols = in.number("width");
  const auto rows = in.number("height");
  const auto maxval = in.number("maxval");
  if (cols == 0 || rows == 0)
    throw ParseError("PGM width and height must be nonzero");
  if (maxval != 255)
    throw ParseError("unsupported maxval " + std::to_string(maxval) + " (only 255)");
  in.end_of_header();

  const std::size_t n = static_cast<std::size_t>(rows * cols);
  if (bytes.size() - in.position() < n)
    throw ParseError("PGM payload truncated: expected " + std::to_string(n) + " bytes, found "
                     + std::to_string(bytes.size() - in.position()));

  std::vector<std::uint8_t> px(n);
  for (std::size_t i = 0; i < n; ++i)
    px[i] = static_cast<std::uint8_t>(bytes[in.position() + i]);
  return GrayImage(rows, cols, std::move(px));
}

std::vector<std::byte> save_pgm(const GrayImage& img)
{
  const std::string header =
    "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  std::vector<std::byte> out;
  out.reserve(header.size() + img.size());
  for (char c : header)
    out.push_back(static_cast<std::byte>(c));
  for (std::uint8_t p : img.pixels())
    out.push_back(static_cast<std::byte>(p));
  return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return load_pgm(std::as_bytes(std::span(raw)));
}

void write_pgm_file(const GrayImage& img, const std::filesystem::path& path)
{
  const auto bytes = save_pgm(img);
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f)
    throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// Noise

void NoiseSpec::validate() const
{
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("noise density must be in [0, 1]");
  if (seed == 0)
    throw std::invalid_argument("noise seed must be nonzero");
}

GrayImage add_salt_pepper(const GrayImage& img, const NoiseSpec& spec)
{
  spec.validate();
  GrayImage out = img;
  Xorshift64Star rng(spec.seed);
  const double half = spec.density / 2.0;
  for (std::uint8_t& p : out.pixels()) {
    const double u = rng.next_unit();
    if (u < half)
      p = 0;
    else if (u < spec.density)
      p = 255;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kernels

void Kernel::validate() const
{
  std::uint32_t sum = 0;
  for (std::uint32_t c : coefficients) {
    if (c > 255)
      throw std::invalid_argument("kernel coefficient " + std::to_string(c) + " exceeds 8 bits");
    sum += c;
  }
  if (scale_shift > 11 || sum != (1u << scale_shift))
    throw std::invalid_argument("kernel coefficients sum to " + std::to_string(sum)
                                + ", expected 2^" + std::to_string(scale_shift));
}

Kernel gaussian_kernel_default()
{
  return Kernel{{21, 31, 21, 31, 48, 31, 21, 31, 21}, 8};
}

Kernel gaussian_kernel_from_sigma(double sigma, unsigned scale_shift)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("sigma must be positive");
  if (scale_shift < 4 || scale_shift > 12)
    throw std::invalid_argument("scale shift must be in 4..12");

  std::array<double, 9> g{};
  double total = 0.0;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      const double v = std::exp(-(i * i + j * j) / (2.0 * sigma * sigma));
      g[(i + 1) * 3 + (j + 1)] = v;
      total += v;
    }

  const double scale = std::ldexp(1.0, static_cast<int>(scale_shift));
  std::array<long long, 9> c{};
  long long sum = 0;
  for (std::size_t i = 0; i < 9; ++i) {
    c[i] = std::llround(scale * g[i] / total);
    sum += c[i];
  }
  c[4] += static_cast<long long>(scale) - sum;

  Kernel k;
  k.scale_shift = scale_shift;
  for (std::size_t i = 0; i < 9; ++i) {
    if (c[i] < 0 || c[i] > 255)
      throw std::invalid_argument("sigma " + std::to_string(sigma) + " with scale 2^"
                                  + std::to_string(scale_shift) + " needs coefficient "
                                  + std::to_string(c[i]) + ", outside 8 bits");
    k.coefficients[i] = static_cast<std::uint32_t>(c[i]);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Convolution

GrayImage convolve3x3(const GrayImage& img, const Kernel& k, const MultiplierConfig& cfg, unsigned threads)
{
  k.validate();
  cfg.validate();
  if (cfg.width != 8)
    throw std::invalid_argument("convolution uses an 8x8 multiplier, got width " + std::to_string(cfg.width));
  if (img.rows() < 3 || img.cols() < 3)
    throw std::invalid_argument("image must be at least 3x3 for a 3x3 kernel");

  GrayImage out = img;
  const std::size_t interior_rows = img.rows() - 2;
  detail::parallel_for(interior_rows, threads, [&](std::size_t i) {
    const std::size_t m = i + 1;
    for (std::size_t n = 1; n + 1 < img.cols(); ++n) {
      std::uint32_t acc = 0;   // 9 * 255 * 255 < 2^20
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          acc += static_cast<std::uint32_t>(
            detail::multiply_raw(cfg, k.at(dr, dc), img.at(m + dr, n + dc)));
      const std::uint32_t v = acc >> k.scale_shift;
      out.at(m, n) = static_cast<std::uint8_t>(v > 255 ? 255 : v);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Quality metrics

double mse(const GrayImage& a, const GrayImage& b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("image dimensions differ");
  if (a.size() == 0)
    throw std::invalid_argument("empty image");
  std::uint64_t sum = 0;
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = static_cast<int>(pa[i]) - static_cast<int>(pb[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

double psnr(const GrayImage& a, const GrayImage& b)
{
  const double e = mse(a, b);
  if (e == 0.0)
    throw std::domain_error("PSNR undefined for identical images");
  return 10.0 * std::log10(255.0 * 255.0 / e);
}

} // namespace refmlm
