#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace refmlm::tools {

// Fingerprint-like test raster: warped elliptical ridges on a light
// background, fading towards the borders. Row-major, rows * cols bytes.
inline std::vector<std::uint8_t> ridge_pattern(std::size_t rows, std::size_t cols)
{
  std::vector<std::uint8_t> px(rows * cols);
  const double cy = static_cast<double>(rows) * 0.55;
  const double cx = static_cast<double>(cols) * 0.5;
  const double reach = 0.5 * static_cast<double>(rows < cols ? rows : cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double dy = (static_cast<double>(r) - cy) * 1.3;
      const double dx = static_cast<double>(c) - cx;
      const double radius = std::sqrt(dx * dx + dy * dy);
      const double theta = std::atan2(dy, dx);
      const double ridge = std::sin(2.0 * std::numbers::pi * radius / 7.0 + 0.8 * std::sin(3.0 * theta));
      const double fade = std::exp(-std::pow(radius / reach, 4.0));
      const double v = 200.0 - fade * (80.0 + 70.0 * ridge);
      px[r * cols + c] = static_cast<std::uint8_t>(std::lround(std::fmin(255.0, std::fmax(0.0, v))));
    }
  }
  return px;
}

} // namespace refmlm::tools
