// Writes a synthetic fingerprint-like PGM for trying out `refmlm filter`.

#include "refmlm/refmlm.h"
#include "ridge_pattern.hpp"

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv)
{
  if (argc < 2 || argc > 4) {
    std::fprintf(stderr, "usage: make_ridges OUT.pgm [ROWS [COLS]]\n");
    return 2;
  }
  const long rows = argc > 2 ? std::strtol(argv[2], nullptr, 10) : 256;
  const long cols = argc > 3 ? std::strtol(argv[3], nullptr, 10) : rows;
  if (rows < 3 || cols < 3) {
    std::fprintf(stderr, "make_ridges: image must be at least 3x3\n");
    return 2;
  }

  const auto px = refmlm::tools::ridge_pattern(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  refmlm_image* img = nullptr;
  refmlm_status s = refmlm_image_create(static_cast<size_t>(rows), static_cast<size_t>(cols), px.data(), &img);
  if (s == REFMLM_OK)
    s = refmlm_image_save_pgm(img, argv[1]);
  refmlm_image_destroy(img);
  if (s != REFMLM_OK) {
    std::fprintf(stderr, "make_ridges: %s\n", refmlm_last_error());
    return 1;
  }
  return 0;
}
