#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "refmlm/refmlm.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

refmlm_multiplier* make(refmlm_model model, refmlm_variant variant, unsigned width)
{
  refmlm_multiplier* m = nullptr;
  REQUIRE(refmlm_multiplier_create(model, variant, width, &m) == REFMLM_OK);
  return m;
}

} // namespace

TEST_CASE("multiplier lifecycle and status codes")
{
  refmlm_multiplier* m = nullptr;
  CHECK(refmlm_multiplier_create(REFMLM_MODEL_REFMLM, REFMLM_VARIANT_FOUR_PRODUCT, 6, &m)
        == REFMLM_ERR_INVALID_ARGUMENT);
  CHECK(m == nullptr);
  CHECK(std::strlen(refmlm_last_error()) > 0);
  CHECK(refmlm_multiplier_create(static_cast<refmlm_model>(42), REFMLM_VARIANT_FOUR_PRODUCT, 8, &m)
        == REFMLM_ERR_INVALID_ARGUMENT);
  CHECK(refmlm_multiplier_create(REFMLM_MODEL_REFMLM, REFMLM_VARIANT_FOUR_PRODUCT, 8, nullptr)
        == REFMLM_ERR_INVALID_ARGUMENT);

  m = make(REFMLM_MODEL_REFMLM, REFMLM_VARIANT_THREE_PRODUCT, 8);
  CHECK(refmlm_multiplier_width(m) == 8);
  std::uint64_t p = 0;
  CHECK(refmlm_multiply(m, 16, 60, &p) == REFMLM_OK);
  CHECK(p == 960);
  CHECK(refmlm_multiply(m, 256, 1, &p) == REFMLM_ERR_OUT_OF_RANGE);
  CHECK(refmlm_multiply(m, 1, 1, nullptr) == REFMLM_ERR_INVALID_ARGUMENT);
  refmlm_multiplier_destroy(m);
  refmlm_multiplier_destroy(nullptr);

  CHECK(std::string(refmlm_status_string(REFMLM_ERR_PARSE)).size() > 0);
}

TEST_CASE("name conversions")
{
  refmlm_model model;
  CHECK(refmlm_model_from_string("mitchell-kom", &model) == REFMLM_OK);
  CHECK(model == REFMLM_MODEL_MITCHELL_KOM);
  CHECK(refmlm_model_from_string("nope", &model) == REFMLM_ERR_INVALID_ARGUMENT);
  refmlm_variant v;
  CHECK(refmlm_variant_from_string("three-product", &v) == REFMLM_OK);
  CHECK(v == REFMLM_VARIANT_THREE_PRODUCT);
  refmlm_convention c;
  CHECK(refmlm_convention_from_string("unordered-nonzero", &c) == REFMLM_OK);
  CHECK(c == REFMLM_CONVENTION_UNORDERED_NONZERO);
  CHECK(std::string(refmlm_model_name(REFMLM_MODEL_REFMLM)) == "refmlm");
  CHECK(std::string(refmlm_variant_name(REFMLM_VARIANT_FOUR_PRODUCT)) == "four-product");
}

TEST_CASE("explain")
{
  refmlm_mitchell_trace t{};
  CHECK(refmlm_mitchell_explain(8, 18, 60, &t) == REFMLM_OK);
  CHECK(t.k1 == 4);
  CHECK(t.k2 == 5);
  CHECK(t.mantissa1 == 2);
  CHECK(t.mantissa2 == 28);
  CHECK(t.carry_case != 0);
  CHECK(t.product == 1024);
  CHECK(refmlm_mitchell_explain(8, 0, 60, &t) == REFMLM_ERR_DOMAIN);

  auto* m = make(REFMLM_MODEL_REFMLM, REFMLM_VARIANT_THREE_PRODUCT, 8);
  refmlm_kom_trace k{};
  CHECK(refmlm_kom_explain(m, 16, 60, &k) == REFMLM_OK);
  CHECK(k.cross == 9);
  CHECK(k.mid == 12);
  CHECK(k.product == 960);
  refmlm_multiplier_destroy(m);

  auto* flat = make(REFMLM_MODEL_MITCHELL, REFMLM_VARIANT_FOUR_PRODUCT, 8);
  CHECK(refmlm_kom_explain(flat, 16, 60, &k) == REFMLM_ERR_INVALID_ARGUMENT);
  refmlm_multiplier_destroy(flat);
}

TEST_CASE("report export uses the two-call buffer protocol")
{
  auto* m = make(REFMLM_MODEL_MITCHELL, REFMLM_VARIANT_FOUR_PRODUCT, 4);
  refmlm_report* r = nullptr;
  REQUIRE(refmlm_analyze_exhaustive(m, REFMLM_CONVENTION_ORDERED_NONZERO, 1, &r) == REFMLM_OK);

  refmlm_report_summary s{};
  CHECK(refmlm_report_get_summary(r, &s) == REFMLM_OK);
  CHECK(s.width == 4);
  CHECK(s.pairs_evaluated == 225);
  CHECK(s.mer_percent == doctest::Approx(100.0 / 9.0));
  CHECK(s.has_seed == 0);

  std::size_t needed = 0;
  CHECK(refmlm_report_export(r, REFMLM_FORMAT_JSON, nullptr, 0, &needed) == REFMLM_ERR_BUFFER_TOO_SMALL);
  REQUIRE(needed > 1);
  std::vector<char> small(needed - 1);
  std::size_t again = 0;
  CHECK(refmlm_report_export(r, REFMLM_FORMAT_JSON, small.data(), small.size(), &again)
        == REFMLM_ERR_BUFFER_TOO_SMALL);
  CHECK(again == needed);
  std::vector<char> buf(needed);
  CHECK(refmlm_report_export(r, REFMLM_FORMAT_JSON, buf.data(), buf.size(), &again) == REFMLM_OK);
  CHECK(std::strlen(buf.data()) + 1 == needed);

  refmlm_report* back = nullptr;
  CHECK(refmlm_report_parse_json(buf.data(), &back) == REFMLM_OK);
  refmlm_report_summary s2{};
  CHECK(refmlm_report_get_summary(back, &s2) == REFMLM_OK);
  CHECK(s2.aer_percent == s.aer_percent);
  CHECK(std::memcmp(s2.histogram, s.histogram, sizeof s.histogram) == 0);
  CHECK(refmlm_report_parse_json("{broken", &back) == REFMLM_ERR_PARSE);

  refmlm_report_destroy(back);
  refmlm_report_destroy(r);

  auto* wide = make(REFMLM_MODEL_MITCHELL, REFMLM_VARIANT_FOUR_PRODUCT, 16);
  CHECK(refmlm_analyze_exhaustive(wide, REFMLM_CONVENTION_ORDERED_NONZERO, 1, &r) == REFMLM_ERR_OUT_OF_RANGE);
  CHECK(refmlm_analyze_sampled(wide, 1000, 3, 2, &r) == REFMLM_OK);
  CHECK(refmlm_report_get_summary(r, &s) == REFMLM_OK);
  CHECK(s.has_seed == 1);
  CHECK(s.seed == 3);
  refmlm_report_destroy(r);
  refmlm_multiplier_destroy(wide);
  refmlm_multiplier_destroy(m);
}

TEST_CASE("stage timing")
{
  CHECK(refmlm_stage_latency(1) == 7);
  CHECK(refmlm_stage_latency(0) == 9);
  std::uint64_t cycles = 0;
  CHECK(refmlm_simulate_stream(100, 1, &cycles) == REFMLM_OK);
  CHECK(cycles == 106);
  CHECK(refmlm_simulate_stream(0, 1, &cycles) == REFMLM_ERR_INVALID_ARGUMENT);

  std::size_t needed = 0;
  CHECK(refmlm_pipeline_trace(1, 1, nullptr, 0, &needed) == REFMLM_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buf(needed);
  CHECK(refmlm_pipeline_trace(1, 1, buf.data(), buf.size(), &needed) == REFMLM_OK);
  CHECK(std::string(buf.data()).rfind("1,decomposer,decompose#0", 0) == 0);
}

TEST_CASE("images")
{
  std::vector<std::uint8_t> px(25, 0);
  px[12] = 255;
  refmlm_image* img = nullptr;
  REQUIRE(refmlm_image_create(5, 5, px.data(), &img) == REFMLM_OK);
  CHECK(refmlm_image_rows(img) == 5);

  refmlm_kernel k{};
  CHECK(refmlm_kernel_default(&k) == REFMLM_OK);
  CHECK(k.coefficients[4] == 48);
  CHECK(refmlm_kernel_from_sigma(1.0, 12, &k) == REFMLM_ERR_INVALID_ARGUMENT);
  CHECK(refmlm_kernel_default(&k) == REFMLM_OK);

  auto* m = make(REFMLM_MODEL_EXACT, REFMLM_VARIANT_FOUR_PRODUCT, 8);
  refmlm_image* out = nullptr;
  CHECK(refmlm_image_convolve3x3(img, &k, m, 1, &out) == REFMLM_OK);
  CHECK(refmlm_image_pixels(out)[12] == 47);
  CHECK(refmlm_image_pixels(out)[6] == 20);

  double v = 0;
  CHECK(refmlm_image_psnr(img, img, &v) == REFMLM_ERR_DOMAIN);
  CHECK(refmlm_image_mse(img, img, &v) == REFMLM_OK);
  CHECK(v == 0.0);

  refmlm_image* noisy = nullptr;
  CHECK(refmlm_image_add_salt_pepper(img, 1.0, 9, &noisy) == REFMLM_OK);
  CHECK(refmlm_image_add_salt_pepper(img, 0.5, 0, &noisy) == REFMLM_ERR_INVALID_ARGUMENT);

  const auto path = (std::filesystem::temp_directory_path() / "refmlm_capi.pgm").string();
  CHECK(refmlm_image_save_pgm(out, path.c_str()) == REFMLM_OK);
  refmlm_image* loaded = nullptr;
  CHECK(refmlm_image_load_pgm(path.c_str(), &loaded) == REFMLM_OK);
  CHECK(std::memcmp(refmlm_image_pixels(loaded), refmlm_image_pixels(out), 25) == 0);
  std::filesystem::remove(path);
  CHECK(refmlm_image_load_pgm(path.c_str(), &loaded) == REFMLM_ERR_IO);

  auto* wide = make(REFMLM_MODEL_EXACT, REFMLM_VARIANT_FOUR_PRODUCT, 16);
  CHECK(refmlm_image_convolve3x3(img, &k, wide, 1, &out) == REFMLM_ERR_INVALID_ARGUMENT);

  refmlm_multiplier_destroy(wide);
  refmlm_multiplier_destroy(m);
  refmlm_image_destroy(loaded);
  refmlm_image_destroy(noisy);
  refmlm_image_destroy(out);
  refmlm_image_destroy(img);
}
