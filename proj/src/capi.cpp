#include "refmlm/refmlm.h"

#include "refmlm/error_analysis.hpp"
#include "refmlm/imaging.hpp"
#include "refmlm/kom.hpp"
#include "refmlm/mitchell.hpp"
#include "refmlm/pipeline.hpp"

#include <json.hpp>

#include <cstring>
#include <new>
#include <string>

struct refmlm_multiplier
{
  refmlm::MultiplierConfig cfg;
};

struct refmlm_report
{
  refmlm::ErrorStats stats;
};

struct refmlm_image
{
  refmlm::GrayImage img;
};

namespace {

thread_local std::string g_last_error;

class ApiError : public std::exception
{
public:
  ApiError(refmlm_status s, std::string msg) : status(s), message(std::move(msg)) {}
  const char* what() const noexcept override { return message.c_str(); }
  refmlm_status status;
  std::string message;
};

template<class Fn>
refmlm_status guarded(Fn&& fn) noexcept
{
  refmlm_status status = REFMLM_OK;
  try {
    fn();
    g_last_error.clear();
    return REFMLM_OK;
  } catch (const ApiError& e) {
    status = e.status;
    g_last_error = e.message;
  } catch (const refmlm::ParseError& e) {
    status = REFMLM_ERR_PARSE;
    g_last_error = e.what();
  } catch (const nlohmann::json::exception& e) {
    status = REFMLM_ERR_PARSE;
    g_last_error = e.what();
  } catch (const std::out_of_range& e) {
    status = REFMLM_ERR_OUT_OF_RANGE;
    g_last_error = e.what();
  } catch (const std::domain_error& e) {
    status = REFMLM_ERR_DOMAIN;
    g_last_error = e.what();
  } catch (const std::invalid_argument& e) {
    status = REFMLM_ERR_INVALID_ARGUMENT;
    g_last_error = e.what();
  } catch (const std::bad_alloc&) {
    status = REFMLM_ERR_INTERNAL;
    g_last_error = "out of memory";
  } catch (const std::runtime_error& e) {
    status = REFMLM_ERR_IO;
    g_last_error = e.what();
  } catch (const std::exception& e) {
    status = REFMLM_ERR_INTERNAL;
    g_last_error = e.what();
  } catch (...) {
    status = REFMLM_ERR_INTERNAL;
    g_last_error = "unknown error";
  }
  return status;
}

template<class T>
void require(const T* p, const char* what)
{
  if (p == nullptr)
    throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, std::string(what) + " is null");
}

refmlm::Model to_model(refmlm_model m)
{
  switch (m) {
  case REFMLM_MODEL_EXACT: return refmlm::Model::exact;
  case REFMLM_MODEL_MITCHELL: return refmlm::Model::mitchell;
  case REFMLM_MODEL_REFMLM: return refmlm::Model::refmlm;
  case REFMLM_MODEL_MITCHELL_KOM: return refmlm::Model::mitchell_kom;
  }
  throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, "unknown model " + std::to_string(static_cast<int>(m)));
}

refmlm_model from_model(refmlm::Model m) noexcept
{
  switch (m) {
  case refmlm::Model::exact: return REFMLM_MODEL_EXACT;
  case refmlm::Model::mitchell: return REFMLM_MODEL_MITCHELL;
  case refmlm::Model::refmlm: return REFMLM_MODEL_REFMLM;
  case refmlm::Model::mitchell_kom: return REFMLM_MODEL_MITCHELL_KOM;
  }
  return REFMLM_MODEL_EXACT;
}

refmlm::KomVariant to_variant(refmlm_variant v)
{
  switch (v) {
  case REFMLM_VARIANT_FOUR_PRODUCT: return refmlm::KomVariant::four_product;
  case REFMLM_VARIANT_THREE_PRODUCT: return refmlm::KomVariant::three_product;
  }
  throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, "unknown variant " + std::to_string(static_cast<int>(v)));
}

refmlm::Convention to_convention(refmlm_convention c)
{
  switch (c) {
  case REFMLM_CONVENTION_ORDERED_NONZERO: return refmlm::Convention::ordered_nonzero;
  case REFMLM_CONVENTION_ORDERED_ALL: return refmlm::Convention::ordered_all;
  case REFMLM_CONVENTION_UNORDERED_NONZERO: return refmlm::Convention::unordered_nonzero;
  case REFMLM_CONVENTION_SAMPLED: return refmlm::Convention::sampled;
  }
  throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, "unknown convention " + std::to_string(static_cast<int>(c)));
}

refmlm_convention from_convention(refmlm::Convention c) noexcept
{
  return static_cast<refmlm_convention>(static_cast<int>(c));
}

void copy_out(const std::string& text, char* buf, size_t capacity, size_t* needed)
{
  require(needed, "needed");
  *needed = text.size() + 1;
  if (buf == nullptr || capacity < text.size() + 1)
    throw ApiError(REFMLM_ERR_BUFFER_TOO_SMALL,
                   "buffer needs " + std::to_string(text.size() + 1) + " bytes");
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

refmlm::UWord operand(const refmlm::MultiplierConfig& cfg, uint64_t v, const char* name)
{
  if (v > refmlm::low_mask(cfg.width))
    throw ApiError(REFMLM_ERR_OUT_OF_RANGE, std::string("operand ") + name + " = " + std::to_string(v)
                                              + " does not fit in " + std::to_string(cfg.width) + " bits");
  return refmlm::UWord(v, cfg.width);
}

refmlm::Kernel to_kernel(const refmlm_kernel& k)
{
  refmlm::Kernel out;
  for (int i = 0; i < 9; ++i)
    out.coefficients[i] = k.coefficients[i];
  out.scale_shift = k.scale_shift;
  return out;
}

void from_kernel(const refmlm::Kernel& k, refmlm_kernel* out)
{
  for (int i = 0; i < 9; ++i)
    out->coefficients[i] = k.coefficients[i];
  out->scale_shift = k.scale_shift;
}

template<class T, class... Args>
T* make_handle(Args&&... args)
{
  return new T{std::forward<Args>(args)...};
}

} // namespace

extern "C" {

const char* refmlm_last_error(void)
{
  return g_last_error.c_str();
}

const char* refmlm_status_string(refmlm_status status)
{
  switch (status) {
  case REFMLM_OK: return "ok";
  case REFMLM_ERR_INVALID_ARGUMENT: return "invalid argument";
  case REFMLM_ERR_OUT_OF_RANGE: return "out of range";
  case REFMLM_ERR_DOMAIN: return "domain error";
  case REFMLM_ERR_PARSE: return "parse error";
  case REFMLM_ERR_IO: return "i/o error";
  case REFMLM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
  case REFMLM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

refmlm_status refmlm_model_from_string(const char* name, refmlm_model* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto m = refmlm::parse_model(name);
    if (!m)
      throw ApiError(REFMLM_ERR_INVALID_ARGUMENT,
                     std::string("unknown model '") + name + "' (exact, mitchell, refmlm, mitchell-kom)");
    *out = from_model(*m);
  });
}

refmlm_status refmlm_variant_from_string(const char* name, refmlm_variant* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto v = refmlm::parse_variant(name);
    if (!v)
      throw ApiError(REFMLM_ERR_INVALID_ARGUMENT,
                     std::string("unknown variant '") + name + "' (four-product, three-product)");
    *out = *v == refmlm::KomVariant::three_product ? REFMLM_VARIANT_THREE_PRODUCT : REFMLM_VARIANT_FOUR_PRODUCT;
  });
}

refmlm_status refmlm_convention_from_string(const char* name, refmlm_convention* out)
{
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto c = refmlm::parse_convention(name);
    if (!c)
      throw ApiError(REFMLM_ERR_INVALID_ARGUMENT,
                     std::string("unknown convention '") + name
                       + "' (ordered-nonzero, ordered-all, unordered-nonzero)");
    *out = from_convention(*c);
  });
}

const char* refmlm_model_name(refmlm_model model)
{
  switch (model) {
  case REFMLM_MODEL_EXACT: return "exact";
  case REFMLM_MODEL_MITCHELL: return "mitchell";
  case REFMLM_MODEL_REFMLM: return "refmlm";
  case REFMLM_MODEL_MITCHELL_KOM: return "mitchell-kom";
  }
  return "unknown";
}

const char* refmlm_variant_name(refmlm_variant variant)
{
  return variant == REFMLM_VARIANT_THREE_PRODUCT ? "three-product" : "four-product";
}

// -- multipliers -------------------------------------------------------------

refmlm_status refmlm_multiplier_create(refmlm_model model, refmlm_variant variant, unsigned width,
                                       refmlm_multiplier** out)
{
  return guarded([&] {
    require(out, "out");
    refmlm::MultiplierConfig cfg{to_model(model), to_variant(variant), width};
    cfg.validate();
    *out = make_handle<refmlm_multiplier>(cfg);
  });
}

void refmlm_multiplier_destroy(refmlm_multiplier* m)
{
  delete m;
}

unsigned refmlm_multiplier_width(const refmlm_multiplier* m)
{
  return m ? m->cfg.width : 0;
}

refmlm_status refmlm_multiply(const refmlm_multiplier* m, uint64_t a, uint64_t b, uint64_t* product)
{
  return guarded([&] {
    require(m, "multiplier");
    require(product, "product");
    *product = refmlm::multiply(operand(m->cfg, a, "a"), operand(m->cfg, b, "b"), m->cfg).value();
  });
}

refmlm_status refmlm_mitchell_explain(unsigned width, uint64_t a, uint64_t b, refmlm_mitchell_trace* out)
{
  return guarded([&] {
    require(out, "out");
    refmlm::MultiplierConfig cfg{refmlm::Model::mitchell, refmlm::KomVariant::four_product, width};
    cfg.validate();
    const auto ua = operand(cfg, a, "a");
    const auto ub = operand(cfg, b, "b");
    const auto da = refmlm::log_decompose(ua);
    const auto db = refmlm::log_decompose(ub);
    const auto p = refmlm::mitchell_multiply(ua, ub);
    *out = refmlm_mitchell_trace{da.k, da.mantissa_bits, db.k, db.mantissa_bits, p.carry_case ? 1 : 0,
                                 p.value.value()};
  });
}

refmlm_status refmlm_kom_explain(const refmlm_multiplier* m, uint64_t a, uint64_t b, refmlm_kom_trace* out)
{
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    const auto t = refmlm::kom_trace(operand(m->cfg, a, "a"), operand(m->cfg, b, "b"), m->cfg);
    *out = refmlm_kom_trace{t.a_low, t.a_high, t.b_low, t.b_high, t.low,  t.high,
                            t.mid,   t.mid1,   t.mid2,  t.cross,  t.product};
  });
}

// -- error analysis ----------------------------------------------------------

refmlm_status refmlm_analyze_exhaustive(const refmlm_multiplier* m, refmlm_convention convention,
                                        unsigned threads, refmlm_report** out)
{
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    auto stats = refmlm::analyze_exhaustive(m->cfg, to_convention(convention), threads);
    *out = make_handle<refmlm_report>(std::move(stats));
  });
}

refmlm_status refmlm_analyze_sampled(const refmlm_multiplier* m, uint64_t samples, uint64_t seed,
                                     unsigned threads, refmlm_report** out)
{
  return guarded([&] {
    require(m, "multiplier");
    require(out, "out");
    auto stats = refmlm::analyze_sampled(m->cfg, samples, seed, threads);
    *out = make_handle<refmlm_report>(std::move(stats));
  });
}

refmlm_status refmlm_report_get_summary(const refmlm_report* r, refmlm_report_summary* out)
{
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    const auto& s = r->stats;
    refmlm_report_summary sum{};
    sum.width = s.width;
    sum.model = from_model(s.model);
    sum.variant = s.variant == refmlm::KomVariant::three_product ? REFMLM_VARIANT_THREE_PRODUCT
                                                                : REFMLM_VARIANT_FOUR_PRODUCT;
    sum.convention = from_convention(s.convention);
    sum.has_seed = s.seed.has_value() ? 1 : 0;
    sum.seed = s.seed.value_or(0);
    sum.pairs_evaluated = s.pairs_evaluated;
    sum.pairs_skipped = s.pairs_skipped;
    sum.aer_percent = s.aer_percent;
    sum.mer_percent = s.mer_percent;
    sum.zero_error_fraction = s.zero_error_fraction;
    for (std::size_t i = 0; i < refmlm::kBucketCount; ++i)
      sum.histogram[i] = s.histogram[i];
    *out = sum;
  });
}

refmlm_status refmlm_report_export(const refmlm_report* r, refmlm_format format, char* buf,
                                   size_t capacity, size_t* needed)
{
  return guarded([&] {
    require(r, "report");
    if (format != REFMLM_FORMAT_CSV && format != REFMLM_FORMAT_JSON)
      throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, "unknown report format");
    copy_out(refmlm::export_report(r->stats, format == REFMLM_FORMAT_JSON ? refmlm::ReportFormat::json
                                                                          : refmlm::ReportFormat::csv),
             buf, capacity, needed);
  });
}

refmlm_status refmlm_report_parse_json(const char* text, refmlm_report** out)
{
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    try {
      *out = make_handle<refmlm_report>(refmlm::parse_json_report(text));
    } catch (const std::invalid_argument& e) {
      throw ApiError(REFMLM_ERR_PARSE, e.what());
    }
  });
}

void refmlm_report_destroy(refmlm_report* r)
{
  delete r;
}

// -- stage timing ------------------------------------------------------------

unsigned refmlm_stage_latency(int pipelined)
{
  return refmlm::stage_latency(pipelined != 0);
}

refmlm_status refmlm_simulate_stream(uint64_t pairs, int pipelined, uint64_t* total_cycles)
{
  return guarded([&] {
    require(total_cycles, "total_cycles");
    *total_cycles = refmlm::simulate_stream(pairs, refmlm::StageTiming::make(pipelined != 0));
  });
}

refmlm_status refmlm_pipeline_trace(uint64_t pairs, int pipelined, char* buf, size_t capacity, size_t* needed)
{
  return guarded([&] {
    const auto events = refmlm::trace_stream(pairs, refmlm::StageTiming::make(pipelined != 0));
    copy_out(refmlm::format_trace(events), buf, capacity, needed);
  });
}

// -- images ------------------------------------------------------------------

refmlm_status refmlm_image_create(size_t rows, size_t cols, const uint8_t* pixels, refmlm_image** out)
{
  return guarded([&] {
    require(out, "out");
    if (rows == 0 || cols == 0)
      throw ApiError(REFMLM_ERR_INVALID_ARGUMENT, "image dimensions must be nonzero");
    refmlm::GrayImage img(rows, cols);
    if (pixels)
      std::memcpy(img.pixels().data(), pixels, rows * cols);
    *out = make_handle<refmlm_image>(std::move(img));
  });
}

refmlm_status refmlm_image_load_pgm(const char* path, refmlm_image** out)
{
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = make_handle<refmlm_image>(refmlm::read_pgm_file(path));
  });
}

refmlm_status refmlm_image_save_pgm(const refmlm_image* img, const char* path)
{
  return guarded([&] {
    require(img, "image");
    require(path, "path");
    refmlm::write_pgm_file(img->img, path);
  });
}

size_t refmlm_image_rows(const refmlm_image* img)
{
  return img ? img->img.rows() : 0;
}

size_t refmlm_image_cols(const refmlm_image* img)
{
  return img ? img->img.cols() : 0;
}

const uint8_t* refmlm_image_pixels(const refmlm_image* img)
{
  return img ? img->img.pixels().data() : nullptr;
}

void refmlm_image_destroy(refmlm_image* img)
{
  delete img;
}

refmlm_status refmlm_image_add_salt_pepper(const refmlm_image* img, double density, uint64_t seed,
                                           refmlm_image** out)
{
  return guarded([&] {
    require(img, "image");
    require(out, "out");
    *out = make_handle<refmlm_image>(refmlm::add_salt_pepper(img->img, refmlm::NoiseSpec{density, seed}));
  });
}

refmlm_status refmlm_kernel_default(refmlm_kernel* out)
{
  return guarded([&] {
    require(out, "out");
    from_kernel(refmlm::gaussian_kernel_default(), out);
  });
}

refmlm_status refmlm_kernel_from_sigma(double sigma, unsigned scale_shift, refmlm_kernel* out)
{
  return guarded([&] {
    require(out, "out");
    from_kernel(refmlm::gaussian_kernel_from_sigma(sigma, scale_shift), out);
  });
}

refmlm_status refmlm_image_convolve3x3(const refmlm_image* img, const refmlm_kernel* k,
                                       const refmlm_multiplier* m, unsigned threads, refmlm_image** out)
{
  return guarded([&] {
    require(img, "image");
    require(k, "kernel");
    require(m, "multiplier");
    require(out, "out");
    *out = make_handle<refmlm_image>(refmlm::convolve3x3(img->img, to_kernel(*k), m->cfg, threads));
  });
}

refmlm_status refmlm_image_mse(const refmlm_image* a, const refmlm_image* b, double* out)
{
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = refmlm::mse(a->img, b->img);
  });
}

refmlm_status refmlm_image_psnr(const refmlm_image* a, const refmlm_image* b, double* out)
{
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    *out = refmlm::psnr(a->img, b->img);
  });
}

} // extern "C"
