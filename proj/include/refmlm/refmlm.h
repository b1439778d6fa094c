/*
 * C interface to the refmlm library: Mitchell / Karatsuba-Ofman multiplier
 * models, error analysis, stage timing and the Gaussian smoothing pipeline.
 *
 * Every function returns a refmlm_status. On failure a human readable message
 * for the calling thread is available from refmlm_last_error() until the next
 * call into the library from that thread. Objects returned through `out`
 * pointers are owned by the caller and released with the matching _destroy.
 */
#ifndef REFMLM_H
#define REFMLM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REFMLM_BUILDING)
#    define REFMLM_API __declspec(dllexport)
#  else
#    define REFMLM_API __declspec(dllimport)
#  endif
#else
#  define REFMLM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum refmlm_status {
  REFMLM_OK = 0,
  REFMLM_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum, width mismatch */
  REFMLM_ERR_OUT_OF_RANGE = 2,     /* operand too wide, exhaustive width too large */
  REFMLM_ERR_DOMAIN = 3,           /* zero operand for a logarithm, PSNR of identical images */
  REFMLM_ERR_PARSE = 4,            /* malformed PGM or report */
  REFMLM_ERR_IO = 5,
  REFMLM_ERR_BUFFER_TOO_SMALL = 6, /* *needed holds the required size */
  REFMLM_ERR_INTERNAL = 7
} refmlm_status;

typedef enum refmlm_model {
  REFMLM_MODEL_EXACT = 0,
  REFMLM_MODEL_MITCHELL = 1,
  REFMLM_MODEL_REFMLM = 2,
  REFMLM_MODEL_MITCHELL_KOM = 3
} refmlm_model;

typedef enum refmlm_variant {
  REFMLM_VARIANT_FOUR_PRODUCT = 0,
  REFMLM_VARIANT_THREE_PRODUCT = 1
} refmlm_variant;

typedef enum refmlm_convention {
  REFMLM_CONVENTION_ORDERED_NONZERO = 0,
  REFMLM_CONVENTION_ORDERED_ALL = 1,
  REFMLM_CONVENTION_UNORDERED_NONZERO = 2,
  REFMLM_CONVENTION_SAMPLED = 3
} refmlm_convention;

typedef enum refmlm_format {
  REFMLM_FORMAT_CSV = 0,
  REFMLM_FORMAT_JSON = 1
} refmlm_format;

REFMLM_API const char* refmlm_last_error(void);
REFMLM_API const char* refmlm_status_string(refmlm_status status);

/* Name <-> enum helpers use the CLI spellings ("mitchell-kom", "three-product", ...). */
REFMLM_API refmlm_status refmlm_model_from_string(const char* name, refmlm_model* out);
REFMLM_API refmlm_status refmlm_variant_from_string(const char* name, refmlm_variant* out);
REFMLM_API refmlm_status refmlm_convention_from_string(const char* name, refmlm_convention* out);
REFMLM_API const char* refmlm_model_name(refmlm_model model);
REFMLM_API const char* refmlm_variant_name(refmlm_variant variant);

/* ------------------------------------------------------------------------ */
/* Multipliers                                                              */

typedef struct refmlm_multiplier refmlm_multiplier;

/* width must be a power of two in 2..32. */
REFMLM_API refmlm_status refmlm_multiplier_create(refmlm_model model, refmlm_variant variant,
                                                  unsigned width, refmlm_multiplier** out);
REFMLM_API void refmlm_multiplier_destroy(refmlm_multiplier* m);
REFMLM_API unsigned refmlm_multiplier_width(const refmlm_multiplier* m);

/* a, b < 2^width; the product has 2*width bits. */
REFMLM_API refmlm_status refmlm_multiply(const refmlm_multiplier* m, uint64_t a, uint64_t b,
                                         uint64_t* product);

typedef struct refmlm_mitchell_trace {
  unsigned k1;
  uint64_t mantissa1; /* x1 = mantissa1 / 2^k1 */
  unsigned k2;
  uint64_t mantissa2; /* x2 = mantissa2 / 2^k2 */
  int carry_case;     /* nonzero when x1 + x2 >= 1 */
  uint64_t product;
} refmlm_mitchell_trace;

/* Flat Mitchell product of two nonzero width-bit operands with its log terms. */
REFMLM_API refmlm_status refmlm_mitchell_explain(unsigned width, uint64_t a, uint64_t b,
                                                 refmlm_mitchell_trace* out);

typedef struct refmlm_kom_trace {
  uint64_t a_low, a_high, b_low, b_high;
  uint64_t low, high;
  int64_t mid;   /* coefficient of 2^(w/2) */
  uint64_t mid1; /* a_H*b_L, four-product only */
  uint64_t mid2; /* a_L*b_H, four-product only */
  int64_t cross; /* (a_L-a_H)(b_H-b_L), three-product only */
  uint64_t product;
} refmlm_kom_trace;

/* Top-stage split of a Karatsuba-Ofman model (refmlm, mitchell-kom, exact); width >= 4. */
REFMLM_API refmlm_status refmlm_kom_explain(const refmlm_multiplier* m, uint64_t a, uint64_t b,
                                            refmlm_kom_trace* out);

/* ------------------------------------------------------------------------ */
/* Error analysis                                                           */

typedef struct refmlm_report refmlm_report;

typedef struct refmlm_report_summary {
  unsigned width;
  refmlm_model model;
  refmlm_variant variant;
  refmlm_convention convention;
  int has_seed;
  uint64_t seed;
  uint64_t pairs_evaluated;
  uint64_t pairs_skipped;
  double aer_percent;
  double mer_percent;
  double zero_error_fraction;
  uint64_t histogram[6]; /* negative, zero, (0,.05], (.05,.1], (.1,.5], (.5,1] */
} refmlm_report_summary;

/* threads == 0 uses every hardware thread; results do not depend on it. */
REFMLM_API refmlm_status refmlm_analyze_exhaustive(const refmlm_multiplier* m,
                                                   refmlm_convention convention, unsigned threads,
                                                   refmlm_report** out);
REFMLM_API refmlm_status refmlm_analyze_sampled(const refmlm_multiplier* m, uint64_t samples,
                                                uint64_t seed, unsigned threads,
                                                refmlm_report** out);
REFMLM_API refmlm_status refmlm_report_get_summary(const refmlm_report* r, refmlm_report_summary* out);

/* Writes the report into buf (NUL-terminated). With buf == NULL or a short
 * buffer, *needed receives the size including the terminator. */
REFMLM_API refmlm_status refmlm_report_export(const refmlm_report* r, refmlm_format format,
                                              char* buf, size_t capacity, size_t* needed);
REFMLM_API refmlm_status refmlm_report_parse_json(const char* text, refmlm_report** out);
REFMLM_API void refmlm_report_destroy(refmlm_report* r);

/* ------------------------------------------------------------------------ */
/* Stage timing                                                             */

REFMLM_API unsigned refmlm_stage_latency(int pipelined);
REFMLM_API refmlm_status refmlm_simulate_stream(uint64_t pairs, int pipelined, uint64_t* total_cycles);
/* Line-oriented `cycle,unit,operation#pair` trace, same buffer rules as refmlm_report_export. */
REFMLM_API refmlm_status refmlm_pipeline_trace(uint64_t pairs, int pipelined, char* buf,
                                               size_t capacity, size_t* needed);

/* ------------------------------------------------------------------------ */
/* Images                                                                   */

typedef struct refmlm_image refmlm_image;

typedef struct refmlm_kernel {
  uint32_t coefficients[9]; /* row-major, sums to 2^scale_shift */
  unsigned scale_shift;
} refmlm_kernel;

REFMLM_API refmlm_status refmlm_image_create(size_t rows, size_t cols, const uint8_t* pixels,
                                             refmlm_image** out);
REFMLM_API refmlm_status refmlm_image_load_pgm(const char* path, refmlm_image** out);
REFMLM_API refmlm_status refmlm_image_save_pgm(const refmlm_image* img, const char* path);
REFMLM_API size_t refmlm_image_rows(const refmlm_image* img);
REFMLM_API size_t refmlm_image_cols(const refmlm_image* img);
REFMLM_API const uint8_t* refmlm_image_pixels(const refmlm_image* img);
REFMLM_API void refmlm_image_destroy(refmlm_image* img);

REFMLM_API refmlm_status refmlm_image_add_salt_pepper(const refmlm_image* img, double density,
                                                      uint64_t seed, refmlm_image** out);
REFMLM_API refmlm_status refmlm_kernel_default(refmlm_kernel* out);
REFMLM_API refmlm_status refmlm_kernel_from_sigma(double sigma, unsigned scale_shift, refmlm_kernel* out);
/* m must be an 8-bit multiplier. */
REFMLM_API refmlm_status refmlm_image_convolve3x3(const refmlm_image* img, const refmlm_kernel* k,
                                                  const refmlm_multiplier* m, unsigned threads,
                                                  refmlm_image** out);
REFMLM_API refmlm_status refmlm_image_mse(const refmlm_image* a, const refmlm_image* b, double* out);
REFMLM_API refmlm_status refmlm_image_psnr(const refmlm_image* a, const refmlm_image* b, double* out);

#ifdef __cplusplus
}
#endif

#endif /* REFMLM_H */
