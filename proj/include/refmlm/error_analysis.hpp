#pragma once

#include "refmlm/kom.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace refmlm {

// Which operand pairs an analysis covers.
enum class Convention
{
  ordered_nonzero,    // every (a, b) with a, b != 0
  ordered_all,        // every (a, b); pairs with a zero true product are skipped
  unordered_nonzero,  // a <= b, both nonzero
  sampled,            // uniform random nonzero pairs plus structured corners
};

std::string_view to_string(Convention c) noexcept;
std::optional<Convention> parse_convention(std::string_view s) noexcept;

// Relative-error histogram buckets, as fractions of the true product.
// `negative` only fills for models that can overshoot the true product.
struct ErrorBucket
{
  std::string_view label;
  double lower;
  double upper;
};

inline constexpr std::size_t kBucketCount = 6;
extern const std::array<ErrorBucket, kBucketCount> kErrorBuckets;

// Index into kErrorBuckets: negative, zero, (0,0.05], (0.05,0.1], (0.1,0.5], (0.5,inf).
std::size_t bucket_index(double relative_error) noexcept;

struct ErrorStats
{
  unsigned width = 0;
  Model model = Model::exact;
  KomVariant variant = KomVariant::four_product;
  Convention convention = Convention::ordered_nonzero;
  std::optional<std::uint64_t> seed;

  std::uint64_t pairs_evaluated = 0;
  std::uint64_t pairs_skipped = 0;
  double aer_percent = 0.0;
  double mer_percent = 0.0;
  double zero_error_fraction = 0.0;
  std::array<std::uint64_t, kBucketCount> histogram{};

  friend bool operator==(const ErrorStats&, const ErrorStats&) = default;
};

// (p_true - p_err) / p_true. Throws std::domain_error when p_true is zero.
double error_rate(std::uint64_t p_true, std::uint64_t p_err);

inline constexpr unsigned kMaxExhaustiveWidth = 8;

// threads == 0 picks the hardware concurrency. Results never depend on it.
ErrorStats analyze_exhaustive(const MultiplierConfig& cfg,
                              Convention convention = Convention::ordered_nonzero,
                              unsigned threads = 0);

ErrorStats analyze_sampled(const MultiplierConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads = 0);

// 1, 2^w-1, 2^(w-1) and the two alternating bit patterns, deduplicated.
std::vector<std::uint64_t> corner_operands(unsigned width);

enum class ReportFormat
{
  csv,
  json,
};

std::string export_report(const ErrorStats& stats, ReportFormat format);

// Inverse of export_report(stats, ReportFormat::json).
ErrorStats parse_json_report(std::string_view text);

} // namespace refmlm
