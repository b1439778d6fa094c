#pragma once

#include "refmlm/uword.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace refmlm {

enum class Model
{
  exact,         // true product
  mitchell,      // flat Mitchell at full width
  refmlm,        // Karatsuba-Ofman recursion over corrected 2x2 Mitchell leaves
  mitchell_kom,  // Karatsuba-Ofman recursion over uncorrected 2x2 Mitchell leaves
};

enum class KomVariant
{
  four_product,
  three_product,
};

std::string_view to_string(Model m) noexcept;
std::string_view to_string(KomVariant v) noexcept;
std::optional<Model> parse_model(std::string_view s) noexcept;
std::optional<KomVariant> parse_variant(std::string_view s) noexcept;

struct MultiplierConfig
{
  Model model = Model::refmlm;
  KomVariant variant = KomVariant::four_product;
  unsigned width = 8;

  // width must be a power of two in 2..32.
  void validate() const;
  bool uses_kom() const noexcept { return model == Model::refmlm || model == Model::mitchell_kom; }
};

struct OperandSplit
{
  UWord low;
  UWord high;
};

// a = low + high * 2^(w/2). Width must be even.
OperandSplit decompose_operand(const UWord& a);

// Order in which the half-width products of the top stage are evaluated.
enum class SubproductOrder
{
  forward,
  reverse,
  concurrent,
};

// Recursive Karatsuba-Ofman multiplication down to 2x2 leaves selected by
// cfg.model (exact, refmlm or mitchell_kom). Each stage output is a 2w-bit
// unsigned word; approximate three-product results outside that range are
// saturated.
UWord kom_multiply(const UWord& a, const UWord& b, const MultiplierConfig& cfg,
                   SubproductOrder order = SubproductOrder::forward);

// Dispatch over every model, including flat Mitchell.
UWord multiply(const UWord& a, const UWord& b, const MultiplierConfig& cfg);

// Top-stage intermediate values, for printing worked examples.
struct KomTrace
{
  unsigned width = 0;
  std::uint64_t a_low = 0, a_high = 0, b_low = 0, b_high = 0;
  std::uint64_t low = 0;          // a_L * b_L
  std::uint64_t high = 0;         // a_H * b_H
  std::int64_t mid = 0;           // coefficient of 2^(w/2)
  std::uint64_t mid1 = 0;         // a_H * b_L (four-product)
  std::uint64_t mid2 = 0;         // a_L * b_H (four-product)
  std::int64_t cross = 0;         // (a_L - a_H)(b_H - b_L) (three-product)
  std::uint64_t product = 0;
};

KomTrace kom_trace(const UWord& a, const UWord& b, const MultiplierConfig& cfg);

namespace detail {

// Unchecked hot path: cfg must be valid, a and b < 2^cfg.width.
std::uint64_t multiply_raw(const MultiplierConfig& cfg, std::uint64_t a, std::uint64_t b) noexcept;

} // namespace detail

} // namespace refmlm
