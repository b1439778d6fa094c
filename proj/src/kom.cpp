#include "refmlm/kom.hpp"
#include "refmlm/mitchell.hpp"

#include <array>
#include <future>
#include <stdexcept>
#include <string>

namespace refmlm {

std::string_view to_string(Model m) noexcept
{
  switch (m) {
  case Model::exact: return "exact";
  case Model::mitchell: return "mitchell";
  case Model::refmlm: return "refmlm";
  case Model::mitchell_kom: return "mitchell-kom";
  }
  return "?";
}

std::string_view to_string(KomVariant v) noexcept
{
  return v == KomVariant::three_product ? "three-product" : "four-product";
}

std::optional<Model> parse_model(std::string_view s) noexcept
{
  for (Model m : {Model::exact, Model::mitchell, Model::refmlm, Model::mitchell_kom})
    if (s == to_string(m))
      return m;
  return std::nullopt;
}

std::optional<KomVariant> parse_variant(std::string_view s) noexcept
{
  for (KomVariant v : {KomVariant::four_product, KomVariant::three_product})
    if (s == to_string(v))
      return v;
  return std::nullopt;
}

void MultiplierConfig::validate() const
{
  if (width < 2 || width > 32 || !is_power_of_two(width))
    throw std::invalid_argument("multiplier width must be a power of two in 2..32, got "
                                + std::to_string(width));
}

OperandSplit decompose_operand(const UWord& a)
{
  if (a.width() % 2 != 0)
    throw std::invalid_argument("cannot split odd width " + std::to_string(a.width()));
  const unsigned half = a.width() / 2;
  return {UWord(a.value() & low_mask(half), half), UWord(a.value() >> half, half)};
}

namespace {

using Leaf = std::uint64_t (*)(std::uint64_t, std::uint64_t) noexcept;
__extension__ typedef __int128 Wide;

std::uint64_t exact_leaf(std::uint64_t a, std::uint64_t b) noexcept { return a * b; }
std::uint64_t mitchell_leaf(std::uint64_t a, std::uint64_t b) noexcept { return detail::mitchell_raw(a, b); }

Leaf leaf_for(Model m) noexcept
{
  switch (m) {
  case Model::refmlm: return &detail::efmlm2_raw;
  case Model::mitchell_kom: return &mitchell_leaf;
  default: return &exact_leaf;
  }
}

std::uint64_t saturate(Wide acc, unsigned product_width) noexcept
{
  if (acc < 0)
    return 0;
  const Wide top = static_cast<Wide>(low_mask(product_width));
  return static_cast<std::uint64_t>(acc > top ? top : acc);
}

// Operands of one stage's half-width products, in the order
// low, high, then mid1/mid2 (four-product) or the cross magnitudes.
struct Stage
{
  unsigned half = 0;
  std::uint64_t a_low = 0, a_high = 0, b_low = 0, b_high = 0;
  bool cross_negative = false;
  std::array<std::array<std::uint64_t, 2>, 4> operands{};
  std::size_t count = 0;

  Stage(std::uint64_t a, std::uint64_t b, unsigned width, KomVariant variant)
    : half(width / 2)
  {
    const std::uint64_t mask = low_mask(half);
    a_low = a & mask;
    a_high = a >> half;
    b_low = b & mask;
    b_high = b >> half;

    operands[0] = {a_low, b_low};
    operands[1] = {a_high, b_high};
    if (variant == KomVariant::four_product) {
      operands[2] = {a_high, b_low};
      operands[3] = {a_low, b_high};
      count = 4;
    } else {
      // (a_L - a_H)(b_H - b_L) in sign-magnitude form.
      const bool a_neg = a_low < a_high;
      const bool b_neg = b_high < b_low;
      operands[2] = {a_neg ? a_high - a_low : a_low - a_high,
                     b_neg ? b_low - b_high : b_high - b_low};
      cross_negative = a_neg != b_neg;
      count = 3;
    }
  }

  Wide mid(const std::array<std::uint64_t, 4>& p) const noexcept
  {
    if (count == 4)
      return static_cast<Wide>(p[2]) + p[3];
    const Wide cross = cross_negative ? -static_cast<Wide>(p[2]) : static_cast<Wide>(p[2]);
    return static_cast<Wide>(p[0]) + p[1] + cross;
  }

  std::uint64_t combine(const std::array<std::uint64_t, 4>& p) const noexcept
  {
    const Wide shift_half = Wide{1} << half;
    const Wide acc = static_cast<Wide>(p[0]) + mid(p) * shift_half
                     + static_cast<Wide>(p[1]) * (shift_half * shift_half);
    return saturate(acc, 4 * half);
  }
};

std::uint64_t kom_raw(std::uint64_t a, std::uint64_t b, unsigned width, Leaf leaf,
                      KomVariant variant) noexcept
{
  if (width == 2)
    return leaf(a, b);

  const Stage st(a, b, width, variant);
  std::array<std::uint64_t, 4> p{};
  for (std::size_t i = 0; i < st.count; ++i)
    p[i] = kom_raw(st.operands[i][0], st.operands[i][1], st.half, leaf, variant);
  return st.combine(p);
}

std::array<std::uint64_t, 4> evaluate_stage(const Stage& st, Leaf leaf, KomVariant variant,
                                            SubproductOrder order)
{
  std::array<std::uint64_t, 4> p{};
  auto run = [&](std::size_t i) {
    return kom_raw(st.operands[i][0], st.operands[i][1], st.half, leaf, variant);
  };

  switch (order) {
  case SubproductOrder::forward:
    for (std::size_t i = 0; i < st.count; ++i)
      p[i] = run(i);
    break;
  case SubproductOrder::reverse:
    for (std::size_t i = st.count; i-- > 0;)
      p[i] = run(i);
    break;
  case SubproductOrder::concurrent: {
    std::array<std::future<std::uint64_t>, 4> jobs;
    for (std::size_t i = 0; i < st.count; ++i)
      jobs[i] = std::async(std::launch::async, run, i);
    for (std::size_t i = 0; i < st.count; ++i)
      p[i] = jobs[i].get();
    break;
  }
  }
  return p;
}

void check_kom_operands(const UWord& a, const UWord& b, const MultiplierConfig& cfg)
{
  cfg.validate();
  if (a.width() != cfg.width || b.width() != cfg.width)
    throw std::invalid_argument("operand widths (" + std::to_string(a.width()) + ", "
                                + std::to_string(b.width()) + ") do not match configured width "
                                + std::to_string(cfg.width));
  if (cfg.model == Model::mitchell)
    throw std::invalid_argument("flat mitchell model has no Karatsuba-Ofman stages");
}

} // namespace

UWord kom_multiply(const UWord& a, const UWord& b, const MultiplierConfig& cfg, SubproductOrder order)
{
  check_kom_operands(a, b, cfg);
  const Leaf leaf = leaf_for(cfg.model);
  const unsigned out_width = 2 * cfg.width;
  if (cfg.width == 2)
    return UWord(leaf(a.value(), b.value()), out_width);

  const Stage st(a.value(), b.value(), cfg.width, cfg.variant);
  return UWord(st.combine(evaluate_stage(st, leaf, cfg.variant, order)), out_width);
}

KomTrace kom_trace(const UWord& a, const UWord& b, const MultiplierConfig& cfg)
{
  check_kom_operands(a, b, cfg);
  if (cfg.width < 4)
    throw std::invalid_argument("a 2-bit multiplication has no Karatsuba-Ofman split");

  const Stage st(a.value(), b.value(), cfg.width, cfg.variant);
  const auto p = evaluate_stage(st, leaf_for(cfg.model), cfg.variant, SubproductOrder::forward);

  KomTrace t;
  t.width = cfg.width;
  t.a_low = st.a_low;
  t.a_high = st.a_high;
  t.b_low = st.b_low;
  t.b_high = st.b_high;
  t.low = p[0];
  t.high = p[1];
  t.mid = static_cast<std::int64_t>(st.mid(p));
  if (cfg.variant == KomVariant::four_product) {
    t.mid1 = p[2];
    t.mid2 = p[3];
  } else {
    t.cross = st.cross_negative ? -static_cast<std::int64_t>(p[2]) : static_cast<std::int64_t>(p[2]);
  }
  t.product = st.combine(p);
  return t;
}

UWord multiply(const UWord& a, const UWord& b, const MultiplierConfig& cfg)
{
  cfg.validate();
  if (a.width() != cfg.width || b.width() != cfg.width)
    throw std::invalid_argument("operand widths do not match configured width "
                                + std::to_string(cfg.width));
  return UWord(detail::multiply_raw(cfg, a.value(), b.value()), 2 * cfg.width);
}

namespace detail {

std::uint64_t multiply_raw(const MultiplierConfig& cfg, std::uint64_t a, std::uint64_t b) noexcept
{
  switch (cfg.model) {
  case Model::mitchell: return mitchell_raw(a, b);
  case Model::exact:
  case Model::refmlm:
  case Model::mitchell_kom: return kom_raw(a, b, cfg.width, leaf_for(cfg.model), cfg.variant);
  }
  return 0;
}

} // namespace detail

} // namespace refmlm
