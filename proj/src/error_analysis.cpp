#include "refmlm/error_analysis.hpp"
#include "refmlm/prng.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace refmlm {

const std::array<ErrorBucket, kBucketCount> kErrorBuckets{{
  {"negative", -std::numeric_limits<double>::infinity(), 0.0},
  {"zero", 0.0, 0.0},
  {"(0,0.05]", 0.0, 0.05},
  {"(0.05,0.1]", 0.05, 0.1},
  {"(0.1,0.5]", 0.1, 0.5},
  {"(0.5,1]", 0.5, 1.0},
}};

std::size_t bucket_index(double e) noexcept
{
  if (e < 0.0)
    return 0;
  if (e == 0.0)
    return 1;
  if (e <= 0.05)
    return 2;
  if (e <= 0.1)
    return 3;
  if (e <= 0.5)
    return 4;
  return 5;
}

std::string_view to_string(Convention c) noexcept
{
  switch (c) {
  case Convention::ordered_nonzero: return "ordered-nonzero";
  case Convention::ordered_all: return "ordered-all";
  case Convention::unordered_nonzero: return "unordered-nonzero";
  case Convention::sampled: return "sampled";
  }
  return "?";
}

std::optional<Convention> parse_convention(std::string_view s) noexcept
{
  for (Convention c : {Convention::ordered_nonzero, Convention::ordered_all,
                       Convention::unordered_nonzero, Convention::sampled})
    if (s == to_string(c))
      return c;
  return std::nullopt;
}

double error_rate(std::uint64_t p_true, std::uint64_t p_err)
{
  if (p_true == 0)
    throw std::domain_error("undefined ER: true product is zero");
  const double diff = p_err <= p_true ? static_cast<double>(p_true - p_err)
                                      : -static_cast<double>(p_err - p_true);
  return diff / static_cast<double>(p_true);
}

namespace {

// Accumulator for one block of pairs. Blocks are fixed by the enumeration,
// never by the worker count, and are merged in block order, so the final
// floating-point sum is identical for any degree of parallelism.
struct Partial
{
  double sum = 0.0;
  double compensation = 0.0;
  double max_error = -std::numeric_limits<double>::infinity();
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  std::array<std::uint64_t, kBucketCount> histogram{};

  void add_value(double v) noexcept
  {
    // Neumaier summation.
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      compensation += (sum - t) + v;
    else
      compensation += (v - t) + sum;
    sum = t;
  }

  void record(const MultiplierConfig& cfg, std::uint64_t a, std::uint64_t b) noexcept
  {
    const std::uint64_t p_true = a * b;
    if (p_true == 0) {
      ++skipped;
      return;
    }
    const double e = error_rate(p_true, detail::multiply_raw(cfg, a, b));
    add_value(e);
    max_error = std::max(max_error, e);
    ++evaluated;
    ++histogram[bucket_index(e)];
  }

  void merge(const Partial& o) noexcept
  {
    add_value(o.sum);
    add_value(o.compensation);
    max_error = std::max(max_error, o.max_error);
    evaluated += o.evaluated;
    skipped += o.skipped;
    for (std::size_t i = 0; i < kBucketCount; ++i)
      histogram[i] += o.histogram[i];
  }
};

ErrorStats finish(const MultiplierConfig& cfg, Convention convention, const std::vector<Partial>& blocks)
{
  Partial total;
  for (const Partial& p : blocks)
    total.merge(p);

  ErrorStats s;
  s.width = cfg.width;
  s.model = cfg.model;
  s.variant = cfg.variant;
  s.convention = convention;
  s.pairs_evaluated = total.evaluated;
  s.pairs_skipped = total.skipped;
  s.histogram = total.histogram;
  if (total.evaluated > 0) {
    const double n = static_cast<double>(total.evaluated);
    s.aer_percent = (total.sum + total.compensation) / n * 100.0;
    s.mer_percent = total.max_error * 100.0;
    s.zero_error_fraction = static_cast<double>(total.histogram[1]) / n;
  }
  return s;
}

} // namespace

ErrorStats analyze_exhaustive(const MultiplierConfig& cfg, Convention convention, unsigned threads)
{
  cfg.validate();
  if (cfg.width > kMaxExhaustiveWidth)
    throw std::out_of_range("exhaustive analysis supports widths up to "
                            + std::to_string(kMaxExhaustiveWidth) + "; use analyze_sampled for width "
                            + std::to_string(cfg.width));
  if (convention == Convention::sampled)
    throw std::invalid_argument("the sampled convention requires analyze_sampled");

  const std::uint64_t count = std::uint64_t{1} << cfg.width;
  const std::uint64_t first = convention == Convention::ordered_all ? 0 : 1;

  // One block per first operand.
  std::vector<Partial> rows(count);
  detail::parallel_for(count - first, threads, [&](std::size_t i) {
    const std::uint64_t a = first + i;
    const std::uint64_t b_first = convention == Convention::unordered_nonzero ? a : first;
    Partial& row = rows[a];
    for (std::uint64_t b = b_first; b < count; ++b)
      row.record(cfg, a, b);
  });
  return finish(cfg, convention, rows);
}

std::vector<std::uint64_t> corner_operands(unsigned width)
{
  const std::uint64_t mask = low_mask(width);
  std::vector<std::uint64_t> v{1, mask, std::uint64_t{1} << (width - 1),
                               0xAAAAAAAAAAAAAAAAull & mask, 0x5555555555555555ull & mask};
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

ErrorStats analyze_sampled(const MultiplierConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                           unsigned threads)
{
  cfg.validate();
  if (samples == 0)
    throw std::invalid_argument("sample count must be at least 1");

  constexpr std::size_t kBlock = 4096;
  constexpr std::size_t kChunk = kBlock * 256;

  std::vector<Partial> blocks;

  Partial corners;
  const auto corner_values = corner_operands(cfg.width);
  for (std::uint64_t a : corner_values)
    for (std::uint64_t b : corner_values)
      corners.record(cfg, a, b);
  blocks.push_back(corners);

  // Operands are drawn a then b from one sequential stream; evaluation of a
  // generated chunk is split into fixed-size blocks.
  Xorshift64Star rng(seed);
  std::vector<std::uint64_t> operands;
  std::uint64_t remaining = samples;
  while (remaining > 0) {
    const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(remaining, kChunk));
    operands.resize(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
      operands[i] = rng.next_nonzero(cfg.width);

    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<Partial> chunk(nblocks);
    detail::parallel_for(nblocks, threads, [&](std::size_t blk) {
      const std::size_t end = std::min(n, (blk + 1) * kBlock);
      for (std::size_t i = blk * kBlock; i < end; ++i)
        chunk[blk].record(cfg, operands[2 * i], operands[2 * i + 1]);
    });
    blocks.insert(blocks.end(), chunk.begin(), chunk.end());
    remaining -= n;
  }

  ErrorStats s = finish(cfg, Convention::sampled, blocks);
  s.seed = seed;
  return s;
}

namespace {

std::string fixed6(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string bound(double v)
{
  if (std::isinf(v))
    return v < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string header_line(const ErrorStats& s)
{
  return "# model=" + std::string(to_string(s.model)) + ",width=" + std::to_string(s.width)
         + ",variant=" + std::string(to_string(s.variant)) + ",convention="
         + std::string(to_string(s.convention))
         + ",seed=" + (s.seed ? std::to_string(*s.seed) : std::string());
}

} // namespace

std::string export_report(const ErrorStats& s, ReportFormat format)
{
  if (format == ReportFormat::json) {
    nlohmann::ordered_json j;
    j["model"] = to_string(s.model);
    j["width"] = s.width;
    j["variant"] = to_string(s.variant);
    j["convention"] = to_string(s.convention);
    j["seed"] = s.seed ? nlohmann::ordered_json(*s.seed) : nlohmann::ordered_json(nullptr);
    j["pairs_evaluated"] = s.pairs_evaluated;
    j["pairs_skipped"] = s.pairs_skipped;
    j["aer_percent"] = s.aer_percent;
    j["mer_percent"] = s.mer_percent;
    j["zero_error_fraction"] = s.zero_error_fraction;
    j["bucket_rule"] = "(lower, upper]; zero is exact zero; negative is below zero";
    auto& hist = j["histogram"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < kBucketCount; ++i) {
      const auto& b = kErrorBuckets[i];
      nlohmann::ordered_json row;
      row["bucket"] = b.label;
      row["lower"] = bound(b.lower);
      row["upper"] = bound(b.upper);
      row["count"] = s.histogram[i];
      hist.push_back(std::move(row));
    }
    return j.dump(2) + "\n";
  }

  std::string out = header_line(s) + "\n";
  out += "# histogram buckets are (lower,upper]; zero is exact zero; negative is below zero\n";
  out += "field,value\n";
  out += "model," + std::string(to_string(s.model)) + "\n";
  out += "width," + std::to_string(s.width) + "\n";
  out += "variant," + std::string(to_string(s.variant)) + "\n";
  out += "convention," + std::string(to_string(s.convention)) + "\n";
  out += "seed," + (s.seed ? std::to_string(*s.seed) : std::string()) + "\n";
  out += "pairs_evaluated," + std::to_string(s.pairs_evaluated) + "\n";
  out += "pairs_skipped," + std::to_string(s.pairs_skipped) + "\n";
  out += "aer_percent," + fixed6(s.aer_percent) + "\n";
  out += "mer_percent," + fixed6(s.mer_percent) + "\n";
  out += "zero_error_fraction," + fixed6(s.zero_error_fraction) + "\n";
  out += "bucket,lower,upper,count\n";
  for (std::size_t i = 0; i < kBucketCount; ++i) {
    const auto& b = kErrorBuckets[i];
    out += std::string(b.label) + "," + bound(b.lower) + "," + bound(b.upper) + ","
           + std::to_string(s.histogram[i]) + "\n";
  }
  return out;
}

ErrorStats parse_json_report(std::string_view text)
{
  const auto j = nlohmann::json::parse(text);
  ErrorStats s;

  const auto model = parse_model(j.at("model").get<std::string>());
  const auto variant = parse_variant(j.at("variant").get<std::string>());
  const auto convention = parse_convention(j.at("convention").get<std::string>());
  if (!model || !variant || !convention)
    throw std::invalid_argument("report names an unknown model, variant or convention");

  s.model = *model;
  s.variant = *variant;
  s.convention = *convention;
  s.width = j.at("width").get<unsigned>();
  if (!j.at("seed").is_null())
    s.seed = j.at("seed").get<std::uint64_t>();
  s.pairs_evaluated = j.at("pairs_evaluated").get<std::uint64_t>();
  s.pairs_skipped = j.at("pairs_skipped").get<std::uint64_t>();
  s.aer_percent = j.at("aer_percent").get<double>();
  s.mer_percent = j.at("mer_percent").get<double>();
  s.zero_error_fraction = j.at("zero_error_fraction").get<double>();

  const auto& hist = j.at("histogram");
  if (hist.size() != kBucketCount)
    throw std::invalid_argument("histogram must have " + std::to_string(kBucketCount) + " buckets");
  for (std::size_t i = 0; i < kBucketCount; ++i) {
    if (hist[i].at("bucket").get<std::string>() != kErrorBuckets[i].label)
      throw std::invalid_argument("unexpected histogram bucket " + hist[i].at("bucket").get<std::string>());
    s.histogram[i] = hist[i].at("count").get<std::uint64_t>();
  }
  return s;
}

} // namespace refmlm
