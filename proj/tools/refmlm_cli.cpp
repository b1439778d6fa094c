// refmlm command-line driver. Talks to the library only through refmlm.h.

#include "refmlm/refmlm.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Bad flags or operands.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// A library call failed; exit code depends on whether the input was at fault.
struct LibraryError : std::runtime_error
{
  LibraryError(refmlm_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  refmlm_status status;
};

void check(refmlm_status s)
{
  if (s != REFMLM_OK)
    throw LibraryError(s, std::string(refmlm_status_string(s)) + ": " + refmlm_last_error());
}

struct MultiplierDeleter { void operator()(refmlm_multiplier* p) const { refmlm_multiplier_destroy(p); } };
struct ReportDeleter { void operator()(refmlm_report* p) const { refmlm_report_destroy(p); } };
struct ImageDeleter { void operator()(refmlm_image* p) const { refmlm_image_destroy(p); } };

using MultiplierPtr = std::unique_ptr<refmlm_multiplier, MultiplierDeleter>;
using ReportPtr = std::unique_ptr<refmlm_report, ReportDeleter>;
using ImagePtr = std::unique_ptr<refmlm_image, ImageDeleter>;

// Decimal, 0x-hex or 0b-binary literal.
std::uint64_t parse_u64(std::string_view text, std::string_view what)
{
  int base = 10;
  std::string_view digits = text;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  } else if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'b' || digits[1] == 'B')) {
    base = 2;
    digits.remove_prefix(2);
  }
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
  if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size())
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

std::string binary(std::uint64_t v, unsigned width)
{
  std::string s;
  for (unsigned i = width; i-- > 0;)
    s += ((v >> i) & 1u) ? '1' : '0';
  return s.empty() ? "0" : s;
}

MultiplierPtr make_multiplier(const std::string& model_name, const std::string& variant_name, unsigned width)
{
  refmlm_model model{};
  refmlm_variant variant{};
  if (refmlm_model_from_string(model_name.c_str(), &model) != REFMLM_OK
      || refmlm_variant_from_string(variant_name.c_str(), &variant) != REFMLM_OK)
    throw UsageError(refmlm_last_error());
  refmlm_multiplier* m = nullptr;
  const auto s = refmlm_multiplier_create(model, variant, width, &m);
  if (s != REFMLM_OK)
    throw UsageError(refmlm_last_error());
  return MultiplierPtr(m);
}

void write_text(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f)
    throw std::runtime_error("write failed: " + path);
}

template<class Fn>
std::string fetch_text(Fn&& fill)
{
  std::size_t needed = 0;
  auto s = fill(nullptr, 0, &needed);
  if (s != REFMLM_ERR_BUFFER_TOO_SMALL)
    check(s);
  std::string buf(needed, '\0');
  check(fill(buf.data(), buf.size(), &needed));
  buf.resize(needed - 1);
  return buf;
}

// -- mul ---------------------------------------------------------------------

struct MulArgs
{
  std::string a, b;
  unsigned width = 8;
  std::string model = "refmlm";
  std::string variant = "four-product";
  bool trace = false;
};

int run_mul(const MulArgs& args)
{
  const auto a = parse_u64(args.a, "operand a");
  const auto b = parse_u64(args.b, "operand b");
  const auto m = make_multiplier(args.model, args.variant, args.width);
  const std::uint64_t limit = args.width >= 64 ? ~0ull : (1ull << args.width);
  if (a >= limit || b >= limit)
    throw UsageError("operands must be below 2^" + std::to_string(args.width));

  std::uint64_t product = 0;
  check(refmlm_multiply(m.get(), a, b, &product));
  const std::uint64_t truth = a * b;
  const double abs_err = static_cast<double>(truth) - static_cast<double>(product);

  std::printf("true product:   %llu\n", static_cast<unsigned long long>(truth));
  std::printf("model product:  %llu\n", static_cast<unsigned long long>(product));
  std::printf("absolute error: %.0f\n", abs_err);
  if (truth != 0)
    std::printf("relative error: %.6f%%\n", abs_err / static_cast<double>(truth) * 100.0);
  else
    std::printf("relative error: undefined\n");

  if (!args.trace)
    return 0;

  if (args.model == "mitchell") {
    if (a == 0 || b == 0) {
      std::printf("trace: zero operand, product forced to 0\n");
      return 0;
    }
    refmlm_mitchell_trace t{};
    check(refmlm_mitchell_explain(args.width, a, b, &t));
    std::printf("k1=%u (%s) x1=%s\n", t.k1, binary(t.k1, 4).c_str(),
                t.k1 ? binary(t.mantissa1, t.k1).c_str() : "-");
    std::printf("k2=%u (%s) x2=%s\n", t.k2, binary(t.k2, 4).c_str(),
                t.k2 ? binary(t.mantissa2, t.k2).c_str() : "-");
    std::printf("x1+x2 %s 1\n", t.carry_case ? ">=" : "<");
    std::printf("product=%s\n", binary(t.product, 2 * args.width).c_str());
  } else if (args.width >= 4) {
    refmlm_kom_trace t{};
    check(refmlm_kom_explain(m.get(), a, b, &t));
    const unsigned h = args.width / 2;
    std::printf("a_L=%s a_H=%s b_L=%s b_H=%s\n", binary(t.a_low, h).c_str(), binary(t.a_high, h).c_str(),
                binary(t.b_low, h).c_str(), binary(t.b_high, h).c_str());
    std::printf("low=%llu high=%llu\n", static_cast<unsigned long long>(t.low),
                static_cast<unsigned long long>(t.high));
    if (args.variant == "three-product")
      std::printf("cross=(a_L-a_H)(b_H-b_L)=%lld\n", static_cast<long long>(t.cross));
    else
      std::printf("mid1=%llu mid2=%llu\n", static_cast<unsigned long long>(t.mid1),
                  static_cast<unsigned long long>(t.mid2));
    std::printf("mid=%lld\n", static_cast<long long>(t.mid));
    std::printf("product=%s\n", binary(t.product, 2 * args.width).c_str());
  } else {
    std::printf("trace: 2x2 leaf, no split\n");
  }
  return 0;
}

// -- analyze -----------------------------------------------------------------

struct AnalyzeArgs
{
  unsigned width = 8;
  std::string model = "refmlm";
  std::string variant = "four-product";
  std::string convention = "ordered-nonzero";
  std::string samples;
  std::string seed = "1";
  std::string format = "csv";
  std::string out;
  unsigned threads = 0;
};

int run_analyze(const AnalyzeArgs& args, bool sampled)
{
  const auto m = make_multiplier(args.model, args.variant, args.width);
  if (!sampled && args.width > 8)
    throw UsageError("exhaustive analysis supports width <= 8; use --samples N --seed S for width "
                     + std::to_string(args.width));

  refmlm_format format{};
  if (args.format == "csv")
    format = REFMLM_FORMAT_CSV;
  else if (args.format == "json")
    format = REFMLM_FORMAT_JSON;
  else
    throw UsageError("unknown format '" + args.format + "' (csv, json)");

  refmlm_report* raw = nullptr;
  if (sampled) {
    const auto samples = parse_u64(args.samples, "sample count");
    const auto seed = parse_u64(args.seed, "seed");
    if (samples == 0 || seed == 0)
      throw UsageError("--samples and --seed must be nonzero");
    check(refmlm_analyze_sampled(m.get(), samples, seed, args.threads, &raw));
  } else {
    refmlm_convention conv{};
    if (refmlm_convention_from_string(args.convention.c_str(), &conv) != REFMLM_OK
        || conv == REFMLM_CONVENTION_SAMPLED)
      throw UsageError("unknown convention '" + args.convention + "'");
    check(refmlm_analyze_exhaustive(m.get(), conv, args.threads, &raw));
  }
  const ReportPtr report(raw);

  refmlm_report_summary sum{};
  check(refmlm_report_get_summary(report.get(), &sum));
  std::printf("AER=%.6f%% MER=%.6f%% zero_error_fraction=%.6f pairs=%llu\n", sum.aer_percent,
              sum.mer_percent, sum.zero_error_fraction, static_cast<unsigned long long>(sum.pairs_evaluated));

  const std::string text = fetch_text([&](char* buf, std::size_t cap, std::size_t* needed) {
    return refmlm_report_export(report.get(), format, buf, cap, needed);
  });
  if (args.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text(args.out, text);
  return 0;
}

// -- pipeline ----------------------------------------------------------------

int run_pipeline(const std::string& pairs_text, bool non_pipelined, bool trace)
{
  const auto pairs = parse_u64(pairs_text, "pair count");
  if (pairs == 0)
    throw UsageError("--pairs must be at least 1");
  const int pipelined = non_pipelined ? 0 : 1;

  std::uint64_t total = 0;
  check(refmlm_simulate_stream(pairs, pipelined, &total));
  if (trace) {
    const std::string text = fetch_text([&](char* buf, std::size_t cap, std::size_t* needed) {
      return refmlm_pipeline_trace(pairs, pipelined, buf, cap, needed);
    });
    std::fputs(text.c_str(), stdout);
    std::printf("# total_cycles=%llu\n", static_cast<unsigned long long>(total));
  } else {
    std::printf("%llu\n", static_cast<unsigned long long>(total));
  }
  return 0;
}

// -- filter ------------------------------------------------------------------

struct FilterArgs
{
  std::string in, out, save_noisy, report;
  double noise = 0.0;
  std::string seed = "1";
  std::string model = "refmlm";
  std::string variant = "four-product";
  std::optional<double> sigma;
  unsigned shift = 8;
  unsigned threads = 0;
};

std::optional<double> psnr_or_none(const refmlm_image* a, const refmlm_image* b)
{
  double v = 0.0;
  const auto s = refmlm_image_psnr(a, b, &v);
  if (s == REFMLM_ERR_DOMAIN)
    return std::nullopt;
  check(s);
  return v;
}

int run_filter(const FilterArgs& args)
{
  if (args.noise < 0.0 || args.noise > 1.0)
    throw UsageError("--noise must be in [0, 1]");
  const auto seed = parse_u64(args.seed, "seed");
  if (seed == 0)
    throw UsageError("--seed must be nonzero");
  const auto m = make_multiplier(args.model, args.variant, 8);

  refmlm_kernel kernel{};
  if (args.sigma) {
    if (refmlm_kernel_from_sigma(*args.sigma, args.shift, &kernel) != REFMLM_OK)
      throw UsageError(refmlm_last_error());
  } else {
    check(refmlm_kernel_default(&kernel));
  }

  refmlm_image* raw = nullptr;
  check(refmlm_image_load_pgm(args.in.c_str(), &raw));
  const ImagePtr original(raw);

  check(refmlm_image_add_salt_pepper(original.get(), args.noise, seed, &raw));
  const ImagePtr noisy(raw);
  if (!args.save_noisy.empty())
    check(refmlm_image_save_pgm(noisy.get(), args.save_noisy.c_str()));

  check(refmlm_image_convolve3x3(noisy.get(), &kernel, m.get(), args.threads, &raw));
  const ImagePtr smoothed(raw);
  check(refmlm_image_save_pgm(smoothed.get(), args.out.c_str()));

  double mse_corrupted = 0.0, mse_smoothed = 0.0;
  check(refmlm_image_mse(original.get(), noisy.get(), &mse_corrupted));
  check(refmlm_image_mse(original.get(), smoothed.get(), &mse_smoothed));
  const auto psnr_corrupted = psnr_or_none(original.get(), noisy.get());
  const auto psnr_smoothed = psnr_or_none(original.get(), smoothed.get());

  auto show = [](const std::optional<double>& v) {
    char buf[32];
    if (!v)
      return std::string("undefined");
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return std::string(buf);
  };
  std::printf("psnr_corrupted_db=%s psnr_smoothed_db=%s\n", show(psnr_corrupted).c_str(),
              show(psnr_smoothed).c_str());

  if (!args.report.empty()) {
    nlohmann::ordered_json j;
    j["input"] = args.in;
    j["rows"] = refmlm_image_rows(original.get());
    j["cols"] = refmlm_image_cols(original.get());
    j["model"] = args.model;
    j["variant"] = args.variant;
    j["noise_density"] = args.noise;
    j["seed"] = seed;
    j["kernel"] = std::vector<std::uint32_t>(std::begin(kernel.coefficients), std::end(kernel.coefficients));
    j["kernel_scale_shift"] = kernel.scale_shift;
    j["mse_corrupted"] = mse_corrupted;
    j["mse_smoothed"] = mse_smoothed;
    j["psnr_corrupted_db"] = psnr_corrupted ? nlohmann::ordered_json(*psnr_corrupted) : nlohmann::ordered_json(nullptr);
    j["psnr_smoothed_db"] = psnr_smoothed ? nlohmann::ordered_json(*psnr_smoothed) : nlohmann::ordered_json(nullptr);
    write_text(args.report, j.dump(2) + "\n");
  }
  return 0;
}

// -- kernel ------------------------------------------------------------------

int run_kernel(std::optional<double> sigma, unsigned shift)
{
  refmlm_kernel k{};
  if (sigma) {
    if (refmlm_kernel_from_sigma(*sigma, shift, &k) != REFMLM_OK)
      throw UsageError(refmlm_last_error());
  } else {
    check(refmlm_kernel_default(&k));
  }
  unsigned sum = 0;
  for (int r = 0; r < 3; ++r) {
    std::printf("%u %u %u\n", k.coefficients[3 * r], k.coefficients[3 * r + 1], k.coefficients[3 * r + 2]);
    sum += k.coefficients[3 * r] + k.coefficients[3 * r + 1] + k.coefficients[3 * r + 2];
  }
  std::printf("sum=%u scale_shift=%u\n", sum, k.scale_shift);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Mitchell / Karatsuba-Ofman multiplier models and image smoothing experiments", "refmlm"};
  app.require_subcommand(1);

  const std::vector<std::string> models{"exact", "mitchell", "refmlm", "mitchell-kom"};
  const std::vector<std::string> variants{"four-product", "three-product"};

  MulArgs mul;
  auto* mul_cmd = app.add_subcommand("mul", "Multiply two operands with a model and report the error");
  mul_cmd->add_option("a", mul.a, "First operand (decimal, 0x or 0b)")->required();
  mul_cmd->add_option("b", mul.b, "Second operand (decimal, 0x or 0b)")->required();
  mul_cmd->add_option("--width", mul.width, "Operand width in bits")->capture_default_str();
  mul_cmd->add_option("--model", mul.model)->check(CLI::IsMember(models))->capture_default_str();
  mul_cmd->add_option("--variant", mul.variant)->check(CLI::IsMember(variants))->capture_default_str();
  mul_cmd->add_flag("--trace", mul.trace, "Print the log decomposition or the Karatsuba-Ofman split");

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Error statistics against the true product");
  an_cmd->add_option("--width", an.width)->capture_default_str();
  an_cmd->add_option("--model", an.model)->check(CLI::IsMember(models))->capture_default_str();
  an_cmd->add_option("--variant", an.variant)->check(CLI::IsMember(variants))->capture_default_str();
  auto* conv_opt = an_cmd->add_option("--convention", an.convention, "Exhaustive pair set")
                     ->check(CLI::IsMember({"ordered-nonzero", "ordered-all", "unordered-nonzero"}))
                     ->capture_default_str();
  auto* samples_opt = an_cmd->add_option("--samples", an.samples, "Random pairs (sampled mode)");
  auto* seed_opt = an_cmd->add_option("--seed", an.seed, "PRNG seed for sampled mode")->capture_default_str();
  conv_opt->excludes(samples_opt);
  seed_opt->needs(samples_opt);
  an_cmd->add_option("--format", an.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  an_cmd->add_option("--out", an.out, "Report file (standard output when omitted)");
  an_cmd->add_option("--threads", an.threads, "Worker threads, 0 = all")->capture_default_str();

  std::string pairs = "1";
  bool pipelined = false, non_pipelined = false, pipe_trace = false;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Cycle count of a Karatsuba-Ofman stage");
  pipe_cmd->add_option("--pairs", pairs, "Operand pairs streamed")->capture_default_str();
  auto* p_opt = pipe_cmd->add_flag("--pipelined", pipelined, "Pipelined stage (default)");
  auto* np_opt = pipe_cmd->add_flag("--non-pipelined", non_pipelined, "Non-pipelined stage");
  p_opt->excludes(np_opt);
  pipe_cmd->add_flag("--trace", pipe_trace, "Emit cycle,unit,operation lines");

  FilterArgs fl;
  auto* fl_cmd = app.add_subcommand("filter", "Salt-and-pepper noise, Gaussian smoothing, PSNR");
  fl_cmd->add_option("--in", fl.in, "Input PGM (P5, maxval 255)")->required();
  fl_cmd->add_option("--out", fl.out, "Smoothed output PGM")->required();
  fl_cmd->add_option("--noise", fl.noise, "Noise density in [0, 1]")->capture_default_str();
  fl_cmd->add_option("--seed", fl.seed, "Noise seed (nonzero)")->capture_default_str();
  fl_cmd->add_option("--model", fl.model)->check(CLI::IsMember(models))->capture_default_str();
  fl_cmd->add_option("--variant", fl.variant)->check(CLI::IsMember(variants))->capture_default_str();
  fl_cmd->add_option("--save-noisy", fl.save_noisy, "Write the corrupted image here");
  fl_cmd->add_option("--report", fl.report, "Write JSON metrics here");
  auto* fl_sigma = fl_cmd->add_option("--sigma", fl.sigma, "Sample the kernel from sigma instead of the default");
  fl_cmd->add_option("--shift", fl.shift, "Kernel scale shift with --sigma")->needs(fl_sigma)->capture_default_str();
  fl_cmd->add_option("--threads", fl.threads)->capture_default_str();

  std::optional<double> k_sigma;
  unsigned k_shift = 8;
  auto* k_cmd = app.add_subcommand("kernel", "Print a 3x3 Gaussian kernel");
  auto* k_sigma_opt = k_cmd->add_option("--sigma", k_sigma, "Standard deviation; default kernel when omitted");
  k_cmd->add_option("--shift", k_shift, "Scale shift")->needs(k_sigma_opt)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*mul_cmd)
      return run_mul(mul);
    if (*an_cmd)
      return run_analyze(an, samples_opt->count() > 0);
    if (*pipe_cmd)
      return run_pipeline(pairs, non_pipelined, pipe_trace);
    if (*fl_cmd)
      return run_filter(fl);
    if (*k_cmd)
      return run_kernel(k_sigma, k_shift);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LibraryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return (e.status == REFMLM_ERR_INVALID_ARGUMENT || e.status == REFMLM_ERR_OUT_OF_RANGE) ? kExitUsage
                                                                                              : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
