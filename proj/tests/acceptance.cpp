// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "oracles.hpp"
#include "ridge_pattern.hpp"

#include "refmlm/error_analysis.hpp"
#include "refmlm/imaging.hpp"
#include "refmlm/kom.hpp"
#include "refmlm/mitchell.hpp"
#include "refmlm/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>

using namespace refmlm;

namespace {

struct Verdict
{
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Verdict()>& body)
{
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    v.pass = false;
    v.detail += " (over time budget " + std::to_string(budget_s) + " s)";
  }
  failures += !v.pass;
  std::printf("[%s] %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a)
{
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::uint64_t model_product(std::uint64_t a, std::uint64_t b, const MultiplierConfig& cfg)
{
  return multiply(UWord(a, cfg.width), UWord(b, cfg.width), cfg).value();
}

// Rows of the 2-bit comparison table: A, B, real product, Mitchell product.
constexpr unsigned kTable[16][4] = {
  {0, 0, 0, 0}, {0, 1, 0, 0}, {0, 2, 0, 0}, {0, 3, 0, 0},
  {1, 0, 0, 0}, {1, 1, 1, 1}, {1, 2, 2, 2}, {1, 3, 3, 3},
  {2, 0, 0, 0}, {2, 1, 2, 2}, {2, 2, 4, 4}, {2, 3, 6, 6},
  {3, 0, 0, 0}, {3, 1, 3, 3}, {3, 2, 6, 6}, {3, 3, 9, 8},
};

const std::set<Model> kAllModels = {Model::exact, Model::mitchell, Model::refmlm, Model::mitchell_kom};

} // namespace

int main()
{
  criterion(1, "2x2 truth table", 1.0, [] {
    int bad = 0;
    for (const auto& row : kTable) {
      bad += mitchell_multiply(UWord(row[0], 2), UWord(row[1], 2)).value.value() != row[3];
      bad += efmlm2_multiply(UWord(row[0], 2), UWord(row[1], 2)).value() != row[2];
    }
    return Verdict{bad == 0, std::to_string(32 - bad) + "/32 rows match"};
  });

  criterion(2, "worked examples", 0.0, [] {
    const auto m = mitchell_multiply(UWord(18, 8), UWord(60, 8)).value.value();
    const auto k = kom_multiply(UWord(16, 8), UWord(60, 8),
                                MultiplierConfig{Model::refmlm, KomVariant::three_product, 8}).value();
    const bool ok = m == 1024 && 18 * 60 - m == 56 && k == 960 && 16 * 60 - k == 0;
    return Verdict{ok, "18x60 mitchell=" + std::to_string(m) + " err=" + std::to_string(1080 - m)
                         + "; 16x60 refmlm three-product=" + std::to_string(k)};
  });

  criterion(3, "4x4 refmlm exactness", 1.0, [] {
    bool ok = true;
    std::string d;
    for (KomVariant v : {KomVariant::four_product, KomVariant::three_product}) {
      std::uint64_t bad = 0;
      for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = 0; b < 16; ++b)
          bad += kom_multiply(UWord(a, 4), UWord(b, 4), MultiplierConfig{Model::refmlm, v, 4}).value()
                 != oracle::true_product(a, b);
      const auto s = analyze_exhaustive(MultiplierConfig{Model::refmlm, v, 4});
      ok = ok && bad == 0 && s.aer_percent == 0.0 && s.mer_percent == 0.0;
      d += std::string(to_string(v)) + ": " + std::to_string(bad) + " mismatches, AER="
           + fmt("%.2f%%", s.aer_percent) + " MER=" + fmt("%.2f%%", s.mer_percent) + "; ";
    }
    return Verdict{ok, d};
  });

  criterion(4, "8x8 refmlm exactness", 10.0, [] {
    std::uint64_t bad = 0;
    for (KomVariant v : {KomVariant::four_product, KomVariant::three_product}) {
      const MultiplierConfig cfg{Model::refmlm, v, 8};
      for (std::uint64_t a = 0; a < 256; ++a)
        for (std::uint64_t b = 0; b < 256; ++b)
          bad += kom_multiply(UWord(a, 8), UWord(b, 8), cfg).value() != oracle::true_product(a, b);
    }
    return Verdict{bad == 0, std::to_string(bad) + " mismatches over 2x65536 pairs"};
  });

  criterion(5, "16x16 refmlm exactness (sampled)", 120.0, [] {
    const MultiplierConfig cfg{Model::refmlm, KomVariant::four_product, 16};
    const auto s = analyze_sampled(cfg, 10'000'000, 20240601);
    std::uint64_t bad = 0;
    const auto corners = corner_operands(16);
    for (auto a : corners)
      for (auto b : corners)
        bad += model_product(a, b, cfg) != oracle::true_product(a, b);
    const bool ok = s.pairs_evaluated >= 10'000'000 && s.aer_percent == 0.0 && s.mer_percent == 0.0 && bad == 0;
    return Verdict{ok, std::to_string(s.pairs_evaluated) + " pairs, AER=" + fmt("%.2f%%", s.aer_percent)
                         + " MER=" + fmt("%.2f%%", s.mer_percent) + ", corner mismatches " + std::to_string(bad)};
  });

  criterion(6, "Mitchell MER", 0.0, [] {
    const auto w4 = analyze_exhaustive(MultiplierConfig{Model::mitchell, {}, 4});
    const auto w16 = analyze_sampled(MultiplierConfig{Model::mitchell, {}, 16}, 1'000'000, 7);
    const bool ok = std::fabs(w4.mer_percent - 11.11) <= 0.01 && w16.mer_percent >= 11.0 && w16.mer_percent <= 11.12;
    return Verdict{ok, "w=4 MER=" + fmt("%.4f%%", w4.mer_percent) + " w=16 sampled MER=" + fmt("%.4f%%", w16.mer_percent)};
  });

  criterion(7, "Mitchell AER at w=16", 0.0, [] {
    const auto s = analyze_sampled(MultiplierConfig{Model::mitchell, {}, 16}, 1'000'000, 7);
    return Verdict{std::fabs(s.aer_percent - 3.82) <= 0.15,
                   "AER=" + fmt("%.4f%%", s.aer_percent) + " (target 3.82 +/- 0.15)"};
  });

  criterion(8, "Mitchell at w=4: MER and zero-error fraction", 0.0, [] {
    const auto s = analyze_exhaustive(MultiplierConfig{Model::mitchell, {}, 4}, Convention::ordered_nonzero);
    // Flat Mitchell is exact iff at least one operand is a power of two.
    std::uint64_t exact = 0, n = 0;
    for (std::uint64_t a = 1; a < 16; ++a)
      for (std::uint64_t b = 1; b < 16; ++b, ++n)
        exact += oracle::power_of_two_by_scan(a) || oracle::power_of_two_by_scan(b);
    const double zero = static_cast<double>(exact) / static_cast<double>(n);
    const bool ok = std::fabs(s.mer_percent - 100.0 / 9.0) <= 1e-3 && s.zero_error_fraction == zero;
    return Verdict{ok, "MER=" + fmt("%.4f%%", s.mer_percent) + " zero_error=" + fmt("%.6f", s.zero_error_fraction)
                         + " (oracle " + fmt("%.6f", zero) + "); AER=" + fmt("%.4f%%", s.aer_percent)
                         + " under ordered-nonzero vs reported 5.5185%, deviation "
                         + fmt("%+.4f", s.aer_percent - 5.5185) + " pts"};
  });

  criterion(9, "mitchell-kom at w=4", 0.0, [] {
    const MultiplierConfig cfg{Model::mitchell_kom, KomVariant::four_product, 4};
    const auto s = analyze_exhaustive(cfg);
    const auto u = analyze_exhaustive(cfg, Convention::unordered_nonzero);
    const auto t = analyze_exhaustive(MultiplierConfig{Model::mitchell_kom, KomVariant::three_product, 4});
    return Verdict{std::fabs(s.mer_percent - 100.0 / 9.0) <= 1e-3,
                   "four-product MER=" + fmt("%.4f%%", s.mer_percent) + "; AER ordered-nonzero="
                     + fmt("%.4f%%", s.aer_percent) + " unordered-nonzero=" + fmt("%.4f%%", u.aer_percent)
                     + " vs reported 1.7629%; three-product MER=" + fmt("%.4f%%", t.mer_percent)};
  });

  criterion(10, "error sign", 0.0, [] {
    std::uint64_t bad = 0;
    for (unsigned w : {2u, 4u, 8u}) {
      const MultiplierConfig cfg{Model::mitchell, {}, w};
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << w); ++a)
        for (std::uint64_t b = 0; b < (std::uint64_t{1} << w); ++b)
          bad += model_product(a, b, cfg) > oracle::true_product(a, b);
    }
    const MultiplierConfig kom4{Model::mitchell_kom, KomVariant::four_product, 4};
    for (std::uint64_t a = 0; a < 16; ++a)
      for (std::uint64_t b = 0; b < 16; ++b)
        bad += model_product(a, b, kom4) > oracle::true_product(a, b);
    return Verdict{bad == 0, std::to_string(bad) + " pairs with negative error"};
  });

  criterion(11, "pipeline latencies and schedule", 0.0, [] {
    const auto ev = trace_stream(1, StageTiming::make(true));
    std::map<std::uint64_t, std::set<std::string>> at;
    for (const auto& e : ev)
      at[e.cycle].insert(std::string(e.operation));
    const std::map<std::uint64_t, std::set<std::string>> expect = {
      {1, {"decompose"}},      {2, {"pp1"}},    {3, {"pp2"}}, {4, {"pp3", "adder1"}},
      {5, {"pp4", "adder2"}},  {6, {"adder3"}}, {7, {"align"}},
    };
    const bool ok = stage_latency(true) == 7 && stage_latency(false) == 9 && at == expect;
    return Verdict{ok, "latency " + std::to_string(stage_latency(true)) + "/" + std::to_string(stage_latency(false))
                         + ", M=1 schedule " + (at == expect ? "matches" : "differs")};
  });

  criterion(12, "variant equivalence, all models", 0.0, [] {
    std::string d;
    bool ok = true;
    for (Model m : kAllModels) {
      std::uint64_t diff = 0;
      std::string example;
      for (unsigned w : {4u, 8u}) {
        const MultiplierConfig f{m, KomVariant::four_product, w}, t{m, KomVariant::three_product, w};
        for (std::uint64_t a = 0; a < (std::uint64_t{1} << w); ++a)
          for (std::uint64_t b = 0; b < (std::uint64_t{1} << w); ++b) {
            const auto pf = model_product(a, b, f), pt = model_product(a, b, t);
            if (pf != pt && diff++ == 0)
              example = " e.g. w=" + std::to_string(w) + " " + std::to_string(a) + "x" + std::to_string(b) + ": "
                        + std::to_string(pf) + " vs " + std::to_string(pt);
          }
      }
      ok = ok && diff == 0;
      d += std::string(to_string(m)) + " " + std::to_string(diff) + " differ" + example + "; ";
    }
    return Verdict{ok, d};
  });

  const std::size_t N = 256;
  const GrayImage clean(N, N, tools::ridge_pattern(N, N));
  const Kernel kernel = gaussian_kernel_default();
  const MultiplierConfig exact{Model::exact, KomVariant::four_product, 8};
  const MultiplierConfig refmlm8{Model::refmlm, KomVariant::four_product, 8};
  const MultiplierConfig mitchell8{Model::mitchell, {}, 8};
  const MultiplierConfig mkom8{Model::mitchell_kom, KomVariant::four_product, 8};
  constexpr std::uint64_t kSeed = 2024;
  const double densities[] = {0.1, 0.2, 0.3, 0.4};

  criterion(13, "filter equivalence", 40.0, [&] {
    std::uint64_t ref_diff = 0, mitchell_over = 0;
    for (double p : densities) {
      const auto noisy = add_salt_pepper(clean, {p, kSeed});
      const std::vector<std::uint8_t> px(noisy.pixels().begin(), noisy.pixels().end());
      unsigned k[3][3];
      for (int i = 0; i < 9; ++i)
        k[i / 3][i % 3] = kernel.coefficients[i];
      const auto oracle_out = oracle::convolve_exact(px, N, N, k, kernel.scale_shift);
      const auto ex = convolve3x3(noisy, kernel, exact);
      const auto rf = convolve3x3(noisy, kernel, refmlm8);
      const auto mi = convolve3x3(noisy, kernel, mitchell8);
      for (std::size_t i = 0; i < ex.size(); ++i) {
        ref_diff += rf.pixels()[i] != ex.pixels()[i] || ex.pixels()[i] != oracle_out[i];
        mitchell_over += mi.pixels()[i] > ex.pixels()[i];
      }
    }
    return Verdict{ref_diff == 0 && mitchell_over == 0,
                   "refmlm/exact differing pixels " + std::to_string(ref_diff) + ", mitchell pixels above exact "
                     + std::to_string(mitchell_over)};
  });

  criterion(14, "PSNR ordering", 0.0, [&] {
    bool ok = true;
    double prev = INFINITY;
    std::string d;
    for (double p : densities) {
      const auto noisy = add_salt_pepper(clean, {p, kSeed});
      const double corrupted = psnr(clean, noisy);
      const double ref = psnr(clean, convolve3x3(noisy, kernel, refmlm8));
      const double mk = psnr(clean, convolve3x3(noisy, kernel, mkom8));
      ok = ok && ref > mk && corrupted < prev;
      prev = corrupted;
      d += fmt("p=%.1f", p) + fmt(" corrupted=%.2f", corrupted) + fmt(" refmlm=%.2f", ref)
           + fmt(" mitchell-kom=%.2f; ", mk);
    }
    return Verdict{ok, d};
  });

  criterion(15, "kernel constants", 0.0, [] {
    const auto k = gaussian_kernel_default();
    std::uint32_t sum = 0;
    for (auto c : k.coefficients)
      sum += c;
    GrayImage impulse(5, 5, 0);
    impulse.at(2, 2) = 255;
    const auto out = convolve3x3(impulse, k, MultiplierConfig{Model::exact, {}, 8});
    const std::uint8_t expect[3][3] = {{20, 30, 20}, {30, 47, 30}, {20, 30, 20}};
    bool imp = true;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        imp = imp && out.at(1 + i, 1 + j) == expect[i][j];
    const bool coeffs = k.coefficients == std::array<std::uint32_t, 9>{21, 31, 21, 31, 48, 31, 21, 31, 21};
    return Verdict{coeffs && sum == 256 && imp, std::string("coefficients ") + (coeffs ? "match" : "differ")
                                                  + ", sum " + std::to_string(sum) + ", impulse response "
                                                  + (imp ? "matches" : "differs")};
  });

  criterion(16, "determinism", 0.0, [&] {
    bool ok = true;
    const MultiplierConfig a8{Model::mitchell_kom, KomVariant::three_product, 8};
    const auto base = analyze_exhaustive(a8, Convention::ordered_nonzero, 1);
    for (unsigned t : {1u, 2u, 7u, 0u})
      ok = ok && analyze_exhaustive(a8, Convention::ordered_nonzero, t) == base;
    const MultiplierConfig m16{Model::mitchell, {}, 16};
    const auto sbase = analyze_sampled(m16, 300000, 99, 1);
    for (unsigned t : {1u, 3u, 0u})
      ok = ok && analyze_sampled(m16, 300000, 99, t) == sbase;
    ok = ok && export_report(sbase, ReportFormat::json) == export_report(analyze_sampled(m16, 300000, 99, 4),
                                                                         ReportFormat::json);
    const auto noisy = add_salt_pepper(clean, {0.3, kSeed});
    const auto fbase = convolve3x3(noisy, kernel, mkom8, 1);
    for (unsigned t : {1u, 4u, 0u})
      ok = ok && add_salt_pepper(clean, {0.3, kSeed}) == noisy && convolve3x3(noisy, kernel, mkom8, t) == fbase;
    return Verdict{ok, ok ? "identical across repeats and thread counts" : "outputs differ"};
  });

  std::printf("%d of 16 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
