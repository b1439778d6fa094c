#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace refmlm {

// Cycle-level timing of one Karatsuba-Ofman stage: operand decomposition,
// four half-width partial products, three adders and product alignment.
struct StageTiming
{
  bool pipelined = true;
  unsigned latency_cycles = 7;
  unsigned initiation_interval = 1;

  // Default timing: 7 cycles / II 1 pipelined, 9 cycles / II 9 otherwise.
  static StageTiming make(bool pipelined) noexcept;
  void validate() const;
};

unsigned stage_latency(bool pipelined) noexcept;

// Total cycles for `pairs` operand pairs streamed through one stage.
std::uint64_t simulate_stream(std::uint64_t pairs, const StageTiming& timing);

struct TraceEvent
{
  std::uint64_t cycle = 0;   // 1-based
  std::string_view unit;
  std::string_view operation;
  std::uint64_t pair = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Per-cycle schedule, sorted by cycle then unit order.
std::vector<TraceEvent> trace_stream(std::uint64_t pairs, const StageTiming& timing);

// One `cycle,unit,operation` line per event; the operation carries the pair
// index as `name#pair`.
std::string format_trace(const std::vector<TraceEvent>& events);

} // namespace refmlm
