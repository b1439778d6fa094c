#include "refmlm/pipeline.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace refmlm {

namespace {

struct Slot
{
  unsigned offset;   // cycles after the pair enters the stage
  std::string_view unit;
  std::string_view operation;
};

// Partial products leave the half-width multipliers on successive cycles;
// adders 1 and 2 run alongside pp3 and pp4.
constexpr std::array<Slot, 9> kPipelinedSchedule{{
  {0, "decomposer", "decompose"},
  {1, "half_kom1", "pp1"},
  {2, "half_kom2", "pp2"},
  {3, "half_kom3", "pp3"},
  {3, "adder1", "adder1"},
  {4, "half_kom4", "pp4"},
  {4, "adder2", "adder2"},
  {5, "adder3", "adder3"},
  {6, "aligner", "align"},
}};

constexpr std::array<Slot, 9> kSerialSchedule{{
  {0, "decomposer", "decompose"},
  {1, "half_kom1", "pp1"},
  {2, "half_kom2", "pp2"},
  {3, "half_kom3", "pp3"},
  {4, "half_kom4", "pp4"},
  {5, "adder1", "adder1"},
  {6, "adder2", "adder2"},
  {7, "adder3", "adder3"},
  {8, "aligner", "align"},
}};

constexpr unsigned kPipelinedLatency = 7;
constexpr unsigned kSerialLatency = 9;

} // namespace

StageTiming StageTiming::make(bool pipelined) noexcept
{
  if (pipelined)
    return {true, kPipelinedLatency, 1};
  return {false, kSerialLatency, kSerialLatency};
}

void StageTiming::validate() const
{
  const unsigned expected = pipelined ? kPipelinedLatency : kSerialLatency;
  if (latency_cycles != expected)
    throw std::invalid_argument("latency must be " + std::to_string(expected) + " cycles");
  if (initiation_interval < 1)
    throw std::invalid_argument("initiation interval must be at least 1");
  if (!pipelined && initiation_interval < latency_cycles)
    throw std::invalid_argument("a non-pipelined stage cannot accept a pair before the previous one completes");
}

unsigned stage_latency(bool pipelined) noexcept
{
  return pipelined ? kPipelinedLatency : kSerialLatency;
}

std::uint64_t simulate_stream(std::uint64_t pairs, const StageTiming& timing)
{
  timing.validate();
  if (pairs == 0)
    throw std::invalid_argument("empty stream");
  return timing.latency_cycles + (pairs - 1) * timing.initiation_interval;
}

std::vector<TraceEvent> trace_stream(std::uint64_t pairs, const StageTiming& timing)
{
  timing.validate();
  if (pairs == 0)
    throw std::invalid_argument("empty stream");

  const auto& schedule = timing.pipelined ? kPipelinedSchedule : kSerialSchedule;
  std::vector<TraceEvent> events;
  events.reserve(pairs * schedule.size());
  for (std::uint64_t p = 0; p < pairs; ++p) {
    const std::uint64_t start = 1 + p * timing.initiation_interval;
    for (const Slot& s : schedule)
      events.push_back({start + s.offset, s.unit, s.operation, p});
  }

  // Stable: within a cycle, older pairs first, then schedule order.
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.cycle < b.cycle; });
  return events;
}

std::string format_trace(const std::vector<TraceEvent>& events)
{
  std::string out;
  for (const TraceEvent& e : events) {
    out += std::to_string(e.cycle);
    out += ',';
    out += e.unit;
    out += ',';
    out += e.operation;
    out += '#';
    out += std::to_string(e.pair);
    out += '\n';
  }
  return out;
}

} // namespace refmlm
