#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "camsim/mapper.hpp"

namespace camsim {

// Execution variants: Energy runs non-pipelined with selective precharge;
// Throughput pipelines matching and transition with full precharge. Both
// stamp reports with the consumed-symbol index, so report streams match.
enum class Variant { Energy, Throughput };

const char* variant_name(Variant v);
Variant variant_of_name(const std::string& s);

struct TileActivity {
    int tile = 0;
    int enabled_a = 0;  // enabled entries, sub-array 0
    int enabled_b = 0;  // enabled entries, sub-array 1
    int matched = 0;
    int active_rows = 0;  // switch input slots driven (both switches)
    bool local_access = false;
    int global_access = 0;
    int reports = 0;
};

struct CycleActivity {
    std::int64_t cycle = 0;
    Symbol symbol = 0;
    std::vector<TileActivity> tiles;
    int reports = 0;
    int encoder_accesses = 1;
};

struct ActivityTrace {
    Variant version = Variant::Energy;
    std::string placement_hash;
    std::vector<CycleActivity> cycles;
    std::int64_t input_interrupts = 0;   // ceil(len / 128)
    std::int64_t output_interrupts = 0;  // ceil(reports / 64)
};

struct SimResult {
    std::vector<ReportRecord> reports;
    ActivityTrace trace;
};

inline constexpr int kInputBufferEntries = 128;
inline constexpr int kOutputBufferEntries = 64;

SimResult run_e(const Placement& placement, std::span<const std::uint8_t> input);
SimResult run_t(const Placement& placement, std::span<const std::uint8_t> input);
SimResult run_sim(const Placement& placement, std::span<const std::uint8_t> input,
                  Variant version);

struct CompareVerdict {
    bool equal = true;
    std::string detail;
};

// Multiset equality of (state, cycle, symbol) between the reference
// interpreter and both hardware variants.
CompareVerdict run_oracle_compare(const HomogeneousNfa& nfa, const Placement& placement,
                                  std::span<const std::uint8_t> input);

struct TraceSummary {
    std::int64_t cycles = 0;
    std::int64_t enabled_entries = 0;
    std::int64_t matched = 0;
    std::int64_t active_rows = 0;
    std::int64_t global_accesses = 0;
    std::int64_t reports = 0;
    double avg_enabled_per_cycle = 0;
    double avg_active_rows_per_cycle = 0;
    double avg_global_per_cycle = 0;
    double reports_per_cycle = 0;
};

TraceSummary trace_summary(const ActivityTrace& trace);

std::string trace_to_csv(const ActivityTrace& trace);
ActivityTrace trace_from_csv(const std::string& text);

std::string reports_to_text(const std::vector<ReportRecord>& reports,
                            const std::string& format);  // "plain", "csv" or "json"

}  // namespace camsim
