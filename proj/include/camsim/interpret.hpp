#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "camsim/nfa.hpp"

namespace camsim {

// Reference interpreter. Enabled set at cycle 0 is the start states;
// active = enabled AND matching; every active reporting state emits a record;
// the next enabled set is the successors of the active states plus all
// AllInput states. Partition id is always 0 here.
std::vector<ReportRecord> interpret(const HomogeneousNfa& nfa,
                                    std::span<const std::uint8_t> input);

}  // namespace camsim
