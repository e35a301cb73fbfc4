#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "camsim/fabric.hpp"
#include "camsim/manifest.hpp"
#include "camsim/nfa.hpp"

namespace camsim {

// Where one state's replica columns landed.
struct StatePlace {
    StateId state = -1;
    int partition = -1;  // connected-component index in placement order
    int tile = -1;       // global tile index
    int slice = 0;
    int col = 0;    // first replica column
    int count = 1;  // contiguous replica columns
    bool invert = false;
};

struct TilePlan {
    int id = 0;
    int array = 0;
    int index_in_array = 0;  // fixes the tile's global-switch slot range
    TileMode mode = TileMode::Rcb16;
    Tile tile;
    // Slice-indexed local programs: two RCB programs in Rcb16, one
    // block-diagonal FCB program (slot 0) otherwise.
    std::array<std::optional<SwitchProgram>, 2> programs{};
    std::array<ColumnSet, 2> report_mask{};
    std::map<StateId, int> send_port;  // exporting state -> port (0..15)
    std::map<StateId, int> recv_port;  // importing state -> port (0..15)
};

struct MappingStats {
    int tiles_rcb = 0;
    int tiles_fcb = 0;
    int tiles_mode32 = 0;
    int arrays_used = 0;
    int global_switches_used = 0;
    int global_port_pairs = 0;

    std::string summary() const;
};

struct Placement {
    FabricConfig cfg;
    HomogeneousNfa nfa;
    CompiledNfa compiled;
    std::vector<StatePlace> states;      // indexed by state id
    std::vector<TilePlan> tiles;         // dense global tile ids
    std::vector<GlobalProgram> globals;  // per array
    MappingStats stats;
};

struct RcbFeasibility {
    bool feasible = true;
    std::vector<std::pair<StateId, StateId>> offending_edges;
};

// Checks the banded-switch law for one component laid out in `ordering` with
// replica columns expanded, cut at 256-column slice boundaries. Edges that
// cross a slice are routed globally and do not participate.
RcbFeasibility check_rcb_feasible(const HomogeneousNfa& cc,
                                  const std::vector<StateId>& ordering,
                                  const std::vector<int>& replicas_per_state,
                                  const FabricConfig& cfg = {});

// Mode preference: Mode32 whenever the code is wider than 16 bits, otherwise
// Rcb16 when the BFS layout fits the band and Fcb16 when it does not.
std::vector<TileMode> choose_app_mode(const CompiledNfa& compiled,
                                      const std::vector<Component>& ccs,
                                      const FabricConfig& cfg = {});

// Greedy packing: components sorted by descending replicated size, first-fit
// into mode-compatible tiles, spilling across sibling tiles of one array with
// the crossing edges routed through the global switch.
Placement place(const HomogeneousNfa& nfa, const CompiledNfa& compiled,
                const FabricConfig& cfg = {},
                std::optional<TileMode> forced_mode = std::nullopt);

// Per-tile report masks: one bit on the first replica column of each placed
// reporting state.
std::vector<std::array<ColumnSet, 2>> emit_report_mask(const Placement& placement);

std::string placement_to_json(const Placement& placement, const RunManifest& manifest);
std::pair<Placement, RunManifest> placement_from_json(const std::string& text);

}  // namespace camsim
