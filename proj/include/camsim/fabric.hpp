#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "camsim/bits.hpp"
#include "camsim/encoder.hpp"
#include "camsim/nfa.hpp"

namespace camsim {

// Geometry of the fabric. Each tile pairs two 16x256 CAM sub-arrays with two
// 128x128 local switches; 8 tiles share a 256x256 global switch per array.
struct FabricConfig {
    int cam_rows = 16;
    int cam_cols = 256;
    int rrcb_dim = 128;
    int k_dia = 43;
    int wl_segments = 3;
    int bl_segments = 2;
    int tiles_per_array = 8;
    int arrays_per_bank = 16;
    int global_dim = 256;
    int global_ports_in = 16;
    int global_ports_out = 16;

    int source_slots() const { return wl_segments * rrcb_dim; }       // 384
    int destination_slots() const { return bl_segments * rrcb_dim; }  // 256
    int group_count() const { return (cam_cols + k_dia - 1) / k_dia; }
    int window_slots() const { return source_slots() / group_count(); }  // 64

    void validate() const;
};

enum class TileMode { Rcb16, Fcb16, Mode32 };

const char* tile_mode_name(TileMode m);
TileMode tile_mode_of_name(const std::string& name);

// States a tile can hold: Rcb16 uses both sub-arrays, the other modes one
// logical set of 256 columns.
int tile_capacity(TileMode m);
// Column slices per tile carrying independent state sets (2 for Rcb16).
int tile_slices(TileMode m);

// Subset rule: true iff every 1-bit of the entry is 1 in the input code.
// Inversion is applied at state level by the caller, not here.
bool cam_match(const CamEntry& entry, const Code& input_code);

// Banded local-switch support: destination group g = j / k_dia may receive
// from a fixed window of window_slots() sources ending at the group's top.
bool rcb_supports(int i, int j, const FabricConfig& cfg = {});

enum class SwitchKind { Rcb, Fcb };

// Realized transitions of one local switch over 256 logical states. RCB
// programs live inside the band; FCB programs inside the two diagonal
// 128x128 blocks.
struct SwitchProgram {
    SwitchKind kind = SwitchKind::Rcb;
    std::array<ColumnSet, 256> rows{};

    bool test(int i, int j) const { return rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

SwitchProgram program_switch(const std::vector<std::pair<int, int>>& transitions,
                             SwitchKind kind, const FabricConfig& cfg = {});

ColumnSet route_local(const SwitchProgram& program, const ColumnSet& active_sources);

// 256x256 routing among the 8 tiles' port slots (slot = tile*16 + port).
struct GlobalProgram {
    std::array<std::bitset<256>, 256> rows{};
};

GlobalProgram program_global(const std::vector<std::pair<int, int>>& slot_pairs,
                             const FabricConfig& cfg = {});

std::bitset<256> route_global(const GlobalProgram& program,
                              const std::bitset<256>& exported);

// Functional CAM tile. For Mode32 a column's full 32-bit code is stored in
// slice 0; the physical split across the two sub-arrays is implicit.
struct Tile {
    struct Column {
        std::uint32_t bits = 0;
        StateId owner = -1;
        bool used = false;
    };
    TileMode mode = TileMode::Rcb16;
    std::array<std::array<Column, 256>, 2> slices{};
};

// Per-column subset match against the (masked) input code. Columns with
// enable=0 report 0 (selective precharge).
std::array<ColumnSet, 2> tile_match(const Tile& tile, std::uint32_t input_code32,
                                    const std::array<ColumnSet, 2>& enable);

// Run-length-encoded dump of a switch program for golden-file tests.
std::string switch_program_rle(const SwitchProgram& program);

}  // namespace camsim
