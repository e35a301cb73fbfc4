#include "camsim/fabric.hpp"

#include <algorithm>
#include <sstream>

#include "camsim/errors.hpp"

namespace camsim {

void FabricConfig::validate() const {
    if (source_slots() != 384 || destination_slots() != 256)
        throw Error::input("fabric segment budget must be 384 in / 256 out");
    if (window_slots() * group_count() != source_slots())
        throw Error::input("window slots must tile the source budget");
    if (global_dim != tiles_per_array * (global_ports_in + global_ports_out))
        throw Error::input("global switch dimension mismatch");
}

const char* tile_mode_name(TileMode m) {
    switch (m) {
        case TileMode::Rcb16: return "rcb16";
        case TileMode::Fcb16: return "fcb16";
        case TileMode::Mode32: return "mode32";
    }
    return "?";
}

TileMode tile_mode_of_name(const std::string& name) {
    if (name == "rcb16") return TileMode::Rcb16;
    if (name == "fcb16") return TileMode::Fcb16;
    if (name == "mode32") return TileMode::Mode32;
    throw Error::input("unknown tile mode '" + name + "'");
}

int tile_capacity(TileMode m) { return m == TileMode::Rcb16 ? 512 : 256; }
int tile_slices(TileMode m) { return m == TileMode::Rcb16 ? 2 : 1; }

bool cam_match(const CamEntry& entry, const Code& input_code) {
    if (entry.code.width != input_code.width)
        throw Error::input("cam_match width mismatch: " +
                           std::to_string(entry.code.width) + " vs " +
                           std::to_string(input_code.width));
    return subset_match(entry.code.bits, input_code.bits, entry.code.mask());
}

bool rcb_supports(int i, int j, const FabricConfig& cfg) {
    if (i < 0 || i >= cfg.cam_cols || j < 0 || j >= cfg.cam_cols) return false;
    const int g = j / cfg.k_dia;
    const int lead = cfg.window_slots() - cfg.k_dia;  // 21 sources ahead of the group
    const int lo = std::max(0, cfg.k_dia * g - lead);
    const int hi = std::min(cfg.cam_cols, cfg.k_dia * (g + 1));
    return i >= lo && i < hi;
}

SwitchProgram program_switch(const std::vector<std::pair<int, int>>& transitions,
                             SwitchKind kind, const FabricConfig& cfg) {
    SwitchProgram p;
    p.kind = kind;
    for (auto [i, j] : transitions) {
        if (i < 0 || i >= cfg.cam_cols || j < 0 || j >= cfg.cam_cols)
            throw Error::infeasible("switch index out of range: (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
        if (kind == SwitchKind::Rcb) {
            if (!rcb_supports(i, j, cfg))
                throw Error::infeasible("transition outside RCB band: (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        } else {
            if ((i < cfg.rrcb_dim) != (j < cfg.rrcb_dim))
                throw Error::infeasible("transition crosses FCB blocks: (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
        }
        p.rows[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
    }
    return p;
}

ColumnSet route_local(const SwitchProgram& program, const ColumnSet& active_sources) {
    ColumnSet out;
    for (std::size_t i = 0; i < 256; ++i)
        if (active_sources[i]) out |= program.rows[i];
    return out;
}

GlobalProgram program_global(const std::vector<std::pair<int, int>>& slot_pairs,
                             const FabricConfig& cfg) {
    GlobalProgram p;
    for (auto [i, j] : slot_pairs) {
        if (i < 0 || i >= cfg.global_dim || j < 0 || j >= cfg.global_dim)
            throw Error::infeasible("global slot out of range: (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
        p.rows[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
    }
    return p;
}

std::bitset<256> route_global(const GlobalProgram& program,
                              const std::bitset<256>& exported) {
    std::bitset<256> out;
    for (std::size_t i = 0; i < 256; ++i)
        if (exported[i]) out |= program.rows[i];
    return out;
}

std::array<ColumnSet, 2> tile_match(const Tile& tile, std::uint32_t input_code32,
                                    const std::array<ColumnSet, 2>& enable) {
    std::array<ColumnSet, 2> out{};
    const int nslices = tile_slices(tile.mode);
    for (int sl = 0; sl < nslices; ++sl) {
        const auto& slice = tile.slices[static_cast<std::size_t>(sl)];
        for (std::size_t c = 0; c < 256; ++c) {
            const Tile::Column& col = slice[c];
            if (!col.used || !enable[static_cast<std::size_t>(sl)][c]) continue;
            if (subset_match(col.bits, input_code32, 0xffffffffu))
                out[static_cast<std::size_t>(sl)].set(c);
        }
    }
    return out;
}

std::string switch_program_rle(const SwitchProgram& program) {
    std::ostringstream os;
    os << "kind=" << (program.kind == SwitchKind::Rcb ? "rcb" : "fcb") << " rows=256\n";
    for (std::size_t i = 0; i < 256; ++i) {
        const ColumnSet& row = program.rows[i];
        if (row.none()) continue;
        os << "r" << i << ":";
        std::size_t j = 0;
        while (j < 256) {
            bool bit = row[j];
            std::size_t run = 1;
            while (j + run < 256 && row[j + run] == bit) ++run;
            os << " " << (bit ? '1' : '0') << "x" << run;
            j += run;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace camsim
