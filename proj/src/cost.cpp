#include "camsim/cost.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "camsim/errors.hpp"

namespace camsim {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json block_json(const BlockParams& b) {
    return {{"energy_pj", b.energy_pj},
            {"delay_ps", b.delay_ps},
            {"area_um2", b.area_um2},
            {"leakage_ua", b.leakage_ua}};
}

BlockParams block_from(const ordered_json& j, BlockParams fallback) {
    BlockParams b = fallback;
    b.energy_pj = j.value("energy_pj", b.energy_pj);
    b.delay_ps = j.value("delay_ps", b.delay_ps);
    b.area_um2 = j.value("area_um2", b.area_um2);
    b.leakage_ua = j.value("leakage_ua", b.leakage_ua);
    return b;
}

// Sub-arrays a tile powers: Rcb16 powers each occupied slice, Fcb16 one
// sub-array, Mode32 both (each entry spans both).
int powered_subarrays(const Placement& pl, int tile) {
    const TilePlan& tp = pl.tiles[static_cast<std::size_t>(tile)];
    bool occupied = false;
    int n = 0;
    switch (tp.mode) {
        case TileMode::Rcb16:
            for (int sl = 0; sl < 2; ++sl) {
                for (const auto& c : tp.tile.slices[static_cast<std::size_t>(sl)])
                    if (c.used) {
                        ++n;
                        break;
                    }
            }
            return n;
        case TileMode::Fcb16:
            for (const auto& c : tp.tile.slices[0])
                occupied = occupied || c.used;
            return occupied ? 1 : 0;
        case TileMode::Mode32:
            for (const auto& c : tp.tile.slices[0])
                occupied = occupied || c.used;
            return occupied ? 2 : 0;
    }
    return 0;
}

}  // namespace

double cam_access_energy_pj(int enabled_entries, const CostParams& params) {
    const double frac = std::clamp(enabled_entries / 256.0, 0.0, 1.0);
    return params.cam_energy_min_pj +
           (params.cam_energy_max_pj - params.cam_energy_min_pj) * frac;
}

CostBreakdown energy_of_cycle_parts(const CycleActivity& cycle,
                                    const Placement& placement, Variant version,
                                    const CostParams& params) {
    CostBreakdown pj;
    for (const TileActivity& ta : cycle.tiles) {
        if (ta.tile < 0 || ta.tile >= static_cast<int>(placement.tiles.size()))
            throw Error::input("trace references tile " + std::to_string(ta.tile) +
                               " not present in the placement");
        const TilePlan& tp = placement.tiles[static_cast<std::size_t>(ta.tile)];
        const int powered = powered_subarrays(placement, ta.tile);
        if (powered == 0) continue;

        if (version == Variant::Energy) {
            pj.state_matching += cam_access_energy_pj(ta.enabled_a, params);
            if (powered > 1) pj.state_matching += cam_access_energy_pj(ta.enabled_b, params);
        } else {
            pj.state_matching += params.cam_energy_max_pj * powered;
        }

        if (ta.local_access) {
            const double rows =
                std::min<double>(ta.active_rows, placement.cfg.source_slots());
            pj.interconnect +=
                params.sram8t_128x128.energy_pj *
                (params.periphery_fraction +
                 (1 - params.periphery_fraction) * rows / placement.cfg.source_slots());
        }
        pj.interconnect += params.sram8t_256x256.energy_pj * ta.global_access;
        (void)tp;
    }
    pj.encoder += params.encoder_energy_pj * cycle.encoder_accesses;
    return pj;
}

double energy_of_cycle(const CycleActivity& cycle, const Placement& placement,
                       Variant version, const CostParams& params) {
    CostBreakdown pj = energy_of_cycle_parts(cycle, placement, version, params);
    return (pj.state_matching + pj.interconnect + pj.encoder) * 1e-12;
}

double total_energy_j(const ActivityTrace& trace, const Placement& placement,
                      const CostParams& params) {
    double j = 0;
    for (const CycleActivity& c : trace.cycles)
        j += energy_of_cycle(c, placement, trace.version, params);
    return j;
}

double area_of(const Placement& placement, const CostParams& params) {
    double um2 = params.sram6t_16x256.area_um2 * params.encoder_scale;  // input encoder
    um2 += placement.tiles.size() *
           (2 * params.cam8t_16x256.area_um2 + 2 * params.sram8t_128x128.area_um2);
    um2 += placement.stats.arrays_used * params.sram8t_256x256.area_um2;  // global switch
    return um2;
}

double throughput_gbps(Variant version, const CostParams& params) {
    const double ghz = version == Variant::Energy ? params.freq_e_ghz : params.freq_t_ghz;
    return ghz * 8.0;  // one 8-bit symbol per cycle
}

double leakage_power_w(const Placement& placement, const CostParams& params) {
    double ua = params.sram6t_16x256.leakage_ua * params.encoder_scale;
    ua += placement.tiles.size() *
          (2 * params.cam8t_16x256.leakage_ua + 2 * params.sram8t_128x128.leakage_ua);
    ua += placement.stats.arrays_used * params.sram8t_256x256.leakage_ua;
    return ua * 1e-6 * params.supply_v;
}

double power_of(const ActivityTrace& trace, const Placement& placement, Variant version,
                const CostParams& params) {
    const double freq =
        (version == Variant::Energy ? params.freq_e_ghz : params.freq_t_ghz) * 1e9;
    const std::int64_t cycles = static_cast<std::int64_t>(trace.cycles.size());
    const double dynamic =
        cycles > 0 ? total_energy_j(trace, placement, params) * freq / double(cycles) : 0.0;
    return dynamic + leakage_power_w(placement, params);
}

CostBreakdown breakdown(const ActivityTrace& trace, const Placement& placement,
                        const CostParams& params) {
    CostBreakdown sums;
    for (const CycleActivity& c : trace.cycles) {
        CostBreakdown p = energy_of_cycle_parts(c, placement, trace.version, params);
        sums.state_matching += p.state_matching;
        sums.interconnect += p.interconnect;
        sums.encoder += p.encoder;
    }
    const double total = sums.state_matching + sums.interconnect + sums.encoder;
    if (total <= 0) return {0, 0, 0};
    return {sums.state_matching / total, sums.interconnect / total, sums.encoder / total};
}

CostReport cost_report(const ActivityTrace& trace, const Placement& placement,
                       const CostParams& params) {
    CostReport r;
    r.cycles = static_cast<std::int64_t>(trace.cycles.size());
    r.total_energy_j = total_energy_j(trace, placement, params);
    r.energy_per_symbol_nj = r.cycles > 0 ? r.total_energy_j / double(r.cycles) * 1e9 : 0;
    r.leakage_power_w = leakage_power_w(placement, params);
    r.avg_power_w = power_of(trace, placement, trace.version, params);
    r.dynamic_power_w = r.avg_power_w - r.leakage_power_w;
    r.area_um2 = area_of(placement, params);
    r.throughput_gbps = throughput_gbps(trace.version, params);
    r.compute_density_gbps_mm2 = r.throughput_gbps / (r.area_um2 * 1e-6);
    r.breakdown = breakdown(trace, placement, params);
    r.input_interrupts = trace.input_interrupts;
    r.output_interrupts = trace.output_interrupts;
    return r;
}

std::string CostParams::to_json() const {
    ordered_json j;
    j["sram6t_256x256"] = block_json(sram6t_256x256);
    j["sram6t_16x256"] = block_json(sram6t_16x256);
    j["sram8t_128x128"] = block_json(sram8t_128x128);
    j["sram8t_256x256"] = block_json(sram8t_256x256);
    j["cam8t_16x256"] = block_json(cam8t_16x256);
    j["freq_e_ghz"] = freq_e_ghz;
    j["freq_t_ghz"] = freq_t_ghz;
    j["cam_energy_min_pj"] = cam_energy_min_pj;
    j["cam_energy_max_pj"] = cam_energy_max_pj;
    j["periphery_fraction"] = periphery_fraction;
    j["supply_v"] = supply_v;
    j["encoder_energy_pj"] = encoder_energy_pj;
    j["encoder_scale"] = encoder_scale;
    j["global_wire_delay_ps"] = global_wire_delay_ps;
    return j.dump(2) + "\n";
}

CostParams CostParams::from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error::input(std::string("cost params are not valid JSON: ") + e.what());
    }
    CostParams p;
    if (j.contains("sram6t_256x256")) p.sram6t_256x256 = block_from(j["sram6t_256x256"], p.sram6t_256x256);
    if (j.contains("sram6t_16x256")) p.sram6t_16x256 = block_from(j["sram6t_16x256"], p.sram6t_16x256);
    if (j.contains("sram8t_128x128")) p.sram8t_128x128 = block_from(j["sram8t_128x128"], p.sram8t_128x128);
    if (j.contains("sram8t_256x256")) p.sram8t_256x256 = block_from(j["sram8t_256x256"], p.sram8t_256x256);
    if (j.contains("cam8t_16x256")) p.cam8t_16x256 = block_from(j["cam8t_16x256"], p.cam8t_16x256);
    p.freq_e_ghz = j.value("freq_e_ghz", p.freq_e_ghz);
    p.freq_t_ghz = j.value("freq_t_ghz", p.freq_t_ghz);
    p.cam_energy_min_pj = j.value("cam_energy_min_pj", p.cam_energy_min_pj);
    p.cam_energy_max_pj = j.value("cam_energy_max_pj", p.cam_energy_max_pj);
    p.periphery_fraction = j.value("periphery_fraction", p.periphery_fraction);
    p.supply_v = j.value("supply_v", p.supply_v);
    p.encoder_energy_pj = j.value("encoder_energy_pj", p.encoder_energy_pj);
    p.encoder_scale = j.value("encoder_scale", p.encoder_scale);
    p.global_wire_delay_ps = j.value("global_wire_delay_ps", p.global_wire_delay_ps);
    for (const auto& b : {p.freq_e_ghz, p.freq_t_ghz, p.cam_energy_min_pj,
                          p.cam_energy_max_pj, p.supply_v, p.encoder_energy_pj})
        if (b <= 0) throw Error::input("cost params must be strictly positive");
    return p;
}

std::string CostReport::to_json(const RunManifest& manifest) const {
    ordered_json j;
    j["manifest"] = ordered_json::parse(manifest.to_json());
    j["total_energy_j"] = total_energy_j;
    j["energy_per_symbol_nj"] = energy_per_symbol_nj;
    j["avg_power_w"] = avg_power_w;
    j["dynamic_power_w"] = dynamic_power_w;
    j["leakage_power_w"] = leakage_power_w;
    j["area_um2"] = area_um2;
    j["throughput_gbps"] = throughput_gbps;
    j["compute_density_gbps_mm2"] = compute_density_gbps_mm2;
    j["breakdown"] = {{"state_matching", breakdown.state_matching},
                      {"interconnect", breakdown.interconnect},
                      {"encoder", breakdown.encoder}};
    j["cycles"] = cycles;
    j["input_interrupts"] = input_interrupts;
    j["output_interrupts"] = output_interrupts;
    j["note"] = note;
    return j.dump(2) + "\n";
}

std::string CostReport::to_table() const {
    char buf[160];
    std::ostringstream os;
    auto row = [&](const char* k, double v, const char* unit) {
        std::snprintf(buf, sizeof buf, "  %-28s %14.6g %s\n", k, v, unit);
        os << buf;
    };
    os << "cost report\n";
    row("total energy", total_energy_j, "J");
    row("energy per symbol", energy_per_symbol_nj, "nJ/byte");
    row("average power", avg_power_w, "W");
    row("  dynamic", dynamic_power_w, "W");
    row("  leakage", leakage_power_w, "W");
    row("area", area_um2, "um^2");
    row("throughput", throughput_gbps, "Gbps");
    row("compute density", compute_density_gbps_mm2, "Gbps/mm^2");
    row("breakdown: state matching", breakdown.state_matching, "");
    row("breakdown: interconnect", breakdown.interconnect, "");
    row("breakdown: encoder", breakdown.encoder, "");
    row("cycles", double(cycles), "");
    row("input interrupts", double(input_interrupts), "");
    row("output interrupts", double(output_interrupts), "");
    os << "  note: " << note << "\n";
    return os.str();
}

}  // namespace camsim
