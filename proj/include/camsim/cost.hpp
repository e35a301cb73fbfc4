#pragma once

#include <string>

#include "camsim/mapper.hpp"
#include "camsim/simulator.hpp"

namespace camsim {

struct BlockParams {
    double energy_pj = 0;
    double delay_ps = 0;
    double area_um2 = 0;
    double leakage_ua = 0;
};

// 28nm circuit constants. The defaults are the shipped calibration set; a
// config file can override any of them.
struct CostParams {
    BlockParams sram6t_256x256{19.45, 416, 14877, 532};
    BlockParams sram6t_16x256{15.3, 317, 3659, 247};
    BlockParams sram8t_128x128{8.67, 292, 5655, 243};
    BlockParams sram8t_256x256{17.9, 394, 18153, 584};
    BlockParams cam8t_16x256{16.78, 325, 3919, 299};

    double freq_e_ghz = 1.21;
    double freq_t_ghz = 2.14;
    double cam_energy_min_pj = 2.67;   // zero enabled entries
    double cam_energy_max_pj = 16.78;  // all 256 entries enabled
    double periphery_fraction = 0.8;
    double supply_v = 0.9;
    double encoder_energy_pj = 2.4;
    // The encoder table is a 256x32 SRAM; its area/leakage scale the 16x256
    // block by 32/256.
    double encoder_scale = 32.0 / 256.0;
    double global_wire_delay_ps = 99;  // informational; no energy attached

    std::string to_json() const;
    static CostParams from_json(const std::string& text);
};

struct CostBreakdown {
    double state_matching = 0;
    double interconnect = 0;
    double encoder = 0;
};

struct CostReport {
    double total_energy_j = 0;
    double energy_per_symbol_nj = 0;
    double avg_power_w = 0;
    double dynamic_power_w = 0;
    double leakage_power_w = 0;
    double area_um2 = 0;
    double throughput_gbps = 0;
    double compute_density_gbps_mm2 = 0;
    CostBreakdown breakdown;  // fractions, sum to 1 for a nonempty run
    std::int64_t cycles = 0;
    std::int64_t input_interrupts = 0;
    std::int64_t output_interrupts = 0;
    std::string note = "global wire energy excluded (no wire energy constant)";

    std::string to_json(const RunManifest& manifest) const;
    std::string to_table() const;
};

// Enabled-entry dependent CAM access energy: linear between the measured
// endpoints (2.67 pJ at 0 enabled, 16.78 pJ at 256).
double cam_access_energy_pj(int enabled_entries, const CostParams& params);

// Dynamic energy of one traced cycle in joules.
double energy_of_cycle(const CycleActivity& cycle, const Placement& placement,
                       Variant version, const CostParams& params);

// Same, split into state matching / interconnect / encoder shares.
CostBreakdown energy_of_cycle_parts(const CycleActivity& cycle,
                                    const Placement& placement, Variant version,
                                    const CostParams& params);

double total_energy_j(const ActivityTrace& trace, const Placement& placement,
                      const CostParams& params);

double area_of(const Placement& placement, const CostParams& params);

double throughput_gbps(Variant version, const CostParams& params);

double leakage_power_w(const Placement& placement, const CostParams& params);

double power_of(const ActivityTrace& trace, const Placement& placement, Variant version,
                const CostParams& params);

CostBreakdown breakdown(const ActivityTrace& trace, const Placement& placement,
                        const CostParams& params);

CostReport cost_report(const ActivityTrace& trace, const Placement& placement,
                       const CostParams& params);

}  // namespace camsim
