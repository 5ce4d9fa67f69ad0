#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmv/cachesim.hpp"

namespace dmv {

struct EnergyBreakdown {
    double l1_pj = 0.0;
    double l2_pj = 0.0;
    double l3_pj = 0.0;
    double dram_pj = 0.0;
    double link_pj = 0.0;
    double total_pj = 0.0;
};

// AMAT from measured per-level demand miss ratios:
//   host: L1 + m1*(L2 + m2*(L3 + m3*DRAM_host))
//   ndp:  L1 + m1*DRAM_ndp
double amat(const CacheStats& stats, const HierarchyConfig& hierarchy);

// Per cache level: hits*E_hit + misses*E_miss. Per DRAM access: 8*line bits
// at (internal + logic) pJ/bit, plus the link term on host presets.
EnergyBreakdown energy(const CacheStats& stats, const HierarchyConfig& hierarchy);

// Aggregate sustained instruction throughput (IPC across cores), capped by
// the preset's peak DRAM bandwidth. Per-core rate
// r = 1 / (cpi_base + mem_refs_per_instr * (amat - L1_lat)).
double throughput_raw(const FunctionMetrics& m, double amat_cycles,
                      uint32_t core_count, const HierarchyConfig& hierarchy);

// throughput_raw normalized by a baseline (conventionally the 1-core Host
// point of the same sweep).
double throughput_estimate(const FunctionMetrics& m, double amat_cycles,
                           uint32_t core_count, const HierarchyConfig& hierarchy,
                           double baseline_raw);

struct ScalabilityPoint {
    uint32_t core_count = 1;
    Preset preset = Preset::Host;
    FunctionMetrics metrics;
    double amat_cycles = 0.0;
    EnergyBreakdown energy;
    double rel_throughput = 0.0;
    double raw_throughput = 0.0;
};

struct SpeedupCurve {
    std::vector<uint32_t> core_counts;
    std::vector<double> speedup;       // ndp rel_throughput / host rel_throughput
    std::vector<double> energy_ratio;  // ndp total_pj / host total_pj
};

SpeedupCurve compare(const std::vector<ScalabilityPoint>& points_host,
                     const std::vector<ScalabilityPoint>& points_ndp);

std::string points_to_csv(const std::vector<ScalabilityPoint>& points);
std::string points_to_json(const std::vector<ScalabilityPoint>& points);

}  // namespace dmv
