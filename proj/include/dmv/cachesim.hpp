#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmv/locality.hpp"
#include "dmv/trace.hpp"

namespace dmv {

struct CacheLevelConfig {
    uint64_t size_bytes = 0;
    uint32_t ways = 1;
    uint32_t line_bytes = 64;
    uint32_t hit_latency_cycles = 1;
    double energy_hit_pj = 0.0;
    double energy_miss_pj = 0.0;
};

struct PrefetcherConfig {
    bool enabled = false;
    uint32_t degree = 2;
    uint32_t stream_count = 16;
    uint32_t table_entries = 64;
};

struct DramConfig {
    uint32_t latency_host_cycles = 140;  // config estimate, off-chip link included
    uint32_t latency_ndp_cycles = 96;
    double energy_internal_pj_per_bit = 2.0;
    double energy_logic_pj_per_bit = 8.0;
    double energy_link_pj_per_bit = 2.0;  // charged on host presets only
    double peak_bw_host_gbs = 115.0;
    double peak_bw_ndp_gbs = 431.0;
    double clock_ghz = 2.4;
};

enum class Preset : uint8_t { Host, HostPf, Ndp };

std::string to_string(Preset p);
Preset parse_preset(const std::string& s);

struct HierarchyConfig {
    std::vector<CacheLevelConfig> levels;  // 1..3, L1 first
    PrefetcherConfig prefetcher;           // attached after L2 when enabled
    DramConfig dram;
    Preset preset_name = Preset::Host;
    double cpi_base = 1.0;  // non-memory CPI for the throughput model
};

HierarchyConfig preset(Preset name);
void validate(const HierarchyConfig& h);

struct LevelStats {
    uint64_t accesses = 0;  // demand only
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t prefetch_issued = 0;
    uint64_t prefetch_hits = 0;
};

struct CacheStats {
    std::vector<LevelStats> levels;
    uint64_t dram_accesses = 0;  // demand LLC misses + prefetch fills from memory
    uint64_t total_instructions = 0;
    uint64_t total_alu_ops = 0;
    uint64_t record_count = 0;
    std::map<uint16_t, uint64_t> bb_llc_misses;  // bb_id -> demand LLC misses
    Preset preset_name = Preset::Host;

    const LevelStats& l1() const { return levels.front(); }
    const LevelStats& llc() const { return levels.back(); }
};

CacheStats& merge_into(CacheStats& acc, const CacheStats& s);
std::string stats_to_json(const CacheStats& s);

// Processes records in order through the hierarchy: set-associative LRU,
// write-allocate, feed-forward (a miss at level k probes level k+1), last
// level miss counts one DRAM access. The stream prefetcher, when enabled,
// trains on L1 demand-miss line addresses and fills detected streams'
// next lines into L2.
//
// `serviced_level`, when non-null, receives one entry per record: the level
// index that serviced the access, or -1 for DRAM.
CacheStats simulate(const Trace& trace, const HierarchyConfig& hierarchy,
                    std::vector<int8_t>* serviced_level = nullptr);

// Brute-force oracle: list-scan LRU per set, no prefetcher, no optimizations.
// With the prefetcher disabled the two produce identical counters.
CacheStats simulate_reference(const Trace& trace, const HierarchyConfig& hierarchy,
                              std::vector<int8_t>* serviced_level = nullptr);

// Multi-core emulation: each stream owns private instances of every level
// except the last host level, which is shared; streams advance round-robin
// `granularity` records at a time. For the Ndp preset every stream owns a
// private L1 and all misses go to DRAM.
CacheStats simulate_multicore(const std::vector<Trace>& bundle,
                              const HierarchyConfig& hierarchy,
                              uint64_t granularity = 64,
                              std::vector<CacheStats>* per_stream = nullptr);

struct FunctionMetrics {
    double ai = 0.0;     // alu ops per L1 access
    double mpki = 0.0;   // LLC demand misses per 1000 instructions
    double lfmr = 0.0;   // LLC demand misses / L1 demand misses
    uint32_t core_count = 1;
    double spatial = 0.0;
    double temporal = 0.0;
    bool lfmr_flagged = false;  // Ndp preset: no L2/L3 exists, lfmr defined as 1
    // rates used by the throughput model
    double l1_apki = 0.0;    // L1 demand accesses per 1000 instructions
    double dram_apki = 0.0;  // DRAM accesses (incl. prefetch fills) per 1000 instructions
};

FunctionMetrics metrics(const CacheStats& stats, const LocalityProfile& locality,
                        uint32_t core_count);

}  // namespace dmv
