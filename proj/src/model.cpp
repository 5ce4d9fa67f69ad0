#include "dmv/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace dmv {

namespace {

double miss_ratio(const LevelStats& l) {
    return l.accesses == 0 ? 0.0 : double(l.misses) / double(l.accesses);
}

void require_matching(const CacheStats& stats, const HierarchyConfig& h) {
    if (stats.preset_name != h.preset_name || stats.levels.size() != h.levels.size())
        throw DmvError("PresetMismatch", "stats do not match hierarchy preset");
}

}  // namespace

double amat(const CacheStats& stats, const HierarchyConfig& hierarchy) {
    require_matching(stats, hierarchy);
    double dram_lat = hierarchy.preset_name == Preset::Ndp
                          ? hierarchy.dram.latency_ndp_cycles
                          : hierarchy.dram.latency_host_cycles;
    double t = dram_lat;
    for (size_t k = hierarchy.levels.size(); k-- > 0;)
        t = hierarchy.levels[k].hit_latency_cycles + miss_ratio(stats.levels[k]) * t;
    return t;
}

EnergyBreakdown energy(const CacheStats& stats, const HierarchyConfig& hierarchy) {
    require_matching(stats, hierarchy);
    EnergyBreakdown e;
    double* slots[3] = {&e.l1_pj, &e.l2_pj, &e.l3_pj};
    for (size_t k = 0; k < hierarchy.levels.size(); ++k) {
        const auto& cfg = hierarchy.levels[k];
        *slots[k] = double(stats.levels[k].hits) * cfg.energy_hit_pj +
                    double(stats.levels[k].misses) * cfg.energy_miss_pj;
    }
    double bits_per_access = 8.0 * hierarchy.levels.back().line_bytes;
    double per_bit = hierarchy.dram.energy_internal_pj_per_bit +
                     hierarchy.dram.energy_logic_pj_per_bit;
    e.dram_pj = double(stats.dram_accesses) * bits_per_access * per_bit;
    if (hierarchy.preset_name != Preset::Ndp)
        e.link_pj = double(stats.dram_accesses) * bits_per_access *
                    hierarchy.dram.energy_link_pj_per_bit;
    e.total_pj = e.l1_pj + e.l2_pj + e.l3_pj + e.dram_pj + e.link_pj;
    return e;
}

double throughput_raw(const FunctionMetrics& m, double amat_cycles,
                      uint32_t core_count, const HierarchyConfig& hierarchy) {
    double l1_lat = hierarchy.levels.front().hit_latency_cycles;
    double refs_per_instr = m.l1_apki / 1000.0;
    double cpi = hierarchy.cpi_base +
                 refs_per_instr * std::max(0.0, amat_cycles - l1_lat);
    double ipc = double(core_count) / cpi;
    double bytes_per_instr =
        (m.dram_apki / 1000.0) * hierarchy.levels.back().line_bytes;
    if (bytes_per_instr > 0.0) {
        double bw_gbs = hierarchy.preset_name == Preset::Ndp
                            ? hierarchy.dram.peak_bw_ndp_gbs
                            : hierarchy.dram.peak_bw_host_gbs;
        double bytes_per_cycle = bw_gbs / hierarchy.dram.clock_ghz;
        ipc = std::min(ipc, bytes_per_cycle / bytes_per_instr);
    }
    return ipc;
}

double throughput_estimate(const FunctionMetrics& m, double amat_cycles,
                           uint32_t core_count, const HierarchyConfig& hierarchy,
                           double baseline_raw) {
    if (baseline_raw <= 0.0)
        throw DmvError("BadArgument", "baseline throughput must be positive");
    return throughput_raw(m, amat_cycles, core_count, hierarchy) / baseline_raw;
}

SpeedupCurve compare(const std::vector<ScalabilityPoint>& points_host,
                     const std::vector<ScalabilityPoint>& points_ndp) {
    if (points_host.size() != points_ndp.size())
        throw DmvError("MismatchedSweep", "point series differ in length");
    SpeedupCurve c;
    for (size_t i = 0; i < points_host.size(); ++i) {
        const auto& h = points_host[i];
        const auto& n = points_ndp[i];
        if (h.core_count != n.core_count)
            throw DmvError("MismatchedSweep", "core counts do not match");
        c.core_counts.push_back(h.core_count);
        c.speedup.push_back(h.rel_throughput == 0.0
                                ? 0.0
                                : n.rel_throughput / h.rel_throughput);
        c.energy_ratio.push_back(h.energy.total_pj == 0.0
                                     ? 0.0
                                     : n.energy.total_pj / h.energy.total_pj);
    }
    return c;
}

std::string points_to_csv(const std::vector<ScalabilityPoint>& points) {
    std::string out =
        "core_count,preset,ai,mpki,lfmr,amat_cycles,l1_pj,l2_pj,l3_pj,dram_pj,"
        "link_pj,total_pj,rel_throughput\n";
    char buf[512];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf),
                      "%u,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      p.core_count, to_string(p.preset).c_str(), p.metrics.ai,
                      p.metrics.mpki, p.metrics.lfmr, p.amat_cycles, p.energy.l1_pj,
                      p.energy.l2_pj, p.energy.l3_pj, p.energy.dram_pj,
                      p.energy.link_pj, p.energy.total_pj, p.rel_throughput);
        out += buf;
    }
    return out;
}

std::string points_to_json(const std::vector<ScalabilityPoint>& points) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : points) {
        nlohmann::ordered_json j;
        j["core_count"] = p.core_count;
        j["preset"] = to_string(p.preset);
        j["ai"] = p.metrics.ai;
        j["mpki"] = p.metrics.mpki;
        j["lfmr"] = p.metrics.lfmr;
        j["lfmr_flagged"] = p.metrics.lfmr_flagged;
        j["spatial"] = p.metrics.spatial;
        j["temporal"] = p.metrics.temporal;
        j["amat_cycles"] = p.amat_cycles;
        j["energy"] = {{"l1_pj", p.energy.l1_pj},     {"l2_pj", p.energy.l2_pj},
                       {"l3_pj", p.energy.l3_pj},     {"dram_pj", p.energy.dram_pj},
                       {"link_pj", p.energy.link_pj}, {"total_pj", p.energy.total_pj}};
        j["rel_throughput"] = p.rel_throughput;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace dmv
