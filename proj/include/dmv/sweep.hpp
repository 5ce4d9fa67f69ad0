#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dmv/cachesim.hpp"
#include "dmv/model.hpp"

namespace dmv {

using TraceBundle = std::vector<Trace>;

// Runs simulate_multicore + metrics + amat/energy/throughput for every
// (core count, preset) pair. rel_throughput is normalized to the Host preset
// at the smallest core count. Independent simulations may run on up to
// `jobs` threads; results are assembled in a fixed order so output is
// identical regardless of parallelism.
std::vector<ScalabilityPoint> scalability_sweep(
    const std::map<uint32_t, TraceBundle>& bundles,
    const std::vector<HierarchyConfig>& hierarchies, const LocalityProfile& locality,
    uint64_t interleave_granularity = 64, unsigned jobs = 1);

std::vector<ScalabilityPoint> filter_preset(const std::vector<ScalabilityPoint>& pts,
                                            Preset preset);

}  // namespace dmv
