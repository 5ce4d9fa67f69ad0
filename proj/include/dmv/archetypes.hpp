#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dmv/classify.hpp"
#include "dmv/trace.hpp"

namespace dmv {

struct ArchetypeScale {
    std::vector<uint32_t> core_counts = {1, 4, 16, 64, 256};
    uint64_t budget_records = 2'000'000;  // soft cap per core-count bundle
};

ArchetypeScale default_scale();
ArchetypeScale small_scale();  // {1,4,16}, reduced budget, for quick runs

struct TraceBundleSet {
    BottleneckClass cls = BottleneckClass::Unclassified;
    uint64_t seed = 0;
    std::map<uint32_t, std::vector<Trace>> bundles;  // core count -> per-stream traces
};

// Per-stream synthetic traces engineered to exhibit one bottleneck class's
// metric signature under the default presets. Deterministic per seed.
TraceBundleSet gen_archetype(BottleneckClass cls, const ArchetypeScale& scale,
                             uint64_t seed);

std::vector<BottleneckClass> all_classes();

}  // namespace dmv
