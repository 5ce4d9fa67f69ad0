#include "dmv/sweep.hpp"

#include <algorithm>
#include <future>
#include <thread>

namespace dmv {

namespace {

ScalabilityPoint run_point(uint32_t cores, const TraceBundle& bundle,
                           const HierarchyConfig& h, const LocalityProfile& loc,
                           uint64_t granularity) {
    ScalabilityPoint p;
    p.core_count = cores;
    p.preset = h.preset_name;
    CacheStats stats = simulate_multicore(bundle, h, granularity);
    p.metrics = metrics(stats, loc, cores);
    p.amat_cycles = amat(stats, h);
    p.energy = energy(stats, h);
    p.raw_throughput = throughput_raw(p.metrics, p.amat_cycles, cores, h);
    return p;
}

}  // namespace

std::vector<ScalabilityPoint> scalability_sweep(
    const std::map<uint32_t, TraceBundle>& bundles,
    const std::vector<HierarchyConfig>& hierarchies, const LocalityProfile& locality,
    uint64_t interleave_granularity, unsigned jobs) {
    if (bundles.empty()) throw DmvError("EmptyBundle", "no bundles to sweep");
    if (hierarchies.empty()) throw DmvError("ConfigInvalid", "no hierarchies given");
    for (const auto& [cores, bundle] : bundles)
        if (bundle.empty())
            throw DmvError("EmptyBundle",
                           "bundle for " + std::to_string(cores) + " cores is empty");

    struct Task {
        uint32_t cores;
        const TraceBundle* bundle;
        const HierarchyConfig* hier;
    };
    std::vector<Task> tasks;
    for (const auto& h : hierarchies)
        for (const auto& [cores, bundle] : bundles)
            tasks.push_back({cores, &bundle, &h});

    std::vector<ScalabilityPoint> points(tasks.size());
    if (jobs <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i)
            points[i] = run_point(tasks[i].cores, *tasks[i].bundle, *tasks[i].hier,
                                  locality, interleave_granularity);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                points[i] = run_point(tasks[i].cores, *tasks[i].bundle,
                                      *tasks[i].hier, locality,
                                      interleave_granularity);
            }
        };
        std::vector<std::thread> pool;
        unsigned n = std::min<unsigned>(jobs, std::thread::hardware_concurrency());
        for (unsigned t = 0; t < std::max(1u, n); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Normalize to the Host preset at the smallest core count; fall back to
    // the first point when no Host preset was swept.
    double baseline = points.front().raw_throughput;
    uint32_t best_cores = UINT32_MAX;
    for (const auto& p : points) {
        if (p.preset == Preset::Host && p.core_count < best_cores) {
            best_cores = p.core_count;
            baseline = p.raw_throughput;
        }
    }
    for (auto& p : points)
        p.rel_throughput = baseline > 0.0 ? p.raw_throughput / baseline : 0.0;
    return points;
}

std::vector<ScalabilityPoint> filter_preset(const std::vector<ScalabilityPoint>& pts,
                                            Preset preset) {
    std::vector<ScalabilityPoint> out;
    for (const auto& p : pts)
        if (p.preset == preset) out.push_back(p);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.core_count < b.core_count; });
    return out;
}

}  // namespace dmv
