#include "dmv/archetypes.hpp"

#include <algorithm>
#include <random>

namespace dmv {

ArchetypeScale default_scale() { return ArchetypeScale{}; }

ArchetypeScale small_scale() {
    ArchetypeScale s;
    s.core_counts = {1, 4, 16};
    s.budget_records = 400'000;
    return s;
}

std::vector<BottleneckClass> all_classes() {
    return {BottleneckClass::C1a, BottleneckClass::C1b, BottleneckClass::C1c,
            BottleneckClass::C2a, BottleneckClass::C2b, BottleneckClass::C2c};
}

namespace {

constexpr uint8_t kWord = 8;
constexpr uint64_t kLine = 64;

// bb tags for the synthetic components
constexpr uint16_t kBbHot = 1;
constexpr uint16_t kBbSweep = 2;
constexpr uint16_t kBbFresh = 3;
constexpr uint16_t kBbChase = 4;
constexpr uint16_t kBbStream = 5;
constexpr uint16_t kBbRandom = 6;

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

uint64_t stream_seed(uint64_t seed, BottleneckClass cls, uint32_t cores,
                     uint32_t stream) {
    uint64_t x = seed;
    x = splitmix64(x ^ (uint64_t(cls) + 1));
    x = splitmix64(x ^ cores);
    x = splitmix64(x ^ stream);
    return x;
}

uint64_t rand_below(std::mt19937_64& eng, uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

uint64_t pow2_ceil(uint64_t v) {
    uint64_t p = 1;
    while (p < v) p <<= 1;
    return p;
}

// Private address region per (stream, slot); regions are 2^36 bytes apart so
// no two components ever share a cache line.
uint64_t region_base(uint32_t stream, uint32_t slot) {
    return (uint64_t(stream) + 1) << 40 | uint64_t(slot) << 36;
}

Trace make_trace(uint16_t func_id) {
    Trace t;
    t.header.word_size_bytes = kWord;
    t.header.source_label = "gen:archetype";
    (void)func_id;
    return t;
}

void push(Trace& t, uint64_t addr, AccessKind kind, uint16_t func, uint16_t bb,
          uint16_t alu, uint32_t gap) {
    t.records.push_back({addr, kind, func, bb, alu, gap});
}

// Class 1a: line-granularity streaming, one instruction per reference.
// Every reference opens a fresh line, so misses flood every level and DRAM
// bandwidth is the binding resource.
Trace stream_1a(uint64_t n, uint32_t stream, uint16_t func) {
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t base = region_base(stream, 0);
    for (uint64_t i = 0; i < n; ++i)
        push(t, base + i * kLine, AccessKind::Read, func, kBbStream, 1, 1);
    t.header.record_count = t.records.size();
    return t;
}

// Class 1b: pointer chase at a low request rate. Single-cycle permutation
// walk: every hop is a compulsory miss, but with ~128 instructions between
// references the MPKI stays low while LFMR stays at 1.
Trace chase_1b(uint64_t n, uint32_t stream, uint64_t seed, uint16_t func) {
    constexpr uint32_t kGap = 128;
    uint64_t words = pow2_ceil(std::max<uint64_t>(4 * n, 32 * 1024));
    std::vector<uint32_t> next(words);
    for (uint64_t i = 0; i < words; ++i) next[i] = uint32_t(i);
    std::mt19937_64 eng(seed);
    for (uint64_t i = words - 1; i > 0; --i)
        std::swap(next[i], next[rand_below(eng, i)]);
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t base = region_base(stream, 0);
    uint64_t cur = 0;
    for (uint64_t i = 0; i < n; ++i) {
        cur = next[cur];
        push(t, base + cur * kWord, AccessKind::Read, func, kBbChase, 1, kGap);
    }
    t.header.record_count = t.records.size();
    return t;
}

// Class 1c: uniform random words over a region of TOTAL/cores bytes. As the
// core count grows the per-stream region shrinks into the private L2, so the
// LFMR falls from ~0.7 toward the cold-miss floor.
Trace random_1c(uint32_t cores, uint32_t stream, uint64_t seed, uint16_t func) {
    constexpr uint64_t kTotal = 24ull * 1024 * 1024;
    constexpr uint32_t kGap = 100;
    uint64_t region = std::max<uint64_t>(kTotal / cores, 64 * 1024);
    uint64_t words = region / kWord;
    uint64_t n = 5 * (region / kLine) + 1024;
    std::mt19937_64 eng(seed);
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t base = region_base(stream, 0);
    for (uint64_t i = 0; i < n; ++i)
        push(t, base + rand_below(eng, words) * kWord, AccessKind::Read, func,
             kBbRandom, 1, kGap);
    t.header.record_count = t.records.size();
    return t;
}

// Class 2a: paired re-reads sweeping a private 1.5 MiB region. One stream's
// region fits the shared L3; the aggregate across many streams does not, so
// the LFMR rises with the core count.
Trace sweep_2a(uint64_t budget_n, uint32_t stream, uint16_t func) {
    constexpr uint64_t kRegion = 3ull * 512 * 1024;  // 1.5 MiB
    const uint64_t region_words = kRegion / kWord;
    const uint64_t sweep_len = 2 * region_words;
    uint64_t n = std::min<uint64_t>(4 * sweep_len, budget_n);
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t base = region_base(stream, 0);
    uint64_t w = 0;
    for (uint64_t i = 0; i < n; i += 2) {
        uint64_t addr = base + w * kWord;
        push(t, addr, AccessKind::Read, func, kBbHot, 1, 2);
        if (i + 1 < n) push(t, addr, AccessKind::Write, func, kBbHot, 1, 2);
        if (++w == region_words) w = 0;
    }
    t.header.record_count = t.records.size();
    return t;
}

// Class 2b: mixed pattern tuned so the host's L2/L3 path and the NDP DRAM
// path cost about the same per L1 miss. Per 40 references: 16 paired reads
// of a 4 KiB hot block, 5 lines of a shared L3-resident sweep, 3 fresh
// streaming lines.
Trace mix_2b(uint64_t n, uint32_t stream, uint16_t func) {
    constexpr uint64_t kSharedBase = 0xDull << 44;
    constexpr uint64_t kSharedLines = (2ull * 1024 * 1024) / kLine;
    constexpr uint64_t kHotWords = 4096 / kWord;
    constexpr uint32_t kGap = 16;
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t hot_base = region_base(stream, 0);
    uint64_t fresh_base = region_base(stream, 1);
    uint64_t hot_w = 0;
    uint64_t sweep_idx = (uint64_t(stream) * 8191) % kSharedLines;
    uint64_t fresh_line = 0;
    while (t.records.size() < n) {
        for (int p = 0; p < 16 && t.records.size() < n; ++p) {
            uint64_t addr = hot_base + hot_w * kWord;
            push(t, addr, AccessKind::Read, func, kBbHot, 1, kGap);
            if (t.records.size() < n)
                push(t, addr, AccessKind::Write, func, kBbHot, 1, kGap);
            if (++hot_w == kHotWords) hot_w = 0;
        }
        for (int d = 0; d < 5 && t.records.size() < n; ++d) {
            push(t, kSharedBase + sweep_idx * kLine, AccessKind::Read, func, kBbSweep,
                 1, kGap);
            if (++sweep_idx == kSharedLines) sweep_idx = 0;
        }
        for (int f = 0; f < 3 && t.records.size() < n; ++f) {
            push(t, fresh_base + fresh_line * kLine, AccessKind::Read, func, kBbFresh,
                 1, kGap);
            ++fresh_line;
        }
    }
    t.header.record_count = t.records.size();
    return t;
}

// Class 2c: compute-heavy hot loop. Per 20 references: 18 paired reads of an
// 8 KiB block plus 2 lines of a private L2-resident sweep; 32 ALU ops per
// reference.
Trace hot_2c(uint64_t n, uint32_t stream, uint16_t func) {
    constexpr uint64_t kHotWords = 8192 / kWord;
    constexpr uint64_t kSweepLines = (128ull * 1024) / kLine;
    constexpr uint32_t kGap = 8;
    constexpr uint16_t kAlu = 32;
    Trace t = make_trace(func);
    t.records.reserve(n);
    uint64_t hot_base = region_base(stream, 0);
    uint64_t sweep_base = region_base(stream, 1);
    uint64_t hot_w = 0, sweep_idx = 0;
    while (t.records.size() < n) {
        for (int p = 0; p < 9 && t.records.size() < n; ++p) {
            uint64_t addr = hot_base + hot_w * kWord;
            push(t, addr, AccessKind::Read, func, kBbHot, kAlu, kGap);
            if (t.records.size() < n)
                push(t, addr, AccessKind::Write, func, kBbHot, kAlu, kGap);
            if (++hot_w == kHotWords) hot_w = 0;
        }
        for (int b = 0; b < 2 && t.records.size() < n; ++b) {
            push(t, sweep_base + sweep_idx * kLine, AccessKind::Read, func, kBbSweep,
                 kAlu, kGap);
            if (++sweep_idx == kSweepLines) sweep_idx = 0;
        }
    }
    t.header.record_count = t.records.size();
    return t;
}

Trace make_stream(BottleneckClass cls, const ArchetypeScale& scale, uint64_t seed,
                  uint32_t cores, uint32_t stream) {
    const uint16_t func = uint16_t(cls) + 1;
    const uint64_t per_stream = std::max<uint64_t>(scale.budget_records / cores, 2048);
    const uint64_t sseed = stream_seed(seed, cls, cores, stream);
    switch (cls) {
        case BottleneckClass::C1a:
            return stream_1a(per_stream / 2, stream, func);
        case BottleneckClass::C1b:
            return chase_1b(per_stream / 2, stream, sseed, func);
        case BottleneckClass::C1c:
            return random_1c(cores, stream, sseed, func);
        case BottleneckClass::C2a:
            return sweep_2a(per_stream, stream, func);
        case BottleneckClass::C2b:
            return mix_2b(per_stream, stream, func);
        case BottleneckClass::C2c:
            return hot_2c(per_stream / 2, stream, func);
        default:
            throw DmvError("UnknownClass", "no recipe for unclassified");
    }
}

}  // namespace

TraceBundleSet gen_archetype(BottleneckClass cls, const ArchetypeScale& scale,
                             uint64_t seed) {
    if (cls == BottleneckClass::Unclassified)
        throw DmvError("UnknownClass", "cannot generate the unclassified archetype");
    if (scale.core_counts.empty())
        throw DmvError("BadArgument", "scale has no core counts");
    TraceBundleSet set;
    set.cls = cls;
    set.seed = seed;
    for (uint32_t cores : scale.core_counts) {
        if (cores < 1) throw DmvError("BadArgument", "core count must be >= 1");
        std::vector<Trace> bundle;
        bundle.reserve(cores);
        for (uint32_t s = 0; s < cores; ++s)
            bundle.push_back(make_stream(cls, scale, seed, cores, s));
        set.bundles.emplace(cores, std::move(bundle));
    }
    return set;
}

}  // namespace dmv
