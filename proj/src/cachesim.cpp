#include "dmv/cachesim.hpp"

#include <algorithm>
#include <bit>
#include <deque>

#include "json.hpp"

namespace dmv {

std::string to_string(Preset p) {
    switch (p) {
        case Preset::Host: return "host";
        case Preset::HostPf: return "hostpf";
        case Preset::Ndp: return "ndp";
    }
    return "?";
}

Preset parse_preset(const std::string& s) {
    if (s == "host") return Preset::Host;
    if (s == "hostpf" || s == "host+pf" || s == "host_pf") return Preset::HostPf;
    if (s == "ndp") return Preset::Ndp;
    throw DmvError("BadArgument", "unknown preset: " + s);
}

HierarchyConfig preset(Preset name) {
    CacheLevelConfig l1{32 * 1024, 8, 64, 4, 15.0, 33.0};
    CacheLevelConfig l2{256 * 1024, 8, 64, 7, 46.0, 93.0};
    CacheLevelConfig l3{8 * 1024 * 1024, 16, 64, 27, 945.0, 1904.0};
    HierarchyConfig h;
    h.preset_name = name;
    switch (name) {
        case Preset::Host:
            h.levels = {l1, l2, l3};
            break;
        case Preset::HostPf:
            h.levels = {l1, l2, l3};
            h.prefetcher.enabled = true;
            break;
        case Preset::Ndp:
            h.levels = {l1};
            break;
    }
    return h;
}

void validate(const HierarchyConfig& h) {
    if (h.levels.empty() || h.levels.size() > 3)
        throw DmvError("ConfigInvalid", "hierarchy needs 1 to 3 cache levels");
    for (const auto& l : h.levels) {
        if (l.line_bytes == 0 || !std::has_single_bit(l.line_bytes))
            throw DmvError("ConfigInvalid", "line_bytes must be a power of two");
        if (l.ways == 0 || l.size_bytes == 0 ||
            l.size_bytes % (uint64_t(l.ways) * l.line_bytes) != 0)
            throw DmvError("ConfigInvalid", "size must be divisible by ways*line");
        uint64_t sets = l.size_bytes / (uint64_t(l.ways) * l.line_bytes);
        if (!std::has_single_bit(sets))
            throw DmvError("ConfigInvalid", "set count must be a power of two");
    }
    if (h.prefetcher.enabled) {
        if (h.levels.size() < 2)
            throw DmvError("ConfigInvalid", "prefetcher requires an L2 to fill");
        if (h.prefetcher.degree < 1 || h.prefetcher.stream_count < 1 ||
            h.prefetcher.table_entries < 1)
            throw DmvError("ConfigInvalid", "prefetcher parameters must be >= 1");
    }
    if (h.preset_name == Preset::Ndp &&
        (h.levels.size() != 1 || h.prefetcher.enabled))
        throw DmvError("ConfigInvalid",
                       "Ndp preset has exactly one level and no prefetcher");
}

namespace {

// Tag store with exact LRU via a per-level access tick.
class CacheLevel {
public:
    explicit CacheLevel(const CacheLevelConfig& cfg)
        : ways_(cfg.ways),
          line_shift_(std::countr_zero(cfg.line_bytes)),
          sets_(uint32_t(cfg.size_bytes / (uint64_t(cfg.ways) * cfg.line_bytes))),
          set_mask_(sets_ - 1),
          tags_(size_t(sets_) * ways_, 0),
          ticks_(size_t(sets_) * ways_, 0),
          valid_(size_t(sets_) * ways_, 0) {}

    uint64_t line_of(uint64_t addr) const { return addr >> line_shift_; }

    // Probe-and-fill: returns true on hit; on miss installs the line in the
    // LRU way.
    bool access(uint64_t line) {
        size_t base = size_t(line & set_mask_) * ways_;
        ++tick_;
        size_t victim = base;
        uint64_t oldest = UINT64_MAX;
        for (size_t w = base; w < base + ways_; ++w) {
            if (valid_[w] && tags_[w] == line) {
                ticks_[w] = tick_;
                return true;
            }
            uint64_t age = valid_[w] ? ticks_[w] : 0;
            if (age < oldest) {
                oldest = age;
                victim = w;
            }
        }
        tags_[victim] = line;
        ticks_[victim] = tick_;
        valid_[victim] = 1;
        return false;
    }

    // Probe without filling; updates recency on hit.
    bool probe(uint64_t line) {
        size_t base = size_t(line & set_mask_) * ways_;
        for (size_t w = base; w < base + ways_; ++w) {
            if (valid_[w] && tags_[w] == line) {
                ticks_[w] = ++tick_;
                return true;
            }
        }
        return false;
    }

    // Presence check with no side effects.
    bool contains(uint64_t line) const {
        size_t base = size_t(line & set_mask_) * ways_;
        for (size_t w = base; w < base + ways_; ++w)
            if (valid_[w] && tags_[w] == line) return true;
        return false;
    }

    void install(uint64_t line) {
        size_t base = size_t(line & set_mask_) * ways_;
        ++tick_;
        size_t victim = base;
        uint64_t oldest = UINT64_MAX;
        for (size_t w = base; w < base + ways_; ++w) {
            if (valid_[w] && tags_[w] == line) {
                ticks_[w] = tick_;
                return;
            }
            uint64_t age = valid_[w] ? ticks_[w] : 0;
            if (age < oldest) {
                oldest = age;
                victim = w;
            }
        }
        tags_[victim] = line;
        ticks_[victim] = tick_;
        valid_[victim] = 1;
    }

private:
    uint32_t ways_;
    uint32_t line_shift_;
    uint32_t sets_;
    uint64_t set_mask_;
    std::vector<uint64_t> tags_;
    std::vector<uint64_t> ticks_;
    std::vector<uint8_t> valid_;
    uint64_t tick_ = 0;
};

// Functional stream prefetcher. Trains on L1 demand-miss lines: a miss
// adjacent to a recently seen miss allocates a stream; a miss matching a
// stream's expected next line advances it. Either event requests `degree`
// next lines.
class StreamPrefetcher {
public:
    explicit StreamPrefetcher(const PrefetcherConfig& cfg) : cfg_(cfg) {}

    void on_l1_miss(uint64_t line, std::vector<uint64_t>& out) {
        out.clear();
        ++tick_;
        for (auto& s : streams_) {
            if (!s.valid || s.next != line) continue;
            s.next = advance(line, s.dir);
            s.tick = tick_;
            emit(line, s.dir, out);
            return;
        }
        for (uint64_t prev : recent_) {
            int dir = 0;
            if (prev + 1 == line) dir = 1;
            else if (prev == line + 1) dir = -1;
            if (dir == 0) continue;
            allocate(line, dir);
            emit(line, dir, out);
            break;
        }
        recent_.push_back(line);
        if (recent_.size() > cfg_.table_entries) recent_.pop_front();
    }

private:
    struct Stream {
        uint64_t next = 0;
        int dir = 1;
        uint64_t tick = 0;
        bool valid = false;
    };

    static uint64_t advance(uint64_t line, int dir) {
        return dir > 0 ? line + 1 : (line == 0 ? 0 : line - 1);
    }

    void emit(uint64_t line, int dir, std::vector<uint64_t>& out) {
        uint64_t l = line;
        for (uint32_t i = 0; i < cfg_.degree; ++i) {
            uint64_t n = advance(l, dir);
            if (n == l) break;  // underflow at line 0
            out.push_back(n);
            l = n;
        }
    }

    void allocate(uint64_t line, int dir) {
        if (streams_.size() < cfg_.stream_count) {
            streams_.push_back({advance(line, dir), dir, tick_, true});
            return;
        }
        size_t victim = 0;
        for (size_t i = 1; i < streams_.size(); ++i)
            if (streams_[i].tick < streams_[victim].tick) victim = i;
        streams_[victim] = {advance(line, dir), dir, tick_, true};
    }

    PrefetcherConfig cfg_;
    std::vector<Stream> streams_;
    std::deque<uint64_t> recent_;
    uint64_t tick_ = 0;
};

// One emulated stream's private cache state plus a reference to the shared
// last level (nullptr when the stream owns all levels).
struct StreamState {
    std::vector<CacheLevel> priv;
    CacheLevel* shared = nullptr;
    std::unique_ptr<StreamPrefetcher> prefetcher;
};

void simulate_stream_records(const Trace& trace, size_t begin, size_t end,
                             const HierarchyConfig& h, StreamState& st,
                             CacheStats& stats, CacheStats* shared_stats,
                             uint64_t* shared_dram, std::vector<int8_t>* serviced_out) {
    const size_t n_levels = h.levels.size();
    std::vector<uint64_t> pf_lines;
    for (size_t i = begin; i < end; ++i) {
        const TraceRecord& r = trace.records[i];
        stats.total_instructions += r.instr_gap;
        stats.total_alu_ops += r.alu_ops;
        ++stats.record_count;
        int8_t serviced = -1;
        bool l1_missed = false;
        for (size_t k = 0; k < n_levels; ++k) {
            bool is_shared = st.shared && k == n_levels - 1;
            CacheLevel& level = is_shared ? *st.shared : st.priv[k];
            uint64_t line = level.line_of(r.addr);
            LevelStats& ls = is_shared && shared_stats ? shared_stats->levels[k]
                                                       : stats.levels[k];
            ++ls.accesses;
            if (level.access(line)) {
                ++ls.hits;
                serviced = int8_t(k);
                break;
            }
            ++ls.misses;
            if (k == 0) l1_missed = true;
        }
        if (serviced < 0) {
            if (st.shared && shared_stats) {
                ++shared_stats->dram_accesses;
                ++shared_stats->bb_llc_misses[r.bb_id];
            } else {
                ++stats.dram_accesses;
                ++stats.bb_llc_misses[r.bb_id];
            }
            if (shared_dram) ++(*shared_dram);
        }
        if (serviced_out) (*serviced_out)[i] = serviced;

        if (st.prefetcher && l1_missed) {
            st.prefetcher->on_l1_miss(st.priv[0].line_of(r.addr), pf_lines);
            for (uint64_t pline : pf_lines) {
                // Fill into L2; source the line from L3 or memory.
                LevelStats& l2s = stats.levels[1];
                ++l2s.prefetch_issued;
                if (st.priv[1].contains(pline)) {
                    ++l2s.prefetch_hits;
                    continue;
                }
                bool is_shared_l3 = st.shared && n_levels == 3;
                CacheLevel* l3 = n_levels >= 3
                                     ? (is_shared_l3 ? st.shared : &st.priv[2])
                                     : nullptr;
                if (l3) {
                    LevelStats& l3s = is_shared_l3 && shared_stats
                                          ? shared_stats->levels[2]
                                          : stats.levels[2];
                    ++l3s.prefetch_issued;
                    if (l3->probe(pline)) {
                        ++l3s.prefetch_hits;
                    } else if (st.shared && shared_stats) {
                        ++shared_stats->dram_accesses;
                    } else {
                        ++stats.dram_accesses;
                    }
                } else if (st.shared && shared_stats) {
                    ++shared_stats->dram_accesses;
                } else {
                    ++stats.dram_accesses;
                }
                st.priv[1].install(pline);
            }
        }
    }
}

CacheStats make_stats(const HierarchyConfig& h) {
    CacheStats s;
    s.levels.resize(h.levels.size());
    s.preset_name = h.preset_name;
    return s;
}

}  // namespace

CacheStats simulate(const Trace& trace, const HierarchyConfig& hierarchy,
                    std::vector<int8_t>* serviced_level) {
    validate(hierarchy);
    if (trace.empty()) throw DmvError("EmptyTrace", "trace has no records");
    StreamState st;
    for (const auto& l : hierarchy.levels) st.priv.emplace_back(l);
    if (hierarchy.prefetcher.enabled)
        st.prefetcher = std::make_unique<StreamPrefetcher>(hierarchy.prefetcher);
    CacheStats stats = make_stats(hierarchy);
    if (serviced_level) serviced_level->assign(trace.records.size(), -1);
    simulate_stream_records(trace, 0, trace.records.size(), hierarchy, st, stats,
                            nullptr, nullptr, serviced_level);
    return stats;
}

CacheStats simulate_reference(const Trace& trace, const HierarchyConfig& hierarchy,
                              std::vector<int8_t>* serviced_level) {
    validate(hierarchy);
    if (trace.empty()) throw DmvError("EmptyTrace", "trace has no records");
    // Plain list-scan LRU: per set, a vector ordered most-recent-first.
    struct RefLevel {
        uint64_t sets, ways;
        uint32_t shift;
        std::vector<std::vector<uint64_t>> lru;
    };
    std::vector<RefLevel> levels;
    for (const auto& cfg : hierarchy.levels) {
        RefLevel l;
        l.ways = cfg.ways;
        l.sets = cfg.size_bytes / (uint64_t(cfg.ways) * cfg.line_bytes);
        l.shift = uint32_t(std::countr_zero(cfg.line_bytes));
        l.lru.resize(l.sets);
        levels.push_back(std::move(l));
    }
    CacheStats stats = make_stats(hierarchy);
    if (serviced_level) serviced_level->assign(trace.records.size(), -1);
    for (size_t i = 0; i < trace.records.size(); ++i) {
        const TraceRecord& r = trace.records[i];
        stats.total_instructions += r.instr_gap;
        stats.total_alu_ops += r.alu_ops;
        ++stats.record_count;
        int8_t serviced = -1;
        for (size_t k = 0; k < levels.size(); ++k) {
            RefLevel& l = levels[k];
            uint64_t line = r.addr >> l.shift;
            auto& set = l.lru[line % l.sets];
            ++stats.levels[k].accesses;
            auto it = std::find(set.begin(), set.end(), line);
            if (it != set.end()) {
                ++stats.levels[k].hits;
                set.erase(it);
                set.insert(set.begin(), line);
                serviced = int8_t(k);
                break;
            }
            ++stats.levels[k].misses;
            set.insert(set.begin(), line);
            if (set.size() > l.ways) set.pop_back();
        }
        if (serviced < 0) {
            ++stats.dram_accesses;
            ++stats.bb_llc_misses[r.bb_id];
        }
        if (serviced_level) (*serviced_level)[i] = serviced;
    }
    return stats;
}

CacheStats simulate_multicore(const std::vector<Trace>& bundle,
                              const HierarchyConfig& hierarchy,
                              uint64_t granularity,
                              std::vector<CacheStats>* per_stream) {
    validate(hierarchy);
    if (bundle.empty()) throw DmvError("EmptyBundle", "bundle has no streams");
    if (granularity < 1) throw DmvError("BadArgument", "granularity must be >= 1");
    if (bundle.size() == 1) {
        CacheStats s = simulate(bundle[0], hierarchy);
        if (per_stream) *per_stream = {s};
        return s;
    }

    const size_t n_levels = hierarchy.levels.size();
    const bool has_shared = hierarchy.preset_name != Preset::Ndp && n_levels >= 2;
    std::unique_ptr<CacheLevel> shared;
    if (has_shared) shared = std::make_unique<CacheLevel>(hierarchy.levels.back());

    std::vector<StreamState> states(bundle.size());
    std::vector<CacheStats> stream_stats(bundle.size(), make_stats(hierarchy));
    for (auto& st : states) {
        size_t n_priv = has_shared ? n_levels - 1 : n_levels;
        for (size_t k = 0; k < n_priv; ++k) st.priv.emplace_back(hierarchy.levels[k]);
        st.shared = shared.get();
        if (hierarchy.prefetcher.enabled)
            st.prefetcher = std::make_unique<StreamPrefetcher>(hierarchy.prefetcher);
    }
    // Shared-level counters live in one stats block so aggregate numbers are
    // not double-counted; per-stream L3 contributions are tracked separately.
    CacheStats shared_block = make_stats(hierarchy);

    std::vector<size_t> pos(bundle.size(), 0);
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (size_t s = 0; s < bundle.size(); ++s) {
            size_t total = bundle[s].records.size();
            if (pos[s] >= total) continue;
            size_t end = std::min(pos[s] + granularity, total);
            // Per-stream view of the shared level: route shared counters into
            // this stream's stats, then aggregate at the end.
            simulate_stream_records(bundle[s], pos[s], end, hierarchy, states[s],
                                    stream_stats[s],
                                    has_shared ? &shared_block : nullptr, nullptr,
                                    nullptr);
            pos[s] = end;
            progressed = true;
        }
    }

    CacheStats agg = make_stats(hierarchy);
    for (const auto& ss : stream_stats) merge_into(agg, ss);
    merge_into(agg, shared_block);
    if (per_stream) *per_stream = std::move(stream_stats);
    return agg;
}

CacheStats& merge_into(CacheStats& acc, const CacheStats& s) {
    if (acc.levels.size() < s.levels.size()) acc.levels.resize(s.levels.size());
    for (size_t k = 0; k < s.levels.size(); ++k) {
        acc.levels[k].accesses += s.levels[k].accesses;
        acc.levels[k].hits += s.levels[k].hits;
        acc.levels[k].misses += s.levels[k].misses;
        acc.levels[k].prefetch_issued += s.levels[k].prefetch_issued;
        acc.levels[k].prefetch_hits += s.levels[k].prefetch_hits;
    }
    acc.dram_accesses += s.dram_accesses;
    acc.total_instructions += s.total_instructions;
    acc.total_alu_ops += s.total_alu_ops;
    acc.record_count += s.record_count;
    for (const auto& [bb, n] : s.bb_llc_misses) acc.bb_llc_misses[bb] += n;
    return acc;
}

std::string stats_to_json(const CacheStats& s) {
    nlohmann::ordered_json j;
    j["preset"] = to_string(s.preset_name);
    auto& lv = j["levels"] = nlohmann::ordered_json::array();
    for (const auto& l : s.levels) {
        lv.push_back({{"accesses", l.accesses},
                      {"hits", l.hits},
                      {"misses", l.misses},
                      {"prefetch_issued", l.prefetch_issued},
                      {"prefetch_hits", l.prefetch_hits}});
    }
    j["dram_accesses"] = s.dram_accesses;
    j["total_instructions"] = s.total_instructions;
    j["total_alu_ops"] = s.total_alu_ops;
    j["record_count"] = s.record_count;
    auto& bb = j["bb_llc_misses"] = nlohmann::ordered_json::array();
    for (const auto& [id, n] : s.bb_llc_misses) bb.push_back({id, n});
    return j.dump(2);
}

FunctionMetrics metrics(const CacheStats& stats, const LocalityProfile& locality,
                        uint32_t core_count) {
    if (stats.total_instructions == 0)
        throw DmvError("DivisionGuard", "stats carry zero instructions");
    if (stats.levels.empty() || stats.l1().accesses == 0)
        throw DmvError("DivisionGuard", "stats carry zero L1 accesses");
    FunctionMetrics m;
    m.core_count = core_count;
    m.spatial = locality.spatial;
    m.temporal = locality.temporal;
    m.ai = double(stats.total_alu_ops) / double(stats.l1().accesses);
    m.mpki = 1000.0 * double(stats.llc().misses) / double(stats.total_instructions);
    if (stats.levels.size() == 1) {
        m.lfmr = 1.0;  // no L2/L3 exists to filter misses
        m.lfmr_flagged = true;
    } else {
        uint64_t l1_misses = stats.l1().misses;
        m.lfmr = l1_misses == 0 ? 0.0 : double(stats.llc().misses) / double(l1_misses);
    }
    m.l1_apki = 1000.0 * double(stats.l1().accesses) / double(stats.total_instructions);
    m.dram_apki = 1000.0 * double(stats.dram_accesses) / double(stats.total_instructions);
    return m;
}

}  // namespace dmv
