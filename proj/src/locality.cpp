#include "dmv/locality.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace dmv {

namespace {

void require_nonempty(const Trace& trace) {
    if (trace.empty()) throw DmvError("EmptyTrace", "trace has no records");
}

uint32_t log2_floor(uint64_t n) {
    uint32_t b = 0;
    while (n >>= 1) ++b;
    return b;
}

}  // namespace

std::string to_string(ReuseMode mode) {
    return mode == ReuseMode::Occurrences ? "occurrences" : "repetitions";
}

ReuseMode parse_reuse_mode(const std::string& s) {
    if (s == "occurrences") return ReuseMode::Occurrences;
    if (s == "repetitions") return ReuseMode::Repetitions;
    throw DmvError("BadArgument", "unknown reuse mode: " + s);
}

StrideProfile stride_profile(const Trace& trace, uint32_t window_w) {
    require_nonempty(trace);
    if (window_w < 2) throw DmvError("BadArgument", "window W must be >= 2");
    const uint64_t word = trace.header.word_size_bytes;
    StrideProfile p;
    std::vector<uint64_t> words;
    words.reserve(window_w);
    const size_t n_windows = trace.records.size() / window_w;
    for (size_t w = 0; w < n_windows; ++w) {
        words.clear();
        for (size_t i = w * window_w; i < (w + 1) * window_w; ++i)
            words.push_back(trace.records[i].addr / word);
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        if (words.size() < 2) {
            ++p.skipped_windows;
            continue;
        }
        uint64_t min_dist = UINT64_MAX;
        for (size_t i = 1; i < words.size(); ++i)
            min_dist = std::min(min_dist, words[i] - words[i - 1]);
        ++p.bins[min_dist];
    }
    p.total_windows = n_windows;
    return p;
}

double spatial_from_profile(const StrideProfile& p) {
    const uint64_t counted = p.total_windows - p.skipped_windows;
    if (counted == 0) return 0.0;  // no spatial pattern exists
    double sum = 0.0;
    for (const auto& [stride, count] : p.bins)
        sum += (double(count) / double(counted)) / double(stride);
    return sum;
}

double spatial_locality(const Trace& trace, uint32_t window_w) {
    return spatial_from_profile(stride_profile(trace, window_w));
}

ReuseProfile reuse_profile(const Trace& trace, uint32_t window_l, ReuseMode mode) {
    require_nonempty(trace);
    if (window_l < 2) throw DmvError("BadArgument", "window L must be >= 2");
    const uint64_t word = trace.header.word_size_bytes;
    ReuseProfile p;
    p.mode = mode;
    std::unordered_map<uint64_t, uint64_t> counts;
    const size_t n_windows = trace.records.size() / window_l;
    for (size_t w = 0; w < n_windows; ++w) {
        counts.clear();
        for (size_t i = w * window_l; i < (w + 1) * window_l; ++i)
            ++counts[trace.records[i].addr / word];
        for (const auto& [addr, k] : counts) {
            if (k < 2) continue;
            uint64_t reuse_n = (mode == ReuseMode::Occurrences) ? k : k - 1;
            ++p.bins[log2_floor(reuse_n)];
        }
        p.total_accesses += window_l;
    }
    return p;
}

double temporal_from_profile(const ReuseProfile& p) {
    if (p.total_accesses == 0) return 0.0;
    double sum = 0.0;
    for (const auto& [bin, count] : p.bins)
        sum += std::ldexp(double(count), int(bin));  // 2^bin * count
    double v = sum / double(p.total_accesses);
    return std::clamp(v, 0.0, 1.0);
}

double temporal_locality(const Trace& trace, uint32_t window_l, ReuseMode mode) {
    return temporal_from_profile(reuse_profile(trace, window_l, mode));
}

LocalityProfile locality_profile(const Trace& trace, uint32_t window_w,
                                 uint32_t window_l, ReuseMode mode) {
    LocalityProfile p;
    p.stride_profile = stride_profile(trace, window_w);
    p.reuse_profile = reuse_profile(trace, window_l, mode);
    p.spatial = spatial_from_profile(p.stride_profile);
    p.temporal = temporal_from_profile(p.reuse_profile);
    p.window_w = window_w;
    p.window_l = window_l;
    return p;
}

std::string locality_to_json(const LocalityProfile& p) {
    nlohmann::ordered_json j;
    j["spatial"] = p.spatial;
    j["temporal"] = p.temporal;
    j["window_w"] = p.window_w;
    j["window_l"] = p.window_l;
    j["mode"] = to_string(p.reuse_profile.mode);
    auto& sb = j["stride_bins"] = nlohmann::ordered_json::array();
    for (const auto& [stride, count] : p.stride_profile.bins)
        sb.push_back({stride, count});
    auto& rb = j["reuse_bins"] = nlohmann::ordered_json::array();
    for (const auto& [bin, count] : p.reuse_profile.bins) rb.push_back({bin, count});
    j["skipped_windows"] = p.stride_profile.skipped_windows;
    j["total_accesses"] = p.reuse_profile.total_accesses;
    return j.dump(2);
}

}  // namespace dmv
