#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dmv/trace.hpp"

namespace dmv {

enum class ReuseMode : uint8_t {
    Occurrences,  // N = occurrence count k; single continuous address -> 1.0
    Repetitions,  // N = k - 1; bin 0 holds addresses reused exactly once
};

std::string to_string(ReuseMode mode);
ReuseMode parse_reuse_mode(const std::string& s);

// Histogram over the minimum pairwise word-distance of each analysis window.
struct StrideProfile {
    std::map<uint64_t, uint64_t> bins;  // stride (words, >= 1) -> window count
    uint64_t skipped_windows = 0;       // windows with < 2 distinct addresses
    uint64_t total_windows = 0;
};

// Histogram over floor(log2 N) of per-window address reuse counts.
struct ReuseProfile {
    std::map<uint32_t, uint64_t> bins;  // bin index -> count
    uint64_t total_accesses = 0;        // references in complete windows
    ReuseMode mode = ReuseMode::Occurrences;
};

struct LocalityProfile {
    double spatial = 0.0;
    double temporal = 0.0;
    StrideProfile stride_profile;
    ReuseProfile reuse_profile;
    uint32_t window_w = 32;
    uint32_t window_l = 32;
};

constexpr uint32_t kDefaultWindowW = 32;
constexpr uint32_t kDefaultWindowL = 32;

// Windows are tumbling (non-overlapping); a trailing partial window is
// discarded. Addresses are analyzed at word granularity: floor(addr / word).
StrideProfile stride_profile(const Trace& trace, uint32_t window_w = kDefaultWindowW);
double spatial_locality(const Trace& trace, uint32_t window_w = kDefaultWindowW);

ReuseProfile reuse_profile(const Trace& trace, uint32_t window_l = kDefaultWindowL,
                           ReuseMode mode = ReuseMode::Occurrences);
double temporal_locality(const Trace& trace, uint32_t window_l = kDefaultWindowL,
                         ReuseMode mode = ReuseMode::Occurrences);

LocalityProfile locality_profile(const Trace& trace,
                                 uint32_t window_w = kDefaultWindowW,
                                 uint32_t window_l = kDefaultWindowL,
                                 ReuseMode mode = ReuseMode::Occurrences);

double spatial_from_profile(const StrideProfile& p);
double temporal_from_profile(const ReuseProfile& p);

std::string locality_to_json(const LocalityProfile& p);

}  // namespace dmv
