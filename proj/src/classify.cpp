#include "dmv/classify.hpp"

#include <algorithm>

#include "json.hpp"

namespace dmv {

Thresholds default_thresholds() { return Thresholds{}; }

std::string to_string(BottleneckClass c) {
    switch (c) {
        case BottleneckClass::C1a: return "1a";
        case BottleneckClass::C1b: return "1b";
        case BottleneckClass::C1c: return "1c";
        case BottleneckClass::C2a: return "2a";
        case BottleneckClass::C2b: return "2b";
        case BottleneckClass::C2c: return "2c";
        case BottleneckClass::Unclassified: return "unclassified";
    }
    return "?";
}

BottleneckClass parse_class(const std::string& s) {
    if (s == "1a") return BottleneckClass::C1a;
    if (s == "1b") return BottleneckClass::C1b;
    if (s == "1c") return BottleneckClass::C1c;
    if (s == "2a") return BottleneckClass::C2a;
    if (s == "2b") return BottleneckClass::C2b;
    if (s == "2c") return BottleneckClass::C2c;
    throw DmvError("UnknownClass", "unknown bottleneck class: " + s);
}

std::string to_string(SlopeClass s) {
    switch (s) {
        case SlopeClass::Decreasing: return "decreasing";
        case SlopeClass::Flat: return "flat";
        case SlopeClass::Increasing: return "increasing";
    }
    return "?";
}

SlopeClass lfmr_slope(const std::vector<std::pair<uint32_t, double>>& series,
                      double slope_delta) {
    if (series.size() < 2)
        throw DmvError("TooFewPoints", "slope needs at least 2 points");
    for (size_t i = 1; i < series.size(); ++i)
        if (series[i].first <= series[i - 1].first)
            throw DmvError("BadArgument", "core counts must be ascending");
    double d = series.back().second - series.front().second;
    if (d > slope_delta) return SlopeClass::Increasing;
    if (d < -slope_delta) return SlopeClass::Decreasing;
    return SlopeClass::Flat;
}

ClassificationResult classify(const std::vector<ScalabilityPoint>& host_sweep,
                              const LocalityProfile& locality,
                              const Thresholds& thr) {
    std::vector<ScalabilityPoint> pts;
    for (const auto& p : host_sweep)
        if (p.preset == Preset::Host) pts.push_back(p);
    if (pts.empty())
        throw DmvError("PresetMismatch", "classification expects Host-preset metrics");
    if (pts.size() < 2)
        throw DmvError("TooFewPoints", "need Host points at >= 2 core counts");
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.core_count < b.core_count; });

    ClassificationResult r;
    r.temporal = locality.temporal;
    r.ai = pts.front().metrics.ai;
    r.mpki = pts.front().metrics.mpki;
    r.lfmr_ref = pts.front().metrics.lfmr;
    for (const auto& p : pts) r.lfmr_series.emplace_back(p.core_count, p.metrics.lfmr);
    r.slope = lfmr_slope(r.lfmr_series, thr.slope_delta);

    const double T = r.temporal, A = r.ai, M = r.mpki, Lr = r.lfmr_ref;
    if (T < thr.temporal_thr) {
        if (M >= thr.mpki_thr && Lr >= thr.lfmr_thr)
            r.cls = BottleneckClass::C1a;
        else if (r.slope == SlopeClass::Decreasing)
            r.cls = BottleneckClass::C1c;
        else if (Lr >= thr.lfmr_thr)
            r.cls = BottleneckClass::C1b;
        else {
            r.cls = BottleneckClass::Unclassified;
            r.diagnostic = "low-T, low-MPKI, low-LFMR, non-decreasing";
        }
        if (A >= thr.ai_thr)
            r.warnings.push_back(
                "unusual combination: high AI with low temporal locality");
    } else {
        if (r.slope == SlopeClass::Increasing)
            r.cls = BottleneckClass::C2a;
        else if (A >= thr.ai_thr && Lr < thr.lfmr_thr)
            r.cls = BottleneckClass::C2c;
        else
            r.cls = BottleneckClass::C2b;
    }
    // Combination the simulator should never produce in a feed-forward
    // hierarchy: flag, do not fail.
    if (M >= thr.mpki_thr && Lr < thr.lfmr_thr)
        r.warnings.push_back(
            "diagnostic: MPKI above threshold with LFMR below threshold");
    return r;
}

std::string classification_to_json(const ClassificationResult& r, uint16_t func_id) {
    nlohmann::ordered_json j;
    j["func_id"] = func_id;
    j["class"] = to_string(r.cls);
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    j["warnings"] = r.warnings;
    nlohmann::ordered_json in;
    in["T"] = r.temporal;
    in["A"] = r.ai;
    in["M"] = r.mpki;
    in["Lr"] = r.lfmr_ref;
    in["slope"] = to_string(r.slope);
    auto& series = in["series"] = nlohmann::ordered_json::array();
    for (const auto& [c, l] : r.lfmr_series) series.push_back({c, l});
    j["inputs"] = std::move(in);
    return j.dump(2);
}

}  // namespace dmv
