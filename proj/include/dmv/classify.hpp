#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmv/model.hpp"

namespace dmv {

struct Thresholds {
    double temporal_thr = 0.48;
    double lfmr_thr = 0.56;
    double mpki_thr = 11.0;
    double ai_thr = 8.5;
    double slope_delta = 0.15;  // tool parameter for the slope rule
};

Thresholds default_thresholds();

enum class BottleneckClass : uint8_t { C1a, C1b, C1c, C2a, C2b, C2c, Unclassified };

std::string to_string(BottleneckClass c);
BottleneckClass parse_class(const std::string& s);

enum class SlopeClass : uint8_t { Decreasing, Flat, Increasing };

std::string to_string(SlopeClass s);

// d = lfmr(last) - lfmr(first); Increasing if d > delta, Decreasing if
// d < -delta, Flat otherwise. Core counts must be ascending.
SlopeClass lfmr_slope(const std::vector<std::pair<uint32_t, double>>& series,
                      double slope_delta = 0.15);

struct ClassificationResult {
    BottleneckClass cls = BottleneckClass::Unclassified;
    std::string diagnostic;                 // set when Unclassified
    std::vector<std::string> warnings;      // advisory, never a class change
    // inputs the decision was made from
    double temporal = 0.0;
    double ai = 0.0;
    double mpki = 0.0;
    double lfmr_ref = 0.0;
    SlopeClass slope = SlopeClass::Flat;
    std::vector<std::pair<uint32_t, double>> lfmr_series;
};

// Decision over a Host-preset sweep. Reference metrics (AI, MPKI, LFMR) are
// taken at the smallest core count in the sweep.
ClassificationResult classify(const std::vector<ScalabilityPoint>& host_sweep,
                              const LocalityProfile& locality,
                              const Thresholds& thr = Thresholds{});

std::string classification_to_json(const ClassificationResult& r,
                                   uint16_t func_id = 0);

}  // namespace dmv
