#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dmv {

struct FeatureVector {
    std::string name;
    std::vector<double> features;
};

// Per-dimension z-score over the population; zero-variance dimensions map
// to all zeros.
std::vector<FeatureVector> standardize(const std::vector<FeatureVector>& vectors);

struct KmeansResult {
    std::vector<uint32_t> assignments;          // per input vector
    std::vector<std::vector<double>> centroids;  // k centroids
    double inertia = 0.0;
    uint32_t iterations = 0;
};

// Lloyd's algorithm from k-means++ seeding; deterministic per seed. Empty
// clusters are re-seeded from the point farthest from its centroid.
KmeansResult kmeans(const std::vector<FeatureVector>& vectors, uint32_t k,
                    uint64_t seed, uint32_t max_iter = 100, double tol = 1e-9);

enum class Linkage : uint8_t { Single, Complete, Average };

std::string to_string(Linkage l);
Linkage parse_linkage(const std::string& s);

struct Dendrogram {
    struct Merge {
        uint32_t a = 0;  // node ids: leaves 0..n-1, merge i creates node n+i
        uint32_t b = 0;
        double distance = 0.0;
    };
    std::vector<Merge> merges;       // n-1 entries
    std::vector<std::string> labels;  // leaf labels
};

// Agglomerative clustering under Euclidean distance. Ties break on the
// lexicographically smallest leaf label of the candidate clusters, so the
// result is independent of input order.
Dendrogram hierarchical(const std::vector<FeatureVector>& vectors,
                        Linkage linkage = Linkage::Average);

std::string dendrogram_to_newick(const Dendrogram& d);
std::string dendrogram_to_json(const Dendrogram& d);
std::string kmeans_to_json(const KmeansResult& r,
                           const std::vector<FeatureVector>& vectors);

}  // namespace dmv
