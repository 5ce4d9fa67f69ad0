#include "dmv/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dmv/trace.hpp"  // DmvError
#include "json.hpp"

namespace dmv {

namespace {

void require_uniform(const std::vector<FeatureVector>& vectors, size_t min_count) {
    if (vectors.size() < min_count)
        throw DmvError("TooFewVectors", "need at least " + std::to_string(min_count) +
                									" vectors");
    for (const auto& v : vectors)
        if (v.features.size() != vectors.front().features.size())
            throw DmvError("BadArgument", "vectors differ in dimensionality");
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

uint64_t rand_below(std::mt19937_64& eng, uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = eng();
        if (r >= threshold) return r % n;
    }
}

}  // namespace

std::vector<FeatureVector> standardize(const std::vector<FeatureVector>& vectors) {
    require_uniform(vectors, 2);
    const size_t n = vectors.size(), dims = vectors.front().features.size();
    std::vector<double> mean(dims, 0.0), sd(dims, 0.0);
    for (const auto& v : vectors)
        for (size_t d = 0; d < dims; ++d) mean[d] += v.features[d];
    for (auto& m : mean) m /= double(n);
    for (const auto& v : vectors)
        for (size_t d = 0; d < dims; ++d) {
            double x = v.features[d] - mean[d];
            sd[d] += x * x;
        }
    for (auto& s : sd) s = std::sqrt(s / double(n));  // population sd
    std::vector<FeatureVector> out = vectors;
    for (auto& v : out)
        for (size_t d = 0; d < dims; ++d)
            v.features[d] = sd[d] > 0.0 ? (v.features[d] - mean[d]) / sd[d] : 0.0;
    return out;
}

KmeansResult kmeans(const std::vector<FeatureVector>& vectors, uint32_t k,
                    uint64_t seed, uint32_t max_iter, double tol) {
    require_uniform(vectors, 1);
    const size_t n = vectors.size();
    if (k == 0 || k > n) throw DmvError("KTooLarge", "need 1 <= k <= n");

    std::mt19937_64 eng(seed);
    KmeansResult r;
    r.centroids.reserve(k);

    // k-means++ seeding
    r.centroids.push_back(vectors[rand_below(eng, n)].features);
    std::vector<double> d2(n);
    while (r.centroids.size() < k) {
        double total = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : r.centroids)
                best = std::min(best, sq_dist(vectors[i].features, c));
            d2[i] = best;
            total += best;
        }
        size_t pick = 0;
        if (total > 0.0) {
            // deterministic quantile draw over the d^2 weights
            double target = (double(eng() >> 11) / 9007199254740992.0) * total;
            double acc = 0.0;
            for (size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rand_below(eng, n);
        }
        r.centroids.push_back(vectors[pick].features);
    }

    r.assignments.assign(n, 0);
    for (uint32_t it = 0; it < max_iter; ++it) {
        r.iterations = it + 1;
        for (size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            uint32_t arg = 0;
            for (uint32_t c = 0; c < k; ++c) {
                double d = sq_dist(vectors[i].features, r.centroids[c]);
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            r.assignments[i] = arg;
        }
        std::vector<std::vector<double>> next(k, std::vector<double>(
                                                     vectors.front().features.size(), 0.0));
        std::vector<uint64_t> count(k, 0);
        for (size_t i = 0; i < n; ++i) {
            auto& c = next[r.assignments[i]];
            for (size_t d = 0; d < c.size(); ++d) c[d] += vectors[i].features[d];
            ++count[r.assignments[i]];
        }
        for (uint32_t c = 0; c < k; ++c) {
            if (count[c] == 0) {
                // re-seed an empty cluster from the farthest point
                size_t far = 0;
                double best = -1.0;
                for (size_t i = 0; i < n; ++i) {
                    double d = sq_dist(vectors[i].features,
                                       r.centroids[r.assignments[i]]);
                    if (d > best) {
                        best = d;
                        far = i;
                    }
                }
                next[c] = vectors[far].features;
                count[c] = 1;
            } else {
                for (auto& x : next[c]) x /= double(count[c]);
            }
        }
        double shift = 0.0;
        for (uint32_t c = 0; c < k; ++c) shift += sq_dist(next[c], r.centroids[c]);
        r.centroids = std::move(next);
        if (shift < tol * tol) break;
    }

    r.inertia = 0.0;
    for (size_t i = 0; i < n; ++i)
        r.inertia += sq_dist(vectors[i].features, r.centroids[r.assignments[i]]);
    return r;
}

std::string to_string(Linkage l) {
    switch (l) {
        case Linkage::Single: return "single";
        case Linkage::Complete: return "complete";
        case Linkage::Average: return "average";
    }
    return "?";
}

Linkage parse_linkage(const std::string& s) {
    if (s == "single") return Linkage::Single;
    if (s == "complete") return Linkage::Complete;
    if (s == "average") return Linkage::Average;
    throw DmvError("BadArgument", "unknown linkage: " + s);
}

Dendrogram hierarchical(const std::vector<FeatureVector>& vectors, Linkage linkage) {
    require_uniform(vectors, 2);
    const size_t n = vectors.size();

    struct Cluster {
        uint32_t node;          // dendrogram node id
        std::vector<size_t> pts;  // leaf indices
        std::string rep;        // lexicographically smallest leaf label
    };
    std::vector<Cluster> act;
    Dendrogram dg;
    for (size_t i = 0; i < n; ++i) {
        dg.labels.push_back(vectors[i].name);
        act.push_back({uint32_t(i), {i}, vectors[i].name});
    }
    // pairwise leaf distances
    std::vector<double> dist(n * n, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double d = std::sqrt(sq_dist(vectors[i].features, vectors[j].features));
            dist[i * n + j] = dist[j * n + i] = d;
        }
    auto linkage_dist = [&](const Cluster& a, const Cluster& b) {
        double best = linkage == Linkage::Single
                          ? std::numeric_limits<double>::max()
                          : 0.0;
        double sum = 0.0;
        for (size_t i : a.pts)
            for (size_t j : b.pts) {
                double d = dist[i * n + j];
                if (linkage == Linkage::Single)
                    best = std::min(best, d);
                else if (linkage == Linkage::Complete)
                    best = std::max(best, d);
                else
                    sum += d;
            }
        if (linkage == Linkage::Average)
            return sum / (double(a.pts.size()) * double(b.pts.size()));
        return best;
    };

    uint32_t next_node = uint32_t(n);
    while (act.size() > 1) {
        size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::max();
        for (size_t i = 0; i < act.size(); ++i)
            for (size_t j = i + 1; j < act.size(); ++j) {
                double d = linkage_dist(act[i], act[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                } else if (d == best) {
                    // label-based tie-break keeps output order-independent
                    auto cand = std::minmax(act[i].rep, act[j].rep);
                    auto cur = std::minmax(act[bi].rep, act[bj].rep);
                    if (cand < cur) {
                        bi = i;
                        bj = j;
                    }
                }
            }
        Cluster merged;
        merged.node = next_node++;
        merged.pts = act[bi].pts;
        merged.pts.insert(merged.pts.end(), act[bj].pts.begin(), act[bj].pts.end());
        merged.rep = std::min(act[bi].rep, act[bj].rep);
        dg.merges.push_back({act[bi].node, act[bj].node, best});
        act.erase(act.begin() + bj);
        act.erase(act.begin() + bi);
        act.push_back(std::move(merged));
    }
    return dg;
}

std::string dendrogram_to_newick(const Dendrogram& d) {
    const size_t n = d.labels.size();
    // node id -> (subtree text, height)
    std::vector<std::pair<std::string, double>> nodes(n + d.merges.size());
    for (size_t i = 0; i < n; ++i) nodes[i] = {d.labels[i], 0.0};
    for (size_t m = 0; m < d.merges.size(); ++m) {
        const auto& mg = d.merges[m];
        const auto& [ta, ha] = nodes[mg.a];
        const auto& [tb, hb] = nodes[mg.b];
        char buf[64];
        std::string s = "(" + ta;
        std::snprintf(buf, sizeof(buf), ":%.9g", mg.distance - ha);
        s += buf;
        s += "," + tb;
        std::snprintf(buf, sizeof(buf), ":%.9g", mg.distance - hb);
        s += buf;
        s += ")";
        nodes[n + m] = {std::move(s), mg.distance};
    }
    return nodes.back().first + ";";
}

std::string dendrogram_to_json(const Dendrogram& d) {
    nlohmann::ordered_json j;
    j["labels"] = d.labels;
    auto& merges = j["merges"] = nlohmann::ordered_json::array();
    for (const auto& m : d.merges) merges.push_back({m.a, m.b, m.distance});
    return j.dump(2);
}

std::string kmeans_to_json(const KmeansResult& r,
                           const std::vector<FeatureVector>& vectors) {
    nlohmann::ordered_json j;
    auto& asg = j["assignments"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < vectors.size(); ++i)
        asg.push_back({{"name", vectors[i].name}, {"cluster", r.assignments[i]}});
    j["centroids"] = r.centroids;
    j["inertia"] = r.inertia;
    j["iterations"] = r.iterations;
    return j.dump(2);
}

}  // namespace dmv
