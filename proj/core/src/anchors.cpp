#include "readlab/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"

namespace readlab {

using nlohmann::json;

WordEmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open embedding file '" + path + "'");
    WordEmbeddingTable table;
    std::string line;
    size_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        std::vector<double> values;
        double v;
        while (fields >> v) values.push_back(v);
        if (first) {
            first = false;
            // word2vec-style header: `count dim`
            if (values.size() == 1) {
                char* end = nullptr;
                std::strtol(word.c_str(), &end, 10);
                if (end && *end == '\0') continue;
            }
        }
        if (values.empty())
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": no vector values");
        if (table.dim == 0) table.dim = static_cast<int>(values.size());
        if (static_cast<int>(values.size()) != table.dim)
            raise(errc::dimension_mismatch, path + ":" + std::to_string(line_no) +
                                                ": expected dim " + std::to_string(table.dim));
        Eigen::VectorXd vec(table.dim);
        for (int i = 0; i < table.dim; ++i) vec[i] = values[static_cast<size_t>(i)];
        if (!vec.allFinite())
            raise(errc::parse_error, path + ":" + std::to_string(line_no) + ": non-finite value");
        table.vectors[word] = std::move(vec);
    }
    return table;
}

int AnchorSet::total_clusters() const {
    int total = 0;
    for (const auto& [level, clusters] : clusters_by_level)
        total += static_cast<int>(clusters.size());
    return total;
}

std::vector<std::pair<int, const std::vector<std::string>*>> AnchorSet::flattened() const {
    std::vector<std::pair<int, const std::vector<std::string>*>> out;
    for (const auto& [level, clusters] : clusters_by_level)
        for (const auto& cluster : clusters) out.emplace_back(level, &cluster);
    return out;
}

std::vector<std::string> AnchorSet::all_words() const {
    std::vector<std::string> words;
    for (const auto& [level, clusters] : clusters_by_level)
        for (const auto& cluster : clusters)
            words.insert(words.end(), cluster.begin(), cluster.end());
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

void AnchorSet::save(const std::string& path) const {
    json out = json::object();
    for (const auto& [level, clusters] : clusters_by_level)
        out[std::to_string(level)] = clusters;
    std::ofstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot write anchor file '" + path + "'");
    file << out.dump(2) << "\n";
}

AnchorSet AnchorSet::load(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot open anchor file '" + path + "'");
    json in;
    try {
        file >> in;
    } catch (const json::exception& e) {
        raise(errc::parse_error, path + ": " + e.what());
    }
    AnchorSet set;
    for (auto it = in.begin(); it != in.end(); ++it) {
        int level = std::stoi(it.key());
        set.clusters_by_level[level] =
            it.value().get<std::vector<std::vector<std::string>>>();
    }
    return set;
}

std::map<int, std::vector<std::string>> select_level_words(const GradedLexicon& lexicon,
                                                           const Corpus& corpus, int min_freq) {
    std::map<std::string, long> tf = term_frequencies(corpus);
    std::map<int, std::vector<std::string>> selected;
    for (const auto& [level, words] : lexicon.levels) {
        std::vector<std::string>& out = selected[level];
        for (const std::string& word : words) {
            auto it = tf.find(word);
            if (it != tf.end() && it->second >= min_freq) out.push_back(word);
        }
    }
    return selected;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed, int max_iter,
                    double tol) {
    const int n = static_cast<int>(points.rows());
    const int dim = static_cast<int>(points.cols());
    if (k < 1 || k > n) raise(errc::invalid_argument, "kmeans needs 1 <= k <= n");

    Rng rng(seed);
    Eigen::MatrixXd centroids(k, dim);

    // k-means++ seeding
    std::vector<double> dist_sq(static_cast<size_t>(n),
                                std::numeric_limits<double>::infinity());
    int first = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    centroids.row(0) = points.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            dist_sq[static_cast<size_t>(i)] = std::min(dist_sq[static_cast<size_t>(i)], d);
            total += dist_sq[static_cast<size_t>(i)];
        }
        int chosen = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            double running = 0.0;
            for (int i = 0; i < n; ++i) {
                running += dist_sq[static_cast<size_t>(i)];
                if (running >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        }
        centroids.row(c) = points.row(chosen);
    }

    KMeansResult result;
    result.assignment.assign(static_cast<size_t>(n), 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        result.iterations = iter + 1;
        // assign
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                double d = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            result.assignment[static_cast<size_t>(i)] = best;
        }
        // update
        Eigen::MatrixXd fresh = Eigen::MatrixXd::Zero(k, dim);
        std::vector<int> sizes(static_cast<size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            fresh.row(result.assignment[static_cast<size_t>(i)]) += points.row(i);
            ++sizes[static_cast<size_t>(result.assignment[static_cast<size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<size_t>(c)] > 0) {
                fresh.row(c) /= static_cast<double>(sizes[static_cast<size_t>(c)]);
            } else {
                // re-seed an empty cluster at the point farthest from its centroid
                int farthest = 0;
                double best_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    double d = (points.row(i) -
                                centroids.row(result.assignment[static_cast<size_t>(i)]))
                                   .squaredNorm();
                    if (d > best_d) {
                        best_d = d;
                        farthest = i;
                    }
                }
                fresh.row(c) = points.row(farthest);
            }
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c)
            shift = std::max(shift, (fresh.row(c) - centroids.row(c)).norm());
        centroids = fresh;
        if (shift < tol) break;
    }
    // final assignment against the converged centroids
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            double d = (points.row(i) - centroids.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        result.assignment[static_cast<size_t>(i)] = best;
    }
    result.centroids = std::move(centroids);
    return result;
}

std::vector<std::vector<std::string>> cluster_words(const std::vector<std::string>& words,
                                                    const WordEmbeddingTable& embeddings, int k,
                                                    uint64_t seed, int* dropped_no_embedding) {
    std::vector<std::string> embedded;
    for (const std::string& word : words)
        if (embeddings.contains(word)) embedded.push_back(word);
    std::sort(embedded.begin(), embedded.end());
    if (dropped_no_embedding)
        *dropped_no_embedding = static_cast<int>(words.size() - embedded.size());
    if (embedded.size() < 2)
        raise(errc::too_few_words,
              "need at least 2 embedded words, have " + std::to_string(embedded.size()));
    if (k > static_cast<int>(embedded.size()))
        raise(errc::invalid_argument, "k exceeds the number of embedded words");

    Eigen::MatrixXd points(static_cast<int>(embedded.size()), embeddings.dim);
    for (size_t i = 0; i < embedded.size(); ++i) {
        Eigen::VectorXd v = embeddings.vectors.at(embedded[i]);
        double norm = v.norm();
        if (norm > 0) v /= norm;
        points.row(static_cast<int>(i)) = v.transpose();
    }

    KMeansResult result = kmeans(points, k, seed);
    std::vector<std::vector<std::string>> clusters(static_cast<size_t>(k));
    for (size_t i = 0; i < embedded.size(); ++i)
        clusters[static_cast<size_t>(result.assignment[i])].push_back(embedded[i]);

    std::vector<std::vector<std::string>> kept;
    for (auto& cluster : clusters)
        if (cluster.size() >= 2) kept.push_back(std::move(cluster));
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return kept;
}

AnchorSet build_anchor_set(const GradedLexicon& lexicon, const Corpus& corpus,
                           const WordEmbeddingTable& embeddings,
                           const std::map<int, int>& k_per_level, uint64_t seed, int min_freq) {
    AnchorSet set;
    auto selected = select_level_words(lexicon, corpus, min_freq);
    for (const auto& [level, words] : selected) {
        std::vector<std::string> embedded;
        for (const std::string& word : words)
            if (embeddings.contains(word)) embedded.push_back(word);
        if (embedded.size() < 2) continue;  // level contributes no anchors

        int k;
        auto it = k_per_level.find(level);
        if (it != k_per_level.end()) {
            k = std::min(it->second, static_cast<int>(embedded.size()));
        } else {
            k = static_cast<int>(
                std::lround(std::sqrt(static_cast<double>(embedded.size()))));
        }
        k = std::clamp(k, 1, static_cast<int>(embedded.size()));

        auto clusters =
            cluster_words(words, embeddings, k, seed + static_cast<uint64_t>(level));
        if (!clusters.empty()) set.clusters_by_level[level] = std::move(clusters);
    }
    return set;
}

}  // namespace readlab
