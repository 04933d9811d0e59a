#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "readlab/corpus.hpp"

namespace readlab {

struct WordEmbeddingTable {
    int dim = 0;
    std::unordered_map<std::string, Eigen::VectorXd> vectors;

    bool contains(const std::string& word) const { return vectors.count(word) > 0; }
};

// Text format: optional `count dim` header, then `word v1 v2 ... vd` lines.
WordEmbeddingTable load_embeddings(const std::string& path);

// Per-level anchor clusters. Every cluster has >= 2 words; words inside one
// level's clusters are disjoint.
struct AnchorSet {
    std::map<int, std::vector<std::vector<std::string>>> clusters_by_level;

    int total_clusters() const;
    bool empty() const { return total_clusters() == 0; }
    // Clusters flattened in ascending level order; pairs (level, cluster).
    std::vector<std::pair<int, const std::vector<std::string>*>> flattened() const;
    // Every word appearing in any cluster.
    std::vector<std::string> all_words() const;

    void save(const std::string& path) const;
    static AnchorSet load(const std::string& path);
};

// W_i = L_i intersected with the corpus vocabulary, filtered to corpus
// frequency >= min_freq. Returned word lists are sorted.
std::map<int, std::vector<std::string>> select_level_words(const GradedLexicon& lexicon,
                                                           const Corpus& corpus,
                                                           int min_freq = 5);

struct KMeansResult {
    std::vector<int> assignment;  // point index -> cluster
    Eigen::MatrixXd centroids;    // k x dim
    int iterations = 0;
};

// Lloyd iterations with k-means++ seeding; stops when every centroid moves
// less than tol (Euclidean) or after max_iter rounds.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, uint64_t seed, int max_iter = 100,
                    double tol = 1e-4);

// Clusters one level's words on unit-normalized embeddings and drops
// single-word clusters. Words without embeddings are dropped first;
// dropped_no_embedding (optional) receives how many.
std::vector<std::vector<std::string>> cluster_words(const std::vector<std::string>& words,
                                                    const WordEmbeddingTable& embeddings, int k,
                                                    uint64_t seed,
                                                    int* dropped_no_embedding = nullptr);

// Runs select + cluster per level. k_per_level overrides the default
// k = round(sqrt(|W_i|)); levels that end up with fewer than two embedded
// words contribute no anchors.
AnchorSet build_anchor_set(const GradedLexicon& lexicon, const Corpus& corpus,
                           const WordEmbeddingTable& embeddings,
                           const std::map<int, int>& k_per_level, uint64_t seed,
                           int min_freq = 5);

}  // namespace readlab
