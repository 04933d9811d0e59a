#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "readlab/corpus.hpp"

namespace readlab {

// One row per segment, m >= 1, columns = encoder dimension d.
using SegmentMatrix = Eigen::MatrixXd;

// f_eta = lambda * columnwise max + (1 - lambda) * columnwise mean.
Eigen::VectorXd mixed_pool(const SegmentMatrix& segments, double lambda);

// Backward companion: routes the max part to the argmax row per column
// (ties to the lowest row) and spreads the mean part uniformly.
Eigen::MatrixXd mixed_pool_backward(const SegmentMatrix& segments, double lambda,
                                    const Eigen::VectorXd& upstream);

class SegmentEncoder {
public:
    virtual ~SegmentEncoder() = default;
    virtual int dim() const = 0;
    // Rows in segment order for doc.segments; deterministic in eval mode.
    virtual SegmentMatrix encode(const Document& doc) const = 0;
};

// (doc id, segment index) -> vector. Two file formats: a TSV with a `dim d`
// header and `id<TAB>seg<TAB>f f f...` lines, or JSONL {"id","seg","vec"}.
class EmbeddingStore {
public:
    static EmbeddingStore load(const std::string& path);

    int dim() const { return dim_; }
    void put(const std::string& id, int seg, Eigen::VectorXd vec);
    const Eigen::VectorXd& get(const std::string& id, int seg) const;
    bool contains(const std::string& id, int seg) const;
    void save_tsv(const std::string& path) const;

private:
    int dim_ = 0;
    std::map<std::pair<std::string, int>, Eigen::VectorXd> vectors_;
};

class PrecomputedEncoder : public SegmentEncoder {
public:
    explicit PrecomputedEncoder(std::shared_ptr<const EmbeddingStore> store)
        : store_(std::move(store)) {}

    int dim() const override;
    SegmentMatrix encode(const Document& doc) const override;

private:
    std::shared_ptr<const EmbeddingStore> store_;
};

// Trainable desk-scale encoder: per segment, the mean of token embeddings is
// passed through one affine map and tanh.
class BuiltinEncoder : public SegmentEncoder {
public:
    struct Gradients {
        Eigen::MatrixXd embeddings;
        Eigen::MatrixXd projection;
        Eigen::VectorXd bias;
        void setZero(const BuiltinEncoder& enc);
        void accumulate(const Gradients& other);
        void scale(double factor);
    };

    struct Cache {
        std::vector<std::vector<int>> segment_token_ids;
        Eigen::MatrixXd mean_embeddings;  // m x embed_dim
        Eigen::MatrixXd pre_activation;   // m x out_dim
    };

    // Vocabulary from the corpus tokens (sorted); id 0 is the unknown token.
    BuiltinEncoder(const Corpus& corpus, int embed_dim, int out_dim, uint64_t seed);

    int dim() const override { return static_cast<int>(projection_.cols()); }
    int embed_dim() const { return static_cast<int>(projection_.rows()); }
    int vocab_size() const { return static_cast<int>(embeddings_.rows()); }

    SegmentMatrix encode(const Document& doc) const override;
    SegmentMatrix forward(const Document& doc, Cache* cache) const;
    void backward(const Cache& cache, const Eigen::MatrixXd& upstream_rows,
                  Gradients& grads) const;

    Eigen::MatrixXd& embeddings() { return embeddings_; }
    Eigen::MatrixXd& projection() { return projection_; }
    Eigen::VectorXd& bias() { return bias_; }
    const Eigen::MatrixXd& embeddings() const { return embeddings_; }
    const Eigen::MatrixXd& projection() const { return projection_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    const std::vector<std::string>& vocab() const { return vocab_; }

    int token_id(const std::string& surface) const;

private:
    std::vector<std::string> vocab_;  // vocab_[0] = "<unk>"
    std::unordered_map<std::string, int> index_;
    Eigen::MatrixXd embeddings_;  // vocab x embed_dim
    Eigen::MatrixXd projection_;  // embed_dim x out_dim
    Eigen::VectorXd bias_;        // out_dim
};

}  // namespace readlab
