#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "readlab/anchors.hpp"
#include "readlab/corpus.hpp"
#include "readlab/lingfeats.hpp"

namespace readlab {

// Binary presence matrix over a filtered vocabulary, stored as sorted word
// indices per document.
struct BowMatrix {
    std::vector<std::string> vocab;        // sorted, unique
    std::vector<std::vector<int>> docs;    // per doc: sorted indices of present words

    int vocab_size() const { return static_cast<int>(vocab.size()); }
    size_t doc_count() const { return docs.size(); }
    int index_of(const std::string& word) const;  // -1 when absent
    // Maps a tokenized document onto this vocabulary (unknown words dropped).
    std::vector<int> row_for(const Document& doc) const;
};

struct VocabConfig {
    int min_df = 1;
    double max_df_ratio = 1.0;
    std::set<std::string> stopwords;
};

// Document-frequency filtered vocabulary; anchor words are exempt from every
// filter so anchoring survives aggressive pruning.
BowMatrix build_bow(const Corpus& corpus, const VocabConfig& config,
                    const AnchorSet* anchors = nullptr);

// I(X1:X2) = H(X1) + H(X2) - H(X1,X2) in nats over an empirical joint
// distribution (rows = X1 outcomes, cols = X2 outcomes). 0*log0 := 0.
double mutual_information(const Eigen::MatrixXd& joint);

struct AtmOptions {
    int topics = 2;                  // u
    double anchor_strength = 1.0;    // xi >= 1
    uint64_t seed = 0;
    int max_iter = 200;
    double tol = 1e-6;
    // alpha competition: per word the best topic keeps weight 1 and topic j
    // decays as exp(sharpness * tc_j * (mi_j - best)); scaling by the topic's
    // own TC keeps competition weak until it becomes informative
    double competition_sharpness = 10.0;
    double alpha_blend = 0.5;
    // consecutive below-tol iterations required before stopping
    int patience = 3;
    // topics whose marginal saturates outside [floor, 1-floor] are dead and
    // get their soft assignments re-rolled
    double saturation_floor = 0.02;
    // called after every committed iteration (test hook)
    std::function<void(int iteration, const class AnchoredTopicModel&)> observer;
};

// Trained anchored CorEx state. Evidence is carried by present words only, so
// a document without known words scores the topic priors.
class AnchoredTopicModel {
public:
    int topics() const { return static_cast<int>(log_marginal_on_.size()); }
    int vocab_size() const { return static_cast<int>(vocab_.size()); }
    const std::vector<std::string>& vocab() const { return vocab_; }

    // mutual-information weight of word i in topic j (anchored pairs hold xi)
    double alpha(int topic, int word) const { return alpha_(topic, word); }
    double topic_marginal(int topic) const;                    // p(y_j = 1)
    double conditional(int topic, int word, bool active) const;  // p(x_i = 1 | y_j)
    double anchor_strength() const { return anchor_strength_; }
    const std::vector<std::pair<int, int>>& anchor_pairs() const { return anchor_pairs_; }
    const std::vector<double>& tc_history() const { return tc_history_; }
    double total_correlation() const {
        return tc_history_.empty() ? 0.0 : tc_history_.back();
    }

    // p(y_j = 1 | x) for a row over this model's vocabulary.
    Eigen::VectorXd posterior(const std::vector<int>& doc_row) const;

    void save(const std::string& path) const;
    static AnchoredTopicModel load(const std::string& path);

private:
    friend AnchoredTopicModel train_atm(const BowMatrix&, const AnchorSet&, const AtmOptions&);

    std::vector<std::string> vocab_;
    Eigen::MatrixXd alpha_;          // topics x vocab
    Eigen::VectorXd log_marginal_on_;   // log p(y=1)
    Eigen::VectorXd log_marginal_off_;  // log p(y=0)
    Eigen::MatrixXd log_cond_on_;    // log p(x=1 | y=1), topics x vocab
    Eigen::MatrixXd log_cond_off_;   // log p(x=1 | y=0)
    Eigen::VectorXd log_px_;         // empirical log p(x=1)
    std::vector<std::pair<int, int>> anchor_pairs_;  // (topic, word)
    double anchor_strength_ = 1.0;
    std::vector<double> tc_history_;
};

// Iterative CorEx training: posterior inference from weighted word evidence,
// table re-estimation from soft assignments, and MI-driven alpha competition
// with anchored pairs clamped at anchor_strength. An iteration only commits
// when the recorded TC bound does not decrease, so tc_history is
// non-decreasing by construction.
AnchoredTopicModel train_atm(const BowMatrix& bow, const AnchorSet& anchors,
                             const AtmOptions& options);

// f_beta for one document row.
Eigen::VectorXd topic_features(const AnchoredTopicModel& model,
                               const std::vector<int>& doc_row);

// f_gamma = f_alpha || f_beta with the schema extended by one topic block.
FeatureVector combine_features(const FeatureVector& f_alpha, const Eigen::VectorXd& f_beta);

}  // namespace readlab
