#include "readlab/topics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"

namespace readlab {

using nlohmann::json;

namespace {

constexpr double kProbFloor = 1e-6;
constexpr int kModelFormatVersion = 1;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

double log_sum_exp(double a, double b) {
    double hi = std::max(a, b);
    return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// MI of a soft binary joint given the four cell masses (already >= 0).
double binary_mi(double n11, double n10, double n01, double n00) {
    double total = n11 + n10 + n01 + n00;
    if (total <= 0.0) return 0.0;
    double p11 = n11 / total, p10 = n10 / total, p01 = n01 / total, p00 = n00 / total;
    double px1 = p11 + p01, px0 = p10 + p00;
    double py1 = p11 + p10, py0 = p01 + p00;
    double h_x = -(xlogx(px1) + xlogx(px0));
    double h_y = -(xlogx(py1) + xlogx(py0));
    double h_xy = -(xlogx(p11) + xlogx(p10) + xlogx(p01) + xlogx(p00));
    return std::max(0.0, h_x + h_y - h_xy);
}

}  // namespace

int BowMatrix::index_of(const std::string& word) const {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), word);
    if (it != vocab.end() && *it == word) return static_cast<int>(it - vocab.begin());
    return -1;
}

std::vector<int> BowMatrix::row_for(const Document& doc) const {
    std::vector<int> row;
    for (const Token& tok : doc.tokens) {
        int idx = index_of(tok.surface);
        if (idx >= 0) row.push_back(idx);
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    return row;
}

BowMatrix build_bow(const Corpus& corpus, const VocabConfig& config, const AnchorSet* anchors) {
    std::unordered_set<std::string> anchored;
    if (anchors)
        for (const std::string& word : anchors->all_words()) anchored.insert(word);

    std::map<std::string, int> df = document_frequencies(corpus);
    double n_docs = static_cast<double>(corpus.documents.size());

    BowMatrix bow;
    for (const auto& [word, count] : df) {
        bool keep = count >= config.min_df &&
                    static_cast<double>(count) <= config.max_df_ratio * n_docs &&
                    config.stopwords.count(word) == 0;
        if (keep || anchored.count(word)) bow.vocab.push_back(word);
    }
    if (bow.vocab.empty()) raise(errc::empty_vocabulary, "no word survived the vocabulary filters");

    bow.docs.reserve(corpus.documents.size());
    for (const Document& doc : corpus.documents) bow.docs.push_back(bow.row_for(doc));
    return bow;
}

double mutual_information(const Eigen::MatrixXd& joint) {
    if (joint.rows() < 1 || joint.cols() < 1 || joint.minCoeff() < 0.0)
        raise(errc::invalid_argument, "joint distribution must be non-negative");
    double total = joint.sum();
    if (std::abs(total - 1.0) > 1e-6)
        raise(errc::invalid_argument, "joint distribution must be normalized");

    Eigen::VectorXd row = joint.rowwise().sum() / total;
    Eigen::VectorXd col = joint.colwise().sum().transpose() / total;
    double h_row = 0.0, h_col = 0.0, h_joint = 0.0;
    for (int i = 0; i < row.size(); ++i) h_row -= xlogx(row[i]);
    for (int j = 0; j < col.size(); ++j) h_col -= xlogx(col[j]);
    for (int i = 0; i < joint.rows(); ++i)
        for (int j = 0; j < joint.cols(); ++j) h_joint -= xlogx(joint(i, j) / total);
    return std::max(0.0, h_row + h_col - h_joint);
}

double AnchoredTopicModel::topic_marginal(int topic) const {
    return std::exp(log_marginal_on_[topic]);
}

double AnchoredTopicModel::conditional(int topic, int word, bool active) const {
    return std::exp(active ? log_cond_on_(topic, word) : log_cond_off_(topic, word));
}

Eigen::VectorXd AnchoredTopicModel::posterior(const std::vector<int>& doc_row) const {
    const int u = topics();
    Eigen::VectorXd result(u);
    for (int j = 0; j < u; ++j) {
        double s_on = log_marginal_on_[j];
        double s_off = log_marginal_off_[j];
        for (int i : doc_row) {
            double weight = alpha_(j, i);
            s_on += weight * (log_cond_on_(j, i) - log_px_[i]);
            s_off += weight * (log_cond_off_(j, i) - log_px_[i]);
        }
        double log_z = log_sum_exp(s_on, s_off);
        result[j] = std::exp(s_on - log_z);
    }
    return result;
}

namespace {

// One full posterior pass; fills q (topics x docs) and the per-topic TC
// bound (mean log normalizer); returns the total over topics.
double e_pass(const BowMatrix& bow, const Eigen::MatrixXd& alpha,
              const Eigen::VectorXd& log_py1, const Eigen::VectorXd& log_py0,
              const Eigen::MatrixXd& log_on, const Eigen::MatrixXd& log_off,
              const Eigen::VectorXd& log_px, Eigen::MatrixXd& q,
              Eigen::VectorXd& tc_per_topic) {
    const int u = static_cast<int>(alpha.rows());
    const size_t n = bow.doc_count();
    tc_per_topic = Eigen::VectorXd::Zero(u);
    for (size_t l = 0; l < n; ++l) {
        const std::vector<int>& row = bow.docs[l];
        for (int j = 0; j < u; ++j) {
            double s_on = log_py1[j];
            double s_off = log_py0[j];
            for (int i : row) {
                double weight = alpha(j, i);
                s_on += weight * (log_on(j, i) - log_px[i]);
                s_off += weight * (log_off(j, i) - log_px[i]);
            }
            double log_z = log_sum_exp(s_on, s_off);
            q(j, static_cast<int>(l)) = std::exp(s_on - log_z);
            tc_per_topic[j] += log_z;
        }
    }
    tc_per_topic /= static_cast<double>(n);
    return tc_per_topic.sum();
}

struct Tables {
    Eigen::VectorXd log_py1, log_py0;
    Eigen::MatrixXd log_on, log_off;
    // soft joint counts retained for the MI step
    Eigen::MatrixXd count_on, count_off;
    Eigen::VectorXd q_sum;  // per topic
};

// Re-estimates marginals and conditionals from soft assignments.
Tables m_pass(const BowMatrix& bow, const Eigen::MatrixXd& q) {
    const int u = static_cast<int>(q.rows());
    const int v = bow.vocab_size();
    const double n = static_cast<double>(bow.doc_count());

    Tables t;
    t.q_sum = q.rowwise().sum();
    t.count_on = Eigen::MatrixXd::Zero(u, v);
    t.count_off = Eigen::MatrixXd::Zero(u, v);
    for (size_t l = 0; l < bow.doc_count(); ++l) {
        for (int i : bow.docs[l]) {
            for (int j = 0; j < u; ++j) {
                double ql = q(j, static_cast<int>(l));
                t.count_on(j, i) += ql;
                t.count_off(j, i) += 1.0 - ql;
            }
        }
    }
    t.log_py1.resize(u);
    t.log_py0.resize(u);
    t.log_on.resize(u, v);
    t.log_off.resize(u, v);
    for (int j = 0; j < u; ++j) {
        double py1 = clamp_prob(t.q_sum[j] / n);
        t.log_py1[j] = std::log(py1);
        t.log_py0[j] = std::log(1.0 - py1);
        double denom_on = t.q_sum[j];
        double denom_off = n - t.q_sum[j];
        for (int i = 0; i < v; ++i) {
            double p_on = denom_on > 0.0 ? t.count_on(j, i) / denom_on : kProbFloor;
            double p_off = denom_off > 0.0 ? t.count_off(j, i) / denom_off : kProbFloor;
            t.log_on(j, i) = std::log(clamp_prob(p_on));
            t.log_off(j, i) = std::log(clamp_prob(p_off));
        }
    }
    return t;
}

// Soft mutual information of every (topic, word) pair from the joint counts.
Eigen::MatrixXd word_topic_mi(const Tables& t, double n_docs) {
    const int u = static_cast<int>(t.count_on.rows());
    const int v = static_cast<int>(t.count_on.cols());
    Eigen::MatrixXd mi(u, v);
    for (int j = 0; j < u; ++j) {
        for (int i = 0; i < v; ++i) {
            double n11 = t.count_on(j, i);
            double n01 = t.count_off(j, i);
            double n10 = std::max(0.0, t.q_sum[j] - n11);
            double n00 = std::max(0.0, n_docs - t.q_sum[j] - n01);
            mi(j, i) = binary_mi(n11, n10, n01, n00);
        }
    }
    return mi;
}

// Annealed MI competition: the shortfall against the word's best topic is
// scaled by that topic's current TC, so competition is weak while topics are
// uninformative and sharpens as structure emerges. Anchored pairs stay at xi.
Eigen::MatrixXd compete_alpha(const Eigen::MatrixXd& alpha, const Eigen::MatrixXd& mi,
                              const Eigen::VectorXd& tc_per_topic, double blend,
                              const AtmOptions& options,
                              const std::vector<std::pair<int, int>>& anchor_pairs) {
    const int u = static_cast<int>(alpha.rows());
    const int v = static_cast<int>(alpha.cols());
    Eigen::MatrixXd next = alpha;
    for (int i = 0; i < v; ++i) {
        double best = mi.col(i).maxCoeff();
        if (best <= 0.0) continue;
        for (int j = 0; j < u; ++j) {
            double anneal = std::clamp(tc_per_topic[j], 0.0, 50.0);
            double target =
                std::exp(options.competition_sharpness * anneal * (mi(j, i) - best));
            next(j, i) = (1.0 - blend) * alpha(j, i) + blend * target;
        }
    }
    for (const auto& [topic, word] : anchor_pairs) next(topic, word) = options.anchor_strength;
    return next;
}

}  // namespace

AnchoredTopicModel train_atm(const BowMatrix& bow, const AnchorSet& anchors,
                             const AtmOptions& options) {
    const int u = options.topics;
    const int v = bow.vocab_size();
    const size_t n = bow.doc_count();
    if (u < 1) raise(errc::invalid_argument, "topic count must be >= 1");
    if (n == 0) raise(errc::empty_corpus, "bow matrix has no documents");
    if (options.anchor_strength < 1.0)
        raise(errc::invalid_argument, "anchor strength must be >= 1");
    if (anchors.total_clusters() > u)
        raise(errc::anchor_overflow, std::to_string(anchors.total_clusters()) +
                                         " anchor clusters exceed " + std::to_string(u) +
                                         " topics");

    AnchoredTopicModel model;
    model.vocab_ = bow.vocab;
    model.anchor_strength_ = options.anchor_strength;

    // one anchor cluster -> one topic, assigned in level order
    int next_topic = 0;
    for (const auto& [level, cluster] : anchors.flattened()) {
        for (const std::string& word : *cluster) {
            int idx = bow.index_of(word);
            if (idx >= 0) model.anchor_pairs_.emplace_back(next_topic, idx);
        }
        ++next_topic;
    }

    // empirical word marginals (clamped; every vocab word has df >= 1)
    Eigen::VectorXd px = Eigen::VectorXd::Zero(v);
    for (const auto& row : bow.docs)
        for (int i : row) px[i] += 1.0;
    model.log_px_.resize(v);
    for (int i = 0; i < v; ++i)
        model.log_px_[i] = std::log(clamp_prob(px[i] / static_cast<double>(n)));

    Rng rng(options.seed);
    model.alpha_.resize(u, v);
    for (int j = 0; j < u; ++j)
        for (int i = 0; i < v; ++i) model.alpha_(j, i) = rng.uniform(0.5, 1.0);
    for (const auto& [topic, word] : model.anchor_pairs_)
        model.alpha_(topic, word) = options.anchor_strength;

    // random soft assignments seed the first table estimate
    Eigen::MatrixXd q(u, static_cast<int>(n));
    for (int j = 0; j < u; ++j)
        for (int l = 0; l < static_cast<int>(n); ++l) q(j, l) = rng.uniform(0.01, 0.99);

    Tables tables = m_pass(bow, q);
    model.log_marginal_on_ = tables.log_py1;
    model.log_marginal_off_ = tables.log_py0;
    model.log_cond_on_ = tables.log_on;
    model.log_cond_off_ = tables.log_off;

    Eigen::VectorXd tc_per_topic;
    double tc = e_pass(bow, model.alpha_, tables.log_py1, tables.log_py0, tables.log_on,
                       tables.log_off, model.log_px_, q, tc_per_topic);
    model.tc_history_.push_back(tc);
    if (options.observer) options.observer(0, model);

    // The raw update dynamics wobble around local optima, so the trainer
    // tracks an incumbent: the best-bound state seen so far. tc_history
    // records the incumbent sequence (each entry is a model the trainer
    // would have returned), which makes it non-decreasing by construction.
    Eigen::MatrixXd best_alpha = model.alpha_;
    Tables best_tables = tables;
    double best_tc = tc;

    double tc_free = tc;
    int calm_iterations = 0;
    std::vector<int> reinits(static_cast<size_t>(u), 0);
    constexpr int kMaxReinits = 8;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        Tables fresh = m_pass(bow, q);
        Eigen::MatrixXd mi = word_topic_mi(fresh, static_cast<double>(n));
        model.alpha_ = compete_alpha(model.alpha_, mi, tc_per_topic, options.alpha_blend,
                                     options, model.anchor_pairs_);
        double previous_free = tc_free;
        tc_free = e_pass(bow, model.alpha_, fresh.log_py1, fresh.log_py0, fresh.log_on,
                         fresh.log_off, model.log_px_, q, tc_per_topic);
        model.log_marginal_on_ = fresh.log_py1;
        model.log_marginal_off_ = fresh.log_py0;
        model.log_cond_on_ = fresh.log_on;
        model.log_cond_off_ = fresh.log_off;

        if (tc_free > best_tc) {
            best_tc = tc_free;
            best_alpha = model.alpha_;
            best_tables = fresh;
            model.tc_history_.push_back(best_tc);
        }
        if (options.observer) options.observer(iter, model);

        // a saturated marginal is an absorbing state with no evidence left;
        // re-roll that topic's assignments and let it search again
        bool rerolled = false;
        for (int j = 0; j < u; ++j) {
            double py1 = std::exp(fresh.log_py1[j]);
            bool dead = py1 < options.saturation_floor || py1 > 1.0 - options.saturation_floor;
            if (dead && reinits[static_cast<size_t>(j)] < kMaxReinits) {
                for (int l = 0; l < static_cast<int>(n); ++l) q(j, l) = rng.uniform(0.01, 0.99);
                for (int i = 0; i < v; ++i) model.alpha_(j, i) = rng.uniform(0.5, 1.0);
                ++reinits[static_cast<size_t>(j)];
                rerolled = true;
            }
        }
        if (rerolled) {
            for (const auto& [topic, word] : model.anchor_pairs_)
                model.alpha_(topic, word) = options.anchor_strength;
            calm_iterations = 0;
            continue;
        }

        calm_iterations =
            std::abs(tc_free - previous_free) < options.tol ? calm_iterations + 1 : 0;
        if (calm_iterations >= options.patience) break;
    }

    model.alpha_ = std::move(best_alpha);
    model.log_marginal_on_ = best_tables.log_py1;
    model.log_marginal_off_ = best_tables.log_py0;
    model.log_cond_on_ = best_tables.log_on;
    model.log_cond_off_ = best_tables.log_off;

    // canonical polarity: the ON state is the one correlated with word
    // presence under the alpha weights (binary latents are otherwise
    // label-symmetric)
    for (int j = 0; j < u; ++j) {
        double score = 0.0;
        for (int i = 0; i < v; ++i)
            score += model.alpha_(j, i) *
                     (std::exp(model.log_cond_on_(j, i)) - std::exp(model.log_cond_off_(j, i)));
        if (score < 0.0) {
            std::swap(model.log_marginal_on_[j], model.log_marginal_off_[j]);
            model.log_cond_on_.row(j).swap(model.log_cond_off_.row(j));
        }
    }
    return model;
}

Eigen::VectorXd topic_features(const AnchoredTopicModel& model, const std::vector<int>& doc_row) {
    for (int i : doc_row)
        if (i < 0 || i >= model.vocab_size())
            raise(errc::vocab_mismatch,
                  "word index " + std::to_string(i) + " outside the model vocabulary");
    return model.posterior(doc_row);
}

FeatureVector combine_features(const FeatureVector& f_alpha, const Eigen::VectorXd& f_beta) {
    for (double v : f_alpha.values)
        if (!std::isfinite(v)) raise(errc::invalid_argument, "f_alpha has non-finite entries");
    if (!f_beta.allFinite()) raise(errc::invalid_argument, "f_beta has non-finite entries");

    FeatureVector combined;
    combined.kind = FeatureKind::combined;
    auto schema = std::make_shared<FeatureSchema>();
    if (f_alpha.schema) {
        schema->entries = f_alpha.schema->entries;
    } else {
        schema->entries.push_back({"f_alpha", f_alpha.dim(), false, false});
    }
    schema->entries.push_back({"topic_posteriors", static_cast<int>(f_beta.size()), false, false});
    combined.schema = std::move(schema);
    combined.values = f_alpha.values;
    combined.values.insert(combined.values.end(), f_beta.data(), f_beta.data() + f_beta.size());
    combined.zeroed_blocks = f_alpha.zeroed_blocks;
    return combined;
}

void AnchoredTopicModel::save(const std::string& path) const {
    json out;
    out["format_version"] = kModelFormatVersion;
    out["kind"] = "anchored_topic_model";
    out["vocab"] = vocab_;
    out["topics"] = topics();
    out["anchor_strength"] = anchor_strength_;
    json anchor_list = json::array();
    for (const auto& [topic, word] : anchor_pairs_) anchor_list.push_back({topic, word});
    out["anchors"] = anchor_list;
    auto matrix_to_json = [](const Eigen::MatrixXd& m) {
        json rows = json::array();
        for (int r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    auto vector_to_json = [](const Eigen::VectorXd& v) {
        json row = json::array();
        for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
        return row;
    };
    out["alpha"] = matrix_to_json(alpha_);
    out["log_marginal_on"] = vector_to_json(log_marginal_on_);
    out["log_marginal_off"] = vector_to_json(log_marginal_off_);
    out["log_cond_on"] = matrix_to_json(log_cond_on_);
    out["log_cond_off"] = matrix_to_json(log_cond_off_);
    out["log_px"] = vector_to_json(log_px_);
    out["tc_history"] = tc_history_;
    std::ofstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot write model file '" + path + "'");
    file << out.dump() << "\n";
}

AnchoredTopicModel AnchoredTopicModel::load(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot open model file '" + path + "'");
    json in;
    try {
        file >> in;
    } catch (const json::exception& e) {
        raise(errc::parse_error, path + ": " + e.what());
    }
    if (in.value("format_version", 0) != kModelFormatVersion ||
        in.value("kind", "") != "anchored_topic_model")
        raise(errc::parse_error, path + ": not an anchored topic model file");

    AnchoredTopicModel model;
    model.vocab_ = in["vocab"].get<std::vector<std::string>>();
    model.anchor_strength_ = in["anchor_strength"].get<double>();
    for (const auto& pair : in["anchors"])
        model.anchor_pairs_.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    model.tc_history_ = in["tc_history"].get<std::vector<double>>();

    auto matrix_from_json = [](const json& rows) {
        int r = static_cast<int>(rows.size());
        int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
        Eigen::MatrixXd m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)].get<double>();
        return m;
    };
    auto vector_from_json = [](const json& row) {
        Eigen::VectorXd v(static_cast<int>(row.size()));
        for (int i = 0; i < v.size(); ++i) v[i] = row[static_cast<size_t>(i)].get<double>();
        return v;
    };
    model.alpha_ = matrix_from_json(in["alpha"]);
    model.log_marginal_on_ = vector_from_json(in["log_marginal_on"]);
    model.log_marginal_off_ = vector_from_json(in["log_marginal_off"]);
    model.log_cond_on_ = matrix_from_json(in["log_cond_on"]);
    model.log_cond_off_ = matrix_from_json(in["log_cond_off"]);
    model.log_px_ = vector_from_json(in["log_px"]);
    return model;
}

}  // namespace readlab
