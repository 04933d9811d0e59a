#include "readlab/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"

namespace readlab {

using nlohmann::json;

Eigen::VectorXd mixed_pool(const SegmentMatrix& segments, double lambda) {
    if (segments.rows() < 1) raise(errc::invalid_argument, "mixed_pool needs at least one row");
    if (lambda < 0.0 || lambda > 1.0)
        raise(errc::invalid_argument, "lambda must lie in [0, 1]");
    Eigen::VectorXd max_part = segments.colwise().maxCoeff().transpose();
    Eigen::VectorXd mean_part = segments.colwise().mean().transpose();
    return lambda * max_part + (1.0 - lambda) * mean_part;
}

Eigen::MatrixXd mixed_pool_backward(const SegmentMatrix& segments, double lambda,
                                    const Eigen::VectorXd& upstream) {
    const int m = static_cast<int>(segments.rows());
    const int d = static_cast<int>(segments.cols());
    if (upstream.size() != d) raise(errc::dimension_mismatch, "upstream gradient dim mismatch");
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(m, d);
    double mean_share = (1.0 - lambda) / static_cast<double>(m);
    for (int c = 0; c < d; ++c) {
        int argmax = 0;
        double best = segments(0, c);
        for (int r = 1; r < m; ++r) {
            if (segments(r, c) > best) {  // ties keep the lowest row
                best = segments(r, c);
                argmax = r;
            }
        }
        grad(argmax, c) += lambda * upstream[c];
        for (int r = 0; r < m; ++r) grad(r, c) += mean_share * upstream[c];
    }
    return grad;
}

EmbeddingStore EmbeddingStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot open embedding store '" + path + "'");
    EmbeddingStore store;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_no);
        if (line.front() == '{') {
            json rec;
            try {
                rec = json::parse(line);
            } catch (const json::exception& e) {
                raise(errc::parse_error, where + ": " + e.what());
            }
            auto values = rec.at("vec").get<std::vector<double>>();
            Eigen::VectorXd vec(static_cast<int>(values.size()));
            for (size_t i = 0; i < values.size(); ++i) vec[static_cast<int>(i)] = values[i];
            store.put(rec.at("id").get<std::string>(), rec.at("seg").get<int>(), std::move(vec));
            continue;
        }
        if (line.rfind("dim", 0) == 0) {
            std::istringstream header(line);
            std::string tag;
            int d = 0;
            header >> tag >> d;
            if (d < 1) raise(errc::parse_error, where + ": bad dim header");
            store.dim_ = d;
            continue;
        }
        std::istringstream fields(line);
        std::string id;
        int seg = -1;
        fields >> id >> seg;
        std::vector<double> values;
        double v;
        while (fields >> v) values.push_back(v);
        if (id.empty() || seg < 0 || values.empty())
            raise(errc::parse_error, where + ": expected id<TAB>seg<TAB>values");
        Eigen::VectorXd vec(static_cast<int>(values.size()));
        for (size_t i = 0; i < values.size(); ++i) vec[static_cast<int>(i)] = values[i];
        store.put(id, seg, std::move(vec));
    }
    return store;
}

void EmbeddingStore::put(const std::string& id, int seg, Eigen::VectorXd vec) {
    if (dim_ == 0) dim_ = static_cast<int>(vec.size());
    if (static_cast<int>(vec.size()) != dim_)
        raise(errc::dimension_mismatch, "segment vector for ('" + id + "', " +
                                            std::to_string(seg) + ") has dim " +
                                            std::to_string(vec.size()) + ", expected " +
                                            std::to_string(dim_));
    vectors_[{id, seg}] = std::move(vec);
}

const Eigen::VectorXd& EmbeddingStore::get(const std::string& id, int seg) const {
    auto it = vectors_.find({id, seg});
    if (it == vectors_.end())
        raise(errc::missing_embedding,
              "no embedding for ('" + id + "', " + std::to_string(seg) + ")");
    return it->second;
}

bool EmbeddingStore::contains(const std::string& id, int seg) const {
    return vectors_.count({id, seg}) > 0;
}

void EmbeddingStore::save_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(errc::io_error, "cannot write embedding store '" + path + "'");
    out << "dim " << dim_ << "\n";
    out.precision(17);
    for (const auto& [key, vec] : vectors_) {
        out << key.first << "\t" << key.second;
        for (int i = 0; i < vec.size(); ++i) out << "\t" << vec[i];
        out << "\n";
    }
}

int PrecomputedEncoder::dim() const { return store_->dim(); }

SegmentMatrix PrecomputedEncoder::encode(const Document& doc) const {
    size_t m = doc.segments.size();
    if (m == 0) raise(errc::empty_document, "document '" + doc.id + "' has no segments");
    SegmentMatrix rows(static_cast<int>(m), store_->dim());
    for (size_t s = 0; s < m; ++s) {
        const Eigen::VectorXd& vec = store_->get(doc.id, static_cast<int>(s));
        rows.row(static_cast<int>(s)) = vec.transpose();
    }
    return rows;
}

BuiltinEncoder::BuiltinEncoder(const Corpus& corpus, int embed_dim, int out_dim, uint64_t seed) {
    std::set<std::string> surfaces;
    for (const Document& doc : corpus.documents)
        for (const Token& tok : doc.tokens) surfaces.insert(tok.surface);
    if (surfaces.empty()) raise(errc::empty_vocab, "corpus has no tokens to build a vocabulary");

    vocab_.push_back("<unk>");
    for (const std::string& s : surfaces) vocab_.push_back(s);
    for (size_t i = 0; i < vocab_.size(); ++i) index_[vocab_[i]] = static_cast<int>(i);

    Rng rng(seed);
    double embed_scale = 1.0 / std::sqrt(static_cast<double>(embed_dim));
    embeddings_.resize(static_cast<int>(vocab_.size()), embed_dim);
    for (int r = 0; r < embeddings_.rows(); ++r)
        for (int c = 0; c < embeddings_.cols(); ++c)
            embeddings_(r, c) = rng.normal(0.0, embed_scale);
    projection_.resize(embed_dim, out_dim);
    double proj_scale = 1.0 / std::sqrt(static_cast<double>(embed_dim));
    for (int r = 0; r < projection_.rows(); ++r)
        for (int c = 0; c < projection_.cols(); ++c)
            projection_(r, c) = rng.normal(0.0, proj_scale);
    bias_ = Eigen::VectorXd::Zero(out_dim);
}

int BuiltinEncoder::token_id(const std::string& surface) const {
    auto it = index_.find(surface);
    return it == index_.end() ? 0 : it->second;
}

SegmentMatrix BuiltinEncoder::encode(const Document& doc) const { return forward(doc, nullptr); }

SegmentMatrix BuiltinEncoder::forward(const Document& doc, Cache* cache) const {
    size_t m = doc.segments.size();
    if (m == 0) raise(errc::empty_document, "document '" + doc.id + "' has no segments");
    SegmentMatrix rows(static_cast<int>(m), dim());
    if (cache) {
        cache->segment_token_ids.assign(m, {});
        cache->mean_embeddings.resize(static_cast<int>(m), embed_dim());
        cache->pre_activation.resize(static_cast<int>(m), dim());
    }
    for (size_t s = 0; s < m; ++s) {
        const Span& span = doc.segments[s];
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(embed_dim());
        std::vector<int> ids;
        ids.reserve(static_cast<size_t>(span.length()));
        for (int t = span.begin; t < span.end; ++t)
            ids.push_back(token_id(doc.tokens[static_cast<size_t>(t)].surface));
        if (!ids.empty()) {
            for (int id : ids) mean += embeddings_.row(id).transpose();
            mean /= static_cast<double>(ids.size());
        }
        Eigen::VectorXd pre = projection_.transpose() * mean + bias_;
        rows.row(static_cast<int>(s)) = pre.array().tanh().matrix().transpose();
        if (cache) {
            cache->segment_token_ids[s] = std::move(ids);
            cache->mean_embeddings.row(static_cast<int>(s)) = mean.transpose();
            cache->pre_activation.row(static_cast<int>(s)) = pre.transpose();
        }
    }
    return rows;
}

void BuiltinEncoder::Gradients::setZero(const BuiltinEncoder& enc) {
    embeddings = Eigen::MatrixXd::Zero(enc.vocab_size(), enc.embed_dim());
    projection = Eigen::MatrixXd::Zero(enc.embed_dim(), enc.dim());
    bias = Eigen::VectorXd::Zero(enc.dim());
}

void BuiltinEncoder::Gradients::accumulate(const Gradients& other) {
    embeddings += other.embeddings;
    projection += other.projection;
    bias += other.bias;
}

void BuiltinEncoder::Gradients::scale(double factor) {
    embeddings *= factor;
    projection *= factor;
    bias *= factor;
}

void BuiltinEncoder::backward(const Cache& cache, const Eigen::MatrixXd& upstream_rows,
                              Gradients& grads) const {
    const int m = static_cast<int>(cache.segment_token_ids.size());
    if (upstream_rows.rows() != m || upstream_rows.cols() != dim())
        raise(errc::dimension_mismatch, "upstream rows do not match the cache");
    for (int s = 0; s < m; ++s) {
        Eigen::VectorXd tanh_out = cache.pre_activation.row(s).array().tanh().matrix();
        Eigen::VectorXd d_pre =
            upstream_rows.row(s).transpose().cwiseProduct(
                (1.0 - tanh_out.array().square()).matrix());
        grads.bias += d_pre;
        grads.projection += cache.mean_embeddings.row(s).transpose() * d_pre.transpose();
        const std::vector<int>& ids = cache.segment_token_ids[static_cast<size_t>(s)];
        if (ids.empty()) continue;
        Eigen::VectorXd d_mean = projection_ * d_pre / static_cast<double>(ids.size());
        for (int id : ids) grads.embeddings.row(id) += d_mean.transpose();
    }
}

}  // namespace readlab
