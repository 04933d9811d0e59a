#include "readlab/training.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"

namespace readlab {

using nlohmann::json;

EncoderMode encoder_mode_from_string(const std::string& name) {
    if (name == "precomputed") return EncoderMode::precomputed;
    if (name == "builtin_frozen") return EncoderMode::builtin_frozen;
    if (name == "builtin_trainable") return EncoderMode::builtin_trainable;
    raise(errc::invalid_argument, "unknown encoder mode '" + name + "'");
}

const char* encoder_mode_name(EncoderMode mode) {
    switch (mode) {
        case EncoderMode::precomputed: return "precomputed";
        case EncoderMode::builtin_frozen: return "builtin_frozen";
        case EncoderMode::builtin_trainable: return "builtin_trainable";
    }
    return "precomputed";
}

TrainConfig dataset_preset(const std::string& dataset_name) {
    TrainConfig config;
    if (dataset_name == "weebit") {
        config.batch_size = 8;
        config.max_segment_len = 512;
        config.n_max_segments = 1;
        config.rho = 0.8;
    } else if (dataset_name == "onestope") {
        config.batch_size = 8;
        config.max_segment_len = 500;
        config.n_max_segments = 2;
        config.rho = 0.4;
    } else if (dataset_name == "cambridge") {
        config.batch_size = 8;
        config.max_segment_len = 500;
        config.n_max_segments = 2;
        config.rho = 0.6;
    } else if (dataset_name == "chineselr") {
        config.batch_size = 2;
        config.max_segment_len = 500;
        config.n_max_segments = 8;
        config.rho = 0.4;
    } else {
        raise(errc::invalid_argument, "unknown dataset preset '" + dataset_name + "'");
    }
    config.epochs = 10;
    config.base_lr = 3e-5;
    return config;
}

namespace {

Eigen::VectorXd tanh_vec(const Eigen::VectorXd& v) { return v.array().tanh().matrix(); }

void forward_sample(const Pipeline& pipeline, const TrainSample& sample, SampleCache& cache) {
    cache.sample = &sample;
    const FusionModel& model = pipeline.fusion;

    if (pipeline.encoder_mode == EncoderMode::builtin_trainable) {
        if (!pipeline.encoder || !sample.doc)
            raise(errc::invalid_argument, "trainable encoder requires documents");
        cache.h = pipeline.encoder->forward(*sample.doc, &cache.encoder_cache);
    } else {
        cache.h = sample.segments;
    }

    cache.f_eta = mixed_pool(cache.h, pipeline.lambda);

    cache.hidden_g =
        tanh_vec(model.w1.transpose() * sample.f_gamma + model.b1);
    cache.f_gamma_p = tanh_vec(model.w3.transpose() * cache.hidden_g + model.b3);
    cache.hidden_e = tanh_vec(model.w2.transpose() * cache.f_eta + model.b2);
    cache.f_eta_p = tanh_vec(model.w3.transpose() * cache.hidden_e + model.b3);

    switch (model.mode) {
        case FusionMode::projection:
            cache.projection = orthogonal_project(cache.f_gamma_p, cache.f_eta_p);
            cache.f_tau = fuse(cache.projection.f_o, cache.f_eta_p);
            break;
        case FusionMode::concat:
            cache.f_tau = fuse(cache.f_gamma_p, cache.f_eta_p);
            break;
        case FusionMode::additive:
            cache.projection = orthogonal_project(cache.f_gamma_p, cache.f_eta_p);
            cache.f_tau = cache.projection.f_o + cache.f_eta_p;
            break;
    }
    cache.probs = classify(cache.f_tau, model);
}

double sample_loss(const Pipeline& pipeline, const SampleCache& cache) {
    std::vector<double> probs(cache.probs.data(), cache.probs.data() + cache.probs.size());
    return lb_loss(probs, cache.sample->label, pipeline.loss.kappa, pipeline.loss.rho);
}

void backward_sample(const Pipeline& pipeline, const SampleCache& cache, double inv_batch,
                     PipelineGrads& grads) {
    const FusionModel& model = pipeline.fusion;
    const TrainSample& sample = *cache.sample;
    const int classes = model.classes;

    double weight = pipeline.loss.weight(sample.label);
    Eigen::VectorXd d_logits = cache.probs;
    d_logits[sample.label] -= 1.0;
    d_logits *= weight * inv_batch;

    grads.fusion.w4 += cache.f_tau * d_logits.transpose();
    grads.fusion.b4 += d_logits;
    Eigen::VectorXd d_tau = model.w4 * d_logits;
    (void)classes;

    Eigen::VectorXd d_gamma_p, d_eta_p;
    const int p = model.proj;
    switch (model.mode) {
        case FusionMode::projection: {
            Eigen::VectorXd d_o = d_tau.head(p);
            Eigen::VectorXd d_eta_direct = d_tau.tail(p);
            if (cache.projection.degenerate) {
                d_gamma_p = d_o;
                d_eta_p = d_eta_direct;
            } else {
                const Eigen::VectorXd& g = cache.f_gamma_p;
                const Eigen::VectorXd& e = cache.f_eta_p;
                double r = e.squaredNorm();
                double s = g.dot(e);
                double ev = e.dot(d_o);
                d_gamma_p = d_o - (ev / r) * e;
                d_eta_p = -(ev / r) * g + (2.0 * s * ev / (r * r)) * e - (s / r) * d_o;
                d_eta_p += d_eta_direct;
            }
            break;
        }
        case FusionMode::concat:
            d_gamma_p = d_tau.head(p);
            d_eta_p = d_tau.tail(p);
            break;
        case FusionMode::additive: {
            Eigen::VectorXd d_o = d_tau;
            if (cache.projection.degenerate) {
                d_gamma_p = d_o;
                d_eta_p = d_tau;
            } else {
                const Eigen::VectorXd& g = cache.f_gamma_p;
                const Eigen::VectorXd& e = cache.f_eta_p;
                double r = e.squaredNorm();
                double s = g.dot(e);
                double ev = e.dot(d_o);
                d_gamma_p = d_o - (ev / r) * e;
                d_eta_p = -(ev / r) * g + (2.0 * s * ev / (r * r)) * e - (s / r) * d_o;
                d_eta_p += d_tau;
            }
            break;
        }
    }

    // linguistic branch
    Eigen::VectorXd d_pre3g =
        d_gamma_p.cwiseProduct((1.0 - cache.f_gamma_p.array().square()).matrix());
    grads.fusion.w3 += cache.hidden_g * d_pre3g.transpose();
    grads.fusion.b3 += d_pre3g;
    Eigen::VectorXd d_hidden_g = model.w3 * d_pre3g;
    Eigen::VectorXd d_pre1 =
        d_hidden_g.cwiseProduct((1.0 - cache.hidden_g.array().square()).matrix());
    grads.fusion.w1 += sample.f_gamma * d_pre1.transpose();
    grads.fusion.b1 += d_pre1;

    // neural branch (shared W3/b3 accumulate twice)
    Eigen::VectorXd d_pre3e =
        d_eta_p.cwiseProduct((1.0 - cache.f_eta_p.array().square()).matrix());
    grads.fusion.w3 += cache.hidden_e * d_pre3e.transpose();
    grads.fusion.b3 += d_pre3e;
    Eigen::VectorXd d_hidden_e = model.w3 * d_pre3e;
    Eigen::VectorXd d_pre2 =
        d_hidden_e.cwiseProduct((1.0 - cache.hidden_e.array().square()).matrix());
    grads.fusion.w2 += cache.f_eta * d_pre2.transpose();
    grads.fusion.b2 += d_pre2;

    if (grads.has_encoder && pipeline.encoder_mode == EncoderMode::builtin_trainable) {
        Eigen::VectorXd d_eta = model.w2 * d_pre2;
        Eigen::MatrixXd d_rows = mixed_pool_backward(cache.h, pipeline.lambda, d_eta);
        pipeline.encoder->backward(cache.encoder_cache, d_rows, grads.encoder);
    }
}

}  // namespace

void FusionGrads::setZero(const FusionModel& model) {
    w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
    w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
    w3 = Eigen::MatrixXd::Zero(model.w3.rows(), model.w3.cols());
    w4 = Eigen::MatrixXd::Zero(model.w4.rows(), model.w4.cols());
    b1 = Eigen::VectorXd::Zero(model.b1.size());
    b2 = Eigen::VectorXd::Zero(model.b2.size());
    b3 = Eigen::VectorXd::Zero(model.b3.size());
    b4 = Eigen::VectorXd::Zero(model.b4.size());
}

double forward_loss(const Pipeline& pipeline, const std::vector<const TrainSample*>& batch,
                    std::vector<SampleCache>& caches) {
    if (batch.empty()) raise(errc::invalid_argument, "empty batch");
    caches.resize(batch.size());
    double total = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
        forward_sample(pipeline, *batch[i], caches[i]);
        total += sample_loss(pipeline, caches[i]);
    }
    return total / static_cast<double>(batch.size());
}

PipelineGrads backward(const Pipeline& pipeline, const std::vector<SampleCache>& caches) {
    PipelineGrads grads;
    grads.fusion.setZero(pipeline.fusion);
    grads.has_encoder =
        pipeline.encoder_mode == EncoderMode::builtin_trainable && pipeline.encoder != nullptr;
    if (grads.has_encoder) grads.encoder.setZero(*pipeline.encoder);
    double inv_batch = 1.0 / static_cast<double>(caches.size());
    for (const SampleCache& cache : caches)
        backward_sample(pipeline, cache, inv_batch, grads);
    return grads;
}

std::vector<TensorView> parameter_views(Pipeline& pipeline) {
    FusionModel& m = pipeline.fusion;
    std::vector<TensorView> views = {
        {"w1", m.w1.data(), m.w1.size()}, {"b1", m.b1.data(), m.b1.size()},
        {"w2", m.w2.data(), m.w2.size()}, {"b2", m.b2.data(), m.b2.size()},
        {"w3", m.w3.data(), m.w3.size()}, {"b3", m.b3.data(), m.b3.size()},
        {"w4", m.w4.data(), m.w4.size()}, {"b4", m.b4.data(), m.b4.size()},
    };
    if (pipeline.encoder_mode == EncoderMode::builtin_trainable && pipeline.encoder) {
        BuiltinEncoder& enc = *pipeline.encoder;
        views.push_back({"encoder_embeddings", enc.embeddings().data(), enc.embeddings().size()});
        views.push_back({"encoder_projection", enc.projection().data(), enc.projection().size()});
        views.push_back({"encoder_bias", enc.bias().data(), enc.bias().size()});
    }
    return views;
}

std::vector<TensorView> gradient_views(PipelineGrads& grads, bool include_encoder) {
    FusionGrads& g = grads.fusion;
    std::vector<TensorView> views = {
        {"w1", g.w1.data(), g.w1.size()}, {"b1", g.b1.data(), g.b1.size()},
        {"w2", g.w2.data(), g.w2.size()}, {"b2", g.b2.data(), g.b2.size()},
        {"w3", g.w3.data(), g.w3.size()}, {"b3", g.b3.data(), g.b3.size()},
        {"w4", g.w4.data(), g.w4.size()}, {"b4", g.b4.data(), g.b4.size()},
    };
    if (include_encoder && grads.has_encoder) {
        views.push_back(
            {"encoder_embeddings", grads.encoder.embeddings.data(), grads.encoder.embeddings.size()});
        views.push_back(
            {"encoder_projection", grads.encoder.projection.data(), grads.encoder.projection.size()});
        views.push_back({"encoder_bias", grads.encoder.bias.data(), grads.encoder.bias.size()});
    }
    return views;
}

double lr_schedule(int step, int total_steps, double warmup_ratio) {
    if (total_steps < 1) return 1.0;
    double warm = std::floor(warmup_ratio * static_cast<double>(total_steps));
    double s = static_cast<double>(step);
    double warm_factor = warm > 0.0 ? s / warm : 1.0;
    double decay_factor =
        total_steps > warm
            ? (static_cast<double>(total_steps) - s) / (static_cast<double>(total_steps) - warm)
            : 1.0;
    return std::max(0.0, std::min(warm_factor, decay_factor));
}

void optimizer_step(TrainState& state, Pipeline& pipeline, PipelineGrads& grads,
                    const TrainConfig& config, int total_steps) {
    auto params = parameter_views(pipeline);
    auto gradients = gradient_views(grads, true);
    if (params.size() != gradients.size())
        raise(errc::dimension_mismatch, "parameter/gradient tensor counts differ");

    if (state.first_moment.empty()) {
        for (const TensorView& v : params) {
            state.first_moment.emplace_back(static_cast<size_t>(v.size), 0.0);
            state.second_moment.emplace_back(static_cast<size_t>(v.size), 0.0);
        }
    }
    ++state.step;
    double lr = config.base_lr * lr_schedule(state.step, total_steps, config.warmup_ratio);
    double bc1 = 1.0 - std::pow(config.adam_beta1, state.step);
    double bc2 = 1.0 - std::pow(config.adam_beta2, state.step);

    for (size_t t = 0; t < params.size(); ++t) {
        double* theta = params[t].data;
        const double* g = gradients[t].data;
        std::vector<double>& m = state.first_moment[t];
        std::vector<double>& v = state.second_moment[t];
        for (long i = 0; i < params[t].size; ++i) {
            m[static_cast<size_t>(i)] =
                config.adam_beta1 * m[static_cast<size_t>(i)] + (1.0 - config.adam_beta1) * g[i];
            v[static_cast<size_t>(i)] = config.adam_beta2 * v[static_cast<size_t>(i)] +
                                        (1.0 - config.adam_beta2) * g[i] * g[i];
            double m_hat = m[static_cast<size_t>(i)] / bc1;
            double v_hat = v[static_cast<size_t>(i)] / bc2;
            theta[i] -= lr * (m_hat / (std::sqrt(v_hat) + config.adam_eps) +
                              config.weight_decay * theta[i]);
        }
    }
}

namespace {

std::vector<TrainSample> build_samples(const Corpus& corpus, const FeatureTable& features,
                                       const Pipeline& pipeline,
                                       std::vector<Document>& segmented_storage) {
    segmented_storage.clear();
    segmented_storage.reserve(corpus.documents.size());
    for (const Document& doc : corpus.documents)
        segmented_storage.push_back(
            segment(doc, pipeline.max_segment_len, pipeline.n_max_segments));

    std::vector<TrainSample> samples;
    samples.reserve(corpus.documents.size());
    for (const Document& doc : segmented_storage) {
        auto it = features.by_id.find(doc.id);
        if (it == features.by_id.end())
            raise(errc::missing_field, "no f_gamma features for document '" + doc.id + "'");
        TrainSample sample;
        sample.f_gamma = pipeline.standardizer.apply(it->second);
        sample.label = doc.level - 1;
        sample.doc = &doc;
        if (pipeline.encoder_mode == EncoderMode::precomputed) {
            PrecomputedEncoder enc(pipeline.store);
            sample.segments = enc.encode(doc);
        } else if (pipeline.encoder_mode == EncoderMode::builtin_frozen) {
            sample.segments = pipeline.encoder->encode(doc);
        }
        samples.push_back(std::move(sample));
    }
    return samples;
}

double dataset_loss(const Pipeline& pipeline, const std::vector<TrainSample>& samples) {
    std::vector<SampleCache> caches;
    std::vector<const TrainSample*> batch;
    batch.reserve(samples.size());
    for (const TrainSample& s : samples) batch.push_back(&s);
    return forward_loss(pipeline, batch, caches);
}

MetricsReport eval_samples(const Pipeline& pipeline, const std::vector<TrainSample>& samples,
                           int num_classes) {
    std::vector<int> gold, predicted;
    SampleCache cache;
    for (const TrainSample& s : samples) {
        forward_sample(pipeline, s, cache);
        int best = 0;
        cache.probs.maxCoeff(&best);
        gold.push_back(s.label + 1);
        predicted.push_back(best + 1);
    }
    return evaluate(ConfusionMatrix::from_labels(gold, predicted, num_classes));
}

}  // namespace

TrainResult train(const TrainInputs& inputs, const TrainConfig& config) {
    if (!inputs.train || !inputs.valid || !inputs.features)
        raise(errc::invalid_argument, "train inputs incomplete");
    const Corpus& train_corpus = *inputs.train;
    if (train_corpus.documents.empty()) raise(errc::empty_corpus, "empty training corpus");
    if (config.base_lr <= 0) raise(errc::invalid_argument, "base_lr must be positive");
    if (config.warmup_ratio < 0 || config.warmup_ratio >= 1)
        raise(errc::invalid_argument, "warmup_ratio must lie in [0, 1)");
    if (config.epochs < 1) raise(errc::invalid_argument, "epochs must be >= 1");

    const int num_classes = train_corpus.num_levels;

    Pipeline pipeline;
    pipeline.lambda = config.lambda;
    pipeline.encoder_mode = config.encoder_mode;
    pipeline.max_segment_len = config.max_segment_len;
    pipeline.n_max_segments = config.n_max_segments;
    pipeline.store = inputs.store;
    if (config.encoder_mode != EncoderMode::precomputed) {
        pipeline.encoder = std::make_shared<BuiltinEncoder>(
            train_corpus, config.encoder_embed_dim, config.encoder_out_dim, config.seed + 1);
    } else if (!inputs.store) {
        raise(errc::invalid_argument, "precomputed encoder mode requires an embedding store");
    }

    // standardizer from the raw train features
    Eigen::MatrixXd raw(static_cast<int>(train_corpus.documents.size()),
                        inputs.features->dim);
    for (size_t i = 0; i < train_corpus.documents.size(); ++i) {
        auto it = inputs.features->by_id.find(train_corpus.documents[i].id);
        if (it == inputs.features->by_id.end())
            raise(errc::missing_field,
                  "no f_gamma features for document '" + train_corpus.documents[i].id + "'");
        raw.row(static_cast<int>(i)) = it->second.transpose();
    }
    pipeline.standardizer = Standardizer::fit(raw);

    pipeline.loss = LengthLossConfig::from_stats(length_stats(train_corpus), config.rho);

    int encoder_dim = config.encoder_mode == EncoderMode::precomputed
                          ? inputs.store->dim()
                          : pipeline.encoder->dim();
    pipeline.fusion = FusionModel::init(inputs.features->dim, encoder_dim, config.hidden,
                                        config.proj, num_classes, config.seed,
                                        config.fusion_mode);

    std::vector<Document> train_docs, valid_docs;
    std::vector<TrainSample> train_samples =
        build_samples(train_corpus, *inputs.features, pipeline, train_docs);
    std::vector<TrainSample> valid_samples =
        build_samples(*inputs.valid, *inputs.features, pipeline, valid_docs);

    int batches_per_epoch =
        static_cast<int>((train_samples.size() + static_cast<size_t>(config.batch_size) - 1) /
                         static_cast<size_t>(config.batch_size));
    int total_steps = batches_per_epoch * config.epochs;

    TrainState state;
    TrainResult result;
    Rng rng(config.seed);
    std::vector<size_t> order(train_samples.size());
    std::iota(order.begin(), order.end(), size_t{0});

    double best_f1 = -1.0;
    Pipeline best_pipeline = pipeline;
    int checkpoint_every =
        config.first_epoch_checkpoints > 0
            ? std::max(1, batches_per_epoch / config.first_epoch_checkpoints)
            : 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        int batch_count = 0;
        if (epoch == 1 && checkpoint_every > 0)
            result.first_epoch_loss_curve.push_back(dataset_loss(pipeline, train_samples));
        for (size_t start = 0; start < order.size();
             start += static_cast<size_t>(config.batch_size)) {
            std::vector<const TrainSample*> batch;
            size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
            for (size_t i = start; i < end; ++i) batch.push_back(&train_samples[order[i]]);
            std::vector<SampleCache> caches;
            double loss = forward_loss(pipeline, batch, caches);
            PipelineGrads grads = backward(pipeline, caches);
            optimizer_step(state, pipeline, grads, config, total_steps);
            epoch_loss += loss;
            ++batch_count;
            if (epoch == 1 && checkpoint_every > 0 && batch_count % checkpoint_every == 0)
                result.first_epoch_loss_curve.push_back(dataset_loss(pipeline, train_samples));
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss / std::max(1, batch_count);
        MetricsReport train_report = eval_samples(pipeline, train_samples, num_classes);
        stats.train_accuracy = train_report.accuracy;
        MetricsReport valid_report = eval_samples(pipeline, valid_samples, num_classes);
        stats.valid_accuracy = valid_report.accuracy;
        stats.valid_f1 = valid_report.f1;
        stats.valid_qwk = valid_report.qwk.value_or(0.0);
        result.history.push_back(stats);

        if (valid_report.f1 > best_f1) {
            best_f1 = valid_report.f1;
            best_pipeline = pipeline;
            if (pipeline.encoder)  // deep copy; later epochs keep mutating the live encoder
                best_pipeline.encoder = std::make_shared<BuiltinEncoder>(*pipeline.encoder);
            result.best_epoch = epoch;
            result.best_valid_metrics = valid_report;
        }
    }

    result.pipeline = std::move(best_pipeline);
    return result;
}

Prediction predict_document(const Pipeline& pipeline, const Document& doc,
                            const Eigen::VectorXd& raw_f_gamma) {
    Document segmented = segment(doc, pipeline.max_segment_len, pipeline.n_max_segments);
    TrainSample sample;
    sample.f_gamma = pipeline.standardizer.apply(raw_f_gamma);
    sample.label = 0;
    sample.doc = &segmented;
    if (pipeline.encoder_mode == EncoderMode::precomputed) {
        PrecomputedEncoder enc(pipeline.store);
        sample.segments = enc.encode(segmented);
    } else if (pipeline.encoder_mode == EncoderMode::builtin_frozen) {
        sample.segments = pipeline.encoder->encode(segmented);
    }
    SampleCache cache;
    forward_sample(pipeline, sample, cache);
    Prediction pred;
    int best = 0;
    cache.probs.maxCoeff(&best);
    pred.level = best + 1;
    pred.probs = cache.probs;
    return pred;
}

MetricsReport evaluate_corpus(const Pipeline& pipeline, const Corpus& corpus,
                              const FeatureTable& features) {
    std::vector<int> gold, predicted;
    for (const Document& doc : corpus.documents) {
        auto it = features.by_id.find(doc.id);
        if (it == features.by_id.end())
            raise(errc::missing_field, "no features for document '" + doc.id + "'");
        Prediction pred = predict_document(pipeline, doc, it->second);
        gold.push_back(doc.level);
        predicted.push_back(pred.level);
    }
    return evaluate(ConfusionMatrix::from_labels(gold, predicted, corpus.num_levels));
}

MultiSeedResult train_multi_seed(const TrainInputs& inputs, const Corpus& test,
                                 const TrainConfig& base_config,
                                 const std::vector<uint64_t>& seeds) {
    if (seeds.empty()) raise(errc::invalid_argument, "no seeds given");
    MultiSeedResult result;
    result.seeds = seeds;
    for (uint64_t seed : seeds) {
        TrainConfig config = base_config;
        config.seed = seed;
        TrainResult run = train(inputs, config);
        result.test_metrics.push_back(
            evaluate_corpus(run.pipeline, test, *inputs.features));
        result.runs.push_back(std::move(run));
    }
    MetricsReport mean;
    for (const MetricsReport& m : result.test_metrics) {
        mean.accuracy += m.accuracy;
        mean.precision += m.precision;
        mean.recall += m.recall;
        mean.f1 += m.f1;
        if (m.qwk) mean.qwk = mean.qwk.value_or(0.0) + *m.qwk;
    }
    double inv = 1.0 / static_cast<double>(result.test_metrics.size());
    mean.accuracy *= inv;
    mean.precision *= inv;
    mean.recall *= inv;
    mean.f1 *= inv;
    if (mean.qwk) mean.qwk = *mean.qwk * inv;
    result.mean_test_metrics = mean;
    return result;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
    int r = static_cast<int>(rows.size());
    int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)].get<double>();
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json row = json::array();
    for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
    return row;
}

Eigen::VectorXd vector_from_json(const json& row) {
    Eigen::VectorXd v(static_cast<int>(row.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = row[static_cast<size_t>(i)].get<double>();
    return v;
}

constexpr int kCheckpointVersion = 1;

}  // namespace

void Pipeline::save(const std::string& path) const {
    json out;
    out["format_version"] = kCheckpointVersion;
    out["kind"] = "readability_pipeline";
    out["lambda"] = lambda;
    out["encoder_mode"] = encoder_mode_name(encoder_mode);
    out["fusion_mode"] = fusion_mode_name(fusion.mode);
    out["max_segment_len"] = max_segment_len;
    out["n_max_segments"] = n_max_segments;
    out["dims"] = {{"gamma", fusion.dim_gamma}, {"eta", fusion.dim_eta},
                   {"hidden", fusion.hidden},   {"proj", fusion.proj},
                   {"classes", fusion.classes}};
    out["w1"] = matrix_to_json(fusion.w1);
    out["b1"] = vector_to_json(fusion.b1);
    out["w2"] = matrix_to_json(fusion.w2);
    out["b2"] = vector_to_json(fusion.b2);
    out["w3"] = matrix_to_json(fusion.w3);
    out["b3"] = vector_to_json(fusion.b3);
    out["w4"] = matrix_to_json(fusion.w4);
    out["b4"] = vector_to_json(fusion.b4);
    out["standardizer_mean"] = vector_to_json(standardizer.mean);
    out["standardizer_inv_std"] = vector_to_json(standardizer.inv_std);
    out["loss"] = {{"theta", loss.theta}, {"kappa", loss.kappa}, {"rho", loss.rho},
                   {"num_classes", loss.num_classes}};
    if (encoder) {
        out["encoder"] = {{"vocab", encoder->vocab()},
                          {"embeddings", matrix_to_json(encoder->embeddings())},
                          {"projection", matrix_to_json(encoder->projection())},
                          {"bias", vector_to_json(encoder->bias())}};
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot write checkpoint '" + path + "'");
    file << out.dump() << "\n";
}

Pipeline Pipeline::load(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) raise(errc::io_error, "cannot open checkpoint '" + path + "'");
    json in;
    try {
        file >> in;
    } catch (const json::exception& e) {
        raise(errc::parse_error, path + ": " + e.what());
    }
    if (in.value("format_version", 0) != kCheckpointVersion ||
        in.value("kind", "") != "readability_pipeline")
        raise(errc::parse_error, path + ": not a pipeline checkpoint");

    Pipeline p;
    p.lambda = in["lambda"].get<double>();
    p.encoder_mode = encoder_mode_from_string(in["encoder_mode"].get<std::string>());
    p.max_segment_len = in["max_segment_len"].get<int>();
    p.n_max_segments = in["n_max_segments"].get<int>();
    p.fusion.mode = fusion_mode_from_string(in["fusion_mode"].get<std::string>());
    p.fusion.dim_gamma = in["dims"]["gamma"].get<int>();
    p.fusion.dim_eta = in["dims"]["eta"].get<int>();
    p.fusion.hidden = in["dims"]["hidden"].get<int>();
    p.fusion.proj = in["dims"]["proj"].get<int>();
    p.fusion.classes = in["dims"]["classes"].get<int>();
    p.fusion.w1 = matrix_from_json(in["w1"]);
    p.fusion.b1 = vector_from_json(in["b1"]);
    p.fusion.w2 = matrix_from_json(in["w2"]);
    p.fusion.b2 = vector_from_json(in["b2"]);
    p.fusion.w3 = matrix_from_json(in["w3"]);
    p.fusion.b3 = vector_from_json(in["b3"]);
    p.fusion.w4 = matrix_from_json(in["w4"]);
    p.fusion.b4 = vector_from_json(in["b4"]);
    p.standardizer.mean = vector_from_json(in["standardizer_mean"]);
    p.standardizer.inv_std = vector_from_json(in["standardizer_inv_std"]);
    p.loss.theta = in["loss"]["theta"].get<std::vector<double>>();
    p.loss.kappa = in["loss"]["kappa"].get<std::vector<double>>();
    p.loss.rho = in["loss"]["rho"].get<double>();
    p.loss.num_classes = in["loss"]["num_classes"].get<int>();
    if (in.contains("encoder")) {
        // rebuild through a corpus holding the stored vocabulary
        Corpus vocab_corpus;
        vocab_corpus.num_levels = 1;
        Document holder;
        holder.id = "__vocab__";
        holder.level = 1;
        auto vocab = in["encoder"]["vocab"].get<std::vector<std::string>>();
        for (const std::string& word : vocab)
            if (word != "<unk>") holder.tokens.push_back(make_token(word));
        vocab_corpus.documents.push_back(std::move(holder));
        Eigen::MatrixXd embeddings = matrix_from_json(in["encoder"]["embeddings"]);
        Eigen::MatrixXd projection = matrix_from_json(in["encoder"]["projection"]);
        p.encoder = std::make_shared<BuiltinEncoder>(
            vocab_corpus, static_cast<int>(projection.rows()),
            static_cast<int>(projection.cols()), 0);
        p.encoder->embeddings() = std::move(embeddings);
        p.encoder->projection() = std::move(projection);
        p.encoder->bias() = vector_from_json(in["encoder"]["bias"]);
    }
    return p;
}

}  // namespace readlab
