#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "readlab/corpus.hpp"
#include "readlab/encoder.hpp"
#include "readlab/evalmetrics.hpp"
#include "readlab/fusion.hpp"
#include "readlab/lbloss.hpp"

namespace readlab {

enum class EncoderMode { precomputed, builtin_frozen, builtin_trainable };

EncoderMode encoder_mode_from_string(const std::string& name);
const char* encoder_mode_name(EncoderMode mode);

struct TrainConfig {
    int batch_size = 8;
    int epochs = 10;
    double base_lr = 3e-5;
    double weight_decay = 0.02;
    double warmup_ratio = 0.1;
    double rho = 0.0;
    double lambda = 0.5;
    uint64_t seed = 0;
    int max_segment_len = 500;
    int n_max_segments = 0;  // 0 = unlimited
    EncoderMode encoder_mode = EncoderMode::precomputed;
    FusionMode fusion_mode = FusionMode::projection;
    int hidden = 256;
    int proj = 128;
    int encoder_embed_dim = 32;  // builtin encoder only
    int encoder_out_dim = 64;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    // > 0: record this many evenly spaced full-train loss evaluations during
    // the first epoch
    int first_epoch_checkpoints = 0;
};

// Table-2 style presets (batch, segment shape, epochs, lr, rho).
TrainConfig dataset_preset(const std::string& dataset_name);

// Everything needed to run the classifier on one document.
struct Pipeline {
    FusionModel fusion;
    std::shared_ptr<BuiltinEncoder> encoder;  // null when precomputed
    std::shared_ptr<const EmbeddingStore> store;  // null when builtin
    Standardizer standardizer;
    LengthLossConfig loss;
    double lambda = 0.5;
    EncoderMode encoder_mode = EncoderMode::precomputed;
    int max_segment_len = 500;
    int n_max_segments = 0;

    void save(const std::string& path) const;
    static Pipeline load(const std::string& path);
};

struct TrainSample {
    Eigen::VectorXd f_gamma;  // standardized
    SegmentMatrix segments;   // fixed rows when the encoder is not trainable
    const Document* doc = nullptr;  // needed for the builtin trainable path
    int label = 0;                  // 0-based
};

struct SampleCache {
    const TrainSample* sample = nullptr;
    BuiltinEncoder::Cache encoder_cache;
    SegmentMatrix h;
    Eigen::VectorXd f_eta;
    Eigen::VectorXd hidden_g, f_gamma_p;
    Eigen::VectorXd hidden_e, f_eta_p;
    Projection projection;
    Eigen::VectorXd f_tau;
    Eigen::VectorXd probs;
};

struct FusionGrads {
    Eigen::MatrixXd w1, w2, w3, w4;
    Eigen::VectorXd b1, b2, b3, b4;
    void setZero(const FusionModel& model);
};

struct PipelineGrads {
    FusionGrads fusion;
    BuiltinEncoder::Gradients encoder;
    bool has_encoder = false;
};

// Composes pool -> transforms -> projection -> fuse -> classify -> loss for a
// batch; returns the mean length-balanced loss and fills one cache per sample.
double forward_loss(const Pipeline& pipeline, const std::vector<const TrainSample*>& batch,
                    std::vector<SampleCache>& caches);

// Exact reverse-mode gradients for everything forward_loss touched.
PipelineGrads backward(const Pipeline& pipeline, const std::vector<SampleCache>& caches);

// Named flat view over one parameter tensor; shared by the optimizer and the
// finite-difference harness.
struct TensorView {
    std::string name;
    double* data = nullptr;
    long size = 0;
};

std::vector<TensorView> parameter_views(Pipeline& pipeline);
std::vector<TensorView> gradient_views(PipelineGrads& grads, bool include_encoder);

// base_lr scale at `step` of `total_steps`: linear warmup over
// warmup_ratio * total_steps, then linear decay to zero.
double lr_schedule(int step, int total_steps, double warmup_ratio);

struct TrainState {
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
    int step = 0;
};

// One decoupled-weight-decay adaptive step over all trainable tensors.
void optimizer_step(TrainState& state, Pipeline& pipeline, PipelineGrads& grads,
                    const TrainConfig& config, int total_steps);

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double valid_accuracy = 0.0;
    double valid_f1 = 0.0;
    double valid_qwk = 0.0;
};

struct TrainResult {
    Pipeline pipeline;  // best validation weighted-F1 checkpoint
    std::vector<EpochStats> history;
    std::vector<double> first_epoch_loss_curve;
    int best_epoch = 0;
    MetricsReport best_valid_metrics;
};

// Raw (unstandardized) f_gamma per document id.
struct FeatureTable {
    std::unordered_map<std::string, Eigen::VectorXd> by_id;
    int dim = 0;
};

struct TrainInputs {
    const Corpus* train = nullptr;
    const Corpus* valid = nullptr;
    const FeatureTable* features = nullptr;              // f_gamma
    std::shared_ptr<const EmbeddingStore> store;         // precomputed mode
};

TrainResult train(const TrainInputs& inputs, const TrainConfig& config);

// Argmax prediction plus class probabilities for one document.
struct Prediction {
    int level = 0;  // 1-based
    Eigen::VectorXd probs;
};
Prediction predict_document(const Pipeline& pipeline, const Document& doc,
                            const Eigen::VectorXd& raw_f_gamma);

MetricsReport evaluate_corpus(const Pipeline& pipeline, const Corpus& corpus,
                              const FeatureTable& features);

struct MultiSeedResult {
    std::vector<uint64_t> seeds;
    std::vector<TrainResult> runs;
    std::vector<MetricsReport> test_metrics;
    MetricsReport mean_test_metrics;
};

// Repeats training across seeds and averages the final test metrics.
MultiSeedResult train_multi_seed(const TrainInputs& inputs, const Corpus& test,
                                 const TrainConfig& base_config,
                                 const std::vector<uint64_t>& seeds);

}  // namespace readlab
