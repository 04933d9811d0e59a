#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace readlab {

// How the two projected branches combine into f_tau:
//   projection - orthogonal complement f_o spliced with f_eta' (the paper's path)
//   concat     - plain f_gamma' || f_eta' (the no-projection ablation)
//   additive   - f_o + f_eta' (experimental reading of "added to")
enum class FusionMode { projection, concat, additive };

FusionMode fusion_mode_from_string(const std::string& name);
const char* fusion_mode_name(FusionMode mode);

// Trainable parameters of the projection-filtering classifier. W3/b3 are the
// shared second layer of both branches by construction.
struct FusionModel {
    Eigen::MatrixXd w1;  // dim_gamma x hidden
    Eigen::VectorXd b1;  // hidden
    Eigen::MatrixXd w2;  // dim_eta x hidden
    Eigen::VectorXd b2;  // hidden
    Eigen::MatrixXd w3;  // hidden x proj (shared)
    Eigen::VectorXd b3;  // proj (shared)
    Eigen::MatrixXd w4;  // fused_dim x classes
    Eigen::VectorXd b4;  // classes

    int dim_gamma = 0;
    int dim_eta = 0;
    int hidden = 0;
    int proj = 0;
    int classes = 0;
    FusionMode mode = FusionMode::projection;

    // fused dim: 2p for projection/concat, p for additive
    int fused_dim() const { return mode == FusionMode::additive ? proj : 2 * proj; }

    static FusionModel init(int dim_gamma, int dim_eta, int hidden, int proj, int classes,
                            uint64_t seed, FusionMode mode = FusionMode::projection);
};

// Per-dimension z-score fitted on the training split; a zero-variance
// dimension maps to zero.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd inv_std;

    static Standardizer fit(const Eigen::MatrixXd& rows);
    Eigen::VectorXd apply(const Eigen::VectorXd& value) const;
};

// f_gamma' = tanh(tanh(f_gamma W1 + b1) W3 + b3)
Eigen::VectorXd transform_linguistic(const Eigen::VectorXd& f_gamma, const FusionModel& model);
// f_eta' = tanh(tanh(f_eta W2 + b2) W3 + b3)
Eigen::VectorXd transform_neural(const Eigen::VectorXd& f_eta, const FusionModel& model);

struct Projection {
    Eigen::VectorXd f_o;
    bool degenerate = false;  // |f_eta'|^2 fell below the guard; f_o = f_gamma'
};

inline constexpr double kProjectionGuard = 1e-12;

// f_o = f_gamma' - (<f_gamma', f_eta'> / |f_eta'|^2) f_eta'
Projection orthogonal_project(const Eigen::VectorXd& f_gamma_p, const Eigen::VectorXd& f_eta_p,
                              double guard = kProjectionGuard);

// f_tau = f_o || f_eta'
Eigen::VectorXd fuse(const Eigen::VectorXd& f_o, const Eigen::VectorXd& f_eta_p);

// softmax(f_tau W4 + b4), max-subtracted for stability
Eigen::VectorXd classify(const Eigen::VectorXd& f_tau, const FusionModel& model);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace readlab
