#include "readlab/fusion.hpp"

#include <cmath>

#include "readlab/error.hpp"
#include "readlab/rng.hpp"

namespace readlab {

FusionMode fusion_mode_from_string(const std::string& name) {
    if (name == "projection") return FusionMode::projection;
    if (name == "concat") return FusionMode::concat;
    if (name == "additive") return FusionMode::additive;
    raise(errc::invalid_argument, "unknown fusion mode '" + name + "'");
}

const char* fusion_mode_name(FusionMode mode) {
    switch (mode) {
        case FusionMode::projection: return "projection";
        case FusionMode::concat: return "concat";
        case FusionMode::additive: return "additive";
    }
    return "projection";
}

FusionModel FusionModel::init(int dim_gamma, int dim_eta, int hidden, int proj, int classes,
                              uint64_t seed, FusionMode mode) {
    if (dim_gamma < 1 || dim_eta < 1 || hidden < 1 || proj < 1 || classes < 2)
        raise(errc::invalid_argument, "fusion dimensions must be positive (classes >= 2)");
    FusionModel model;
    model.dim_gamma = dim_gamma;
    model.dim_eta = dim_eta;
    model.hidden = hidden;
    model.proj = proj;
    model.classes = classes;
    model.mode = mode;

    Rng rng(seed);
    auto fill = [&rng](Eigen::MatrixXd& m, int rows, int cols) {
        m.resize(rows, cols);
        double scale = 1.0 / std::sqrt(static_cast<double>(rows));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = rng.normal(0.0, scale);
    };
    fill(model.w1, dim_gamma, hidden);
    fill(model.w2, dim_eta, hidden);
    fill(model.w3, hidden, proj);
    fill(model.w4, model.fused_dim(), classes);
    model.b1 = Eigen::VectorXd::Zero(hidden);
    model.b2 = Eigen::VectorXd::Zero(hidden);
    model.b3 = Eigen::VectorXd::Zero(proj);
    model.b4 = Eigen::VectorXd::Zero(classes);
    return model;
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& rows) {
    if (rows.rows() < 1) raise(errc::invalid_argument, "standardizer needs at least one row");
    Standardizer s;
    s.mean = rows.colwise().mean().transpose();
    Eigen::VectorXd var = Eigen::VectorXd::Zero(rows.cols());
    for (int r = 0; r < rows.rows(); ++r) {
        Eigen::VectorXd d = rows.row(r).transpose() - s.mean;
        var += d.cwiseProduct(d);
    }
    var /= static_cast<double>(rows.rows());
    s.inv_std.resize(rows.cols());
    for (int c = 0; c < rows.cols(); ++c) {
        double sd = std::sqrt(var[c]);
        s.inv_std[c] = sd > 1e-8 ? 1.0 / sd : 0.0;
    }
    return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& value) const {
    if (value.size() != mean.size())
        raise(errc::dimension_mismatch, "standardizer dim mismatch");
    return (value - mean).cwiseProduct(inv_std);
}

namespace {

Eigen::VectorXd two_layer_tanh(const Eigen::VectorXd& input, const Eigen::MatrixXd& w_first,
                               const Eigen::VectorXd& b_first, const FusionModel& model) {
    if (input.size() != w_first.rows())
        raise(errc::dimension_mismatch, "input dim " + std::to_string(input.size()) +
                                            " does not match weight rows " +
                                            std::to_string(w_first.rows()));
    Eigen::VectorXd hidden = (w_first.transpose() * input + b_first).array().tanh();
    return (model.w3.transpose() * hidden + model.b3).array().tanh();
}

}  // namespace

Eigen::VectorXd transform_linguistic(const Eigen::VectorXd& f_gamma, const FusionModel& model) {
    return two_layer_tanh(f_gamma, model.w1, model.b1, model);
}

Eigen::VectorXd transform_neural(const Eigen::VectorXd& f_eta, const FusionModel& model) {
    return two_layer_tanh(f_eta, model.w2, model.b2, model);
}

Projection orthogonal_project(const Eigen::VectorXd& f_gamma_p, const Eigen::VectorXd& f_eta_p,
                              double guard) {
    if (f_gamma_p.size() != f_eta_p.size())
        raise(errc::dimension_mismatch, "projected branches differ in dimension");
    Projection result;
    double denom = f_eta_p.squaredNorm();
    if (denom <= guard) {
        result.f_o = f_gamma_p;
        result.degenerate = true;
        return result;
    }
    double scale = f_gamma_p.dot(f_eta_p) / denom;
    result.f_o = f_gamma_p - scale * f_eta_p;
    return result;
}

Eigen::VectorXd fuse(const Eigen::VectorXd& f_o, const Eigen::VectorXd& f_eta_p) {
    if (f_o.size() != f_eta_p.size())
        raise(errc::dimension_mismatch, "fuse inputs differ in dimension");
    Eigen::VectorXd out(f_o.size() + f_eta_p.size());
    out << f_o, f_eta_p;
    return out;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
    Eigen::VectorXd shifted = logits.array() - logits.maxCoeff();
    Eigen::VectorXd exps = shifted.array().exp();
    return exps / exps.sum();
}

Eigen::VectorXd classify(const Eigen::VectorXd& f_tau, const FusionModel& model) {
    if (f_tau.size() != model.w4.rows())
        raise(errc::dimension_mismatch, "f_tau dim " + std::to_string(f_tau.size()) +
                                            " does not match classifier rows " +
                                            std::to_string(model.w4.rows()));
    return softmax(model.w4.transpose() * f_tau + model.b4);
}

}  // namespace readlab
