#pragma once

#include <array>
#include <vector>

#include "readlab/corpus.hpp"

namespace readlab {

// Length-balanced loss state: per-class length values theta, normalized
// coefficients kappa (sum 1), and the exponent rho. rho = 0 recovers plain
// cross entropy.
struct LengthLossConfig {
    std::vector<double> theta;
    std::vector<double> kappa;
    double rho = 0.0;
    int num_classes = 0;

    static LengthLossConfig from_stats(const LengthStats& stats, double rho,
                                       const std::array<double, 4>& attribute_weights = {1.0, 1.0,
                                                                                         1.0, 1.0});
    double weight(int class_index) const;  // kappa_c^rho
};

// theta_i = avg + median + min + max, optionally reweighted per attribute.
double class_length_value(const ClassLengths& lengths,
                          const std::array<double, 4>& attribute_weights = {1.0, 1.0, 1.0, 1.0});

// kappa_i = theta_i / sum(theta)
std::vector<double> length_coefficients(const std::vector<double>& theta);

// Loss for one sample: -kappa_c^rho * log(p_c); probabilities are clamped at
// 1e-12 before the log.
double lb_loss(const std::vector<double>& probabilities, int true_class,
               const std::vector<double>& kappa, double rho);

}  // namespace readlab
