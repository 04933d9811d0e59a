#include "readlab/lbloss.hpp"

#include <cmath>

#include "readlab/error.hpp"

namespace readlab {

double class_length_value(const ClassLengths& lengths,
                          const std::array<double, 4>& attribute_weights) {
    const double parts[4] = {lengths.average, lengths.median, lengths.minimum, lengths.maximum};
    double value = 0.0;
    bool any_positive = false;
    for (int j = 0; j < 4; ++j) {
        if (parts[j] < 0)
            raise(errc::invalid_argument, "length attributes must be non-negative");
        if (parts[j] > 0) any_positive = true;
        value += attribute_weights[static_cast<size_t>(j)] * parts[j];
    }
    if (!any_positive) raise(errc::all_zero, "all length attributes are zero");
    return value;
}

std::vector<double> length_coefficients(const std::vector<double>& theta) {
    if (theta.empty()) raise(errc::invalid_argument, "theta is empty");
    double sum = 0.0;
    for (double t : theta) {
        if (t <= 0.0) raise(errc::non_positive, "length values must be positive");
        sum += t;
    }
    std::vector<double> kappa(theta.size());
    for (size_t i = 0; i < theta.size(); ++i) kappa[i] = theta[i] / sum;
    return kappa;
}

LengthLossConfig LengthLossConfig::from_stats(const LengthStats& stats, double rho,
                                              const std::array<double, 4>& attribute_weights) {
    if (rho < 0.0) raise(errc::invalid_argument, "rho must be >= 0");
    LengthLossConfig config;
    config.rho = rho;
    config.num_classes = static_cast<int>(stats.per_class.size());
    config.theta.reserve(stats.per_class.size());
    for (const ClassLengths& cl : stats.per_class)
        config.theta.push_back(class_length_value(cl, attribute_weights));
    config.kappa = length_coefficients(config.theta);
    return config;
}

double LengthLossConfig::weight(int class_index) const {
    return std::pow(kappa[static_cast<size_t>(class_index)], rho);
}

double lb_loss(const std::vector<double>& probabilities, int true_class,
               const std::vector<double>& kappa, double rho) {
    if (probabilities.size() != kappa.size())
        raise(errc::dimension_mismatch, "probability and kappa sizes differ");
    if (true_class < 0 || static_cast<size_t>(true_class) >= probabilities.size())
        raise(errc::invalid_argument, "true class out of range");
    double p = std::max(probabilities[static_cast<size_t>(true_class)], 1e-12);
    return -std::pow(kappa[static_cast<size_t>(true_class)], rho) * std::log(p);
}

}  // namespace readlab
