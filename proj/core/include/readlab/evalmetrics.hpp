#pragma once

#include <optional>
#include <string>
#include <vector>

namespace readlab {

// Rows are true classes, columns predictions; 0-based indices for levels 1..N.
struct ConfusionMatrix {
    std::vector<std::vector<long>> counts;

    explicit ConfusionMatrix(int num_classes = 0)
        : counts(static_cast<size_t>(num_classes),
                 std::vector<long>(static_cast<size_t>(num_classes), 0)) {}

    static ConfusionMatrix from_labels(const std::vector<int>& gold,
                                       const std::vector<int>& predicted, int num_classes);

    int num_classes() const { return static_cast<int>(counts.size()); }
    long total() const;
    long& at(int true_class, int predicted_class) {
        return counts[static_cast<size_t>(true_class)][static_cast<size_t>(predicted_class)];
    }
    long at(int true_class, int predicted_class) const {
        return counts[static_cast<size_t>(true_class)][static_cast<size_t>(predicted_class)];
    }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long support = 0;
};

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;  // support-weighted
    double recall = 0.0;     // support-weighted; equals accuracy
    double f1 = 0.0;         // support-weighted
    std::optional<double> qwk;
    std::vector<ClassMetrics> per_class;
};

// Accuracy and support-weighted P/R/F1; zero denominators yield zero.
MetricsReport basic_metrics(const ConfusionMatrix& cm);

// Quadratic weighted kappa, w_ij = (i-j)^2/(N-1)^2 over observed vs expected
// proportions.
double qwk(const ConfusionMatrix& cm);

// basic_metrics plus qwk when N >= 2.
MetricsReport evaluate(const ConfusionMatrix& cm);

// Pearson correlation of tie-averaged ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

// Two-tailed p-value of Spearman rho under the t approximation with n-2 df.
double spearman_p_value(double rho, size_t n);

struct AgreementTable {
    std::vector<std::string> raters;
    std::vector<std::vector<double>> rho;       // symmetric, unit diagonal
    std::vector<std::vector<bool>> significant; // two-tailed at `alpha`
    double alpha = 0.01;
};

AgreementTable agreement_table(
    const std::vector<std::pair<std::string, std::vector<double>>>& raters,
    double alpha = 0.01);

}  // namespace readlab
