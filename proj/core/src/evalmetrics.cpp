#include "readlab/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "readlab/error.hpp"

namespace readlab {

ConfusionMatrix ConfusionMatrix::from_labels(const std::vector<int>& gold,
                                             const std::vector<int>& predicted,
                                             int num_classes) {
    if (gold.size() != predicted.size())
        raise(errc::dimension_mismatch, "gold and predicted label counts differ");
    ConfusionMatrix cm(num_classes);
    for (size_t i = 0; i < gold.size(); ++i) {
        int g = gold[i], p = predicted[i];
        if (g < 1 || g > num_classes || p < 1 || p > num_classes)
            raise(errc::bad_level, "label outside 1.." + std::to_string(num_classes));
        ++cm.at(g - 1, p - 1);
    }
    return cm;
}

long ConfusionMatrix::total() const {
    long sum = 0;
    for (const auto& row : counts)
        for (long v : row) sum += v;
    return sum;
}

MetricsReport basic_metrics(const ConfusionMatrix& cm) {
    int n = cm.num_classes();
    long total = cm.total();
    if (n == 0 || total == 0) raise(errc::empty_matrix, "confusion matrix has no samples");

    MetricsReport report;
    report.per_class.resize(static_cast<size_t>(n));
    long diagonal = 0;
    for (int c = 0; c < n; ++c) {
        long row_sum = 0, col_sum = 0;
        for (int j = 0; j < n; ++j) {
            row_sum += cm.at(c, j);
            col_sum += cm.at(j, c);
        }
        long hit = cm.at(c, c);
        diagonal += hit;
        ClassMetrics m;
        m.support = row_sum;
        m.precision = col_sum > 0 ? static_cast<double>(hit) / static_cast<double>(col_sum) : 0.0;
        m.recall = row_sum > 0 ? static_cast<double>(hit) / static_cast<double>(row_sum) : 0.0;
        m.f1 = (m.precision + m.recall) > 0.0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        report.per_class[static_cast<size_t>(c)] = m;
    }
    report.accuracy = static_cast<double>(diagonal) / static_cast<double>(total);
    double wp = 0.0, wr = 0.0, wf = 0.0;
    for (const ClassMetrics& m : report.per_class) {
        double weight = static_cast<double>(m.support) / static_cast<double>(total);
        wp += weight * m.precision;
        wr += weight * m.recall;
        wf += weight * m.f1;
    }
    report.precision = wp;
    report.recall = wr;
    report.f1 = wf;
    return report;
}

double qwk(const ConfusionMatrix& cm) {
    int n = cm.num_classes();
    if (n < 2) raise(errc::invalid_argument, "qwk needs at least 2 classes");
    long total = cm.total();
    if (total == 0) raise(errc::empty_matrix, "confusion matrix has no samples");

    std::vector<double> row_marginal(static_cast<size_t>(n), 0.0);
    std::vector<double> col_marginal(static_cast<size_t>(n), 0.0);
    double denom_count = static_cast<double>(total);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double o = static_cast<double>(cm.at(i, j)) / denom_count;
            row_marginal[static_cast<size_t>(i)] += o;
            col_marginal[static_cast<size_t>(j)] += o;
        }

    double scale = static_cast<double>(n - 1) * static_cast<double>(n - 1);
    double observed = 0.0, expected = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double w = static_cast<double>((i - j) * (i - j)) / scale;
            observed += w * static_cast<double>(cm.at(i, j)) / denom_count;
            expected +=
                w * row_marginal[static_cast<size_t>(i)] * col_marginal[static_cast<size_t>(j)];
        }
    if (expected <= 0.0) {
        // both marginals concentrated on a single class; agreement is exact
        // when the observed mass sits in that diagonal cell
        for (int i = 0; i < n; ++i)
            if (cm.at(i, i) == total) return 1.0;
        raise(errc::degenerate_marginals, "expected disagreement is zero");
    }
    return 1.0 - observed / expected;
}

MetricsReport evaluate(const ConfusionMatrix& cm) {
    MetricsReport report = basic_metrics(cm);
    if (cm.num_classes() >= 2) report.qwk = qwk(cm);
    return report;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
    size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double shared = 0.5 * static_cast<double>(i + j) + 1.0;  // average of ranks i+1..j+1
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    size_t n = a.size();
    double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - mean_a, db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a <= 0.0 || var_b <= 0.0)
        raise(errc::constant_input, "spearman input is constant");
    return cov / std::sqrt(var_a * var_b);
}

// Regularized incomplete beta via the Lentz continued fraction.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return h;
}

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) raise(errc::dimension_mismatch, "rating sequences differ in length");
    if (a.size() < 2) raise(errc::invalid_argument, "spearman needs at least 2 ratings");
    return pearson(average_ranks(a), average_ranks(b));
}

double spearman_p_value(double rho, size_t n) {
    if (n < 3) return 1.0;
    double df = static_cast<double>(n - 2);
    double denom = 1.0 - rho * rho;
    if (denom <= 0.0) return 0.0;
    double t = rho * std::sqrt(df / denom);
    double x = df / (df + t * t);
    return incomplete_beta(0.5 * df, 0.5, x);
}

AgreementTable agreement_table(
    const std::vector<std::pair<std::string, std::vector<double>>>& raters, double alpha) {
    size_t m = raters.size();
    if (m == 0) raise(errc::invalid_argument, "no raters");
    size_t n = raters.front().second.size();
    for (const auto& [name, ratings] : raters)
        if (ratings.size() != n)
            raise(errc::dimension_mismatch, "rater '" + name + "' has a different item count");

    AgreementTable table;
    table.alpha = alpha;
    table.rho.assign(m, std::vector<double>(m, 1.0));
    table.significant.assign(m, std::vector<bool>(m, false));
    for (const auto& [name, ratings] : raters) table.raters.push_back(name);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            double rho = spearman(raters[i].second, raters[j].second);
            table.rho[i][j] = table.rho[j][i] = rho;
            bool sig = spearman_p_value(rho, n) < alpha;
            table.significant[i][j] = table.significant[j][i] = sig;
        }
    }
    return table;
}

}  // namespace readlab
