#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately take different computational routes than core/ so a bug
// cannot hide on both sides of a comparison.

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "readlab/evalmetrics.hpp"

namespace oracles {

// QWK over raw counts with unnormalized weights w = (i-j)^2; the (N-1)^2
// scale and the 1/total factors cancel in the ratio.
inline double qwk_bruteforce(const readlab::ConfusionMatrix& cm) {
    int n = cm.num_classes();
    double total = static_cast<double>(cm.total());
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            row[i] += static_cast<double>(cm.at(i, j));
            col[j] += static_cast<double>(cm.at(i, j));
        }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double w = static_cast<double>((i - j) * (i - j));
            num += w * static_cast<double>(cm.at(i, j));
            den += w * row[i] * col[j] / total;
        }
    return 1.0 - num / den;
}

// Average rank by pairwise counting: rank_i = #smaller + (#equal + 1) / 2.
inline std::vector<double> counting_ranks(const std::vector<double>& values) {
    size_t n = values.size();
    std::vector<double> ranks(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double smaller = 0.0, equal = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (values[j] < values[i]) smaller += 1.0;
            if (values[j] == values[i]) equal += 1.0;
        }
        ranks[i] = smaller + 0.5 * (equal + 1.0);
    }
    return ranks;
}

inline double spearman_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> ra = counting_ranks(a), rb = counting_ranks(b);
    size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

// Mean silhouette over Euclidean distances, O(n^2).
inline double mean_silhouette(const Eigen::MatrixXd& points, const std::vector<int>& labels) {
    int n = static_cast<int>(points.rows());
    int k = 0;
    for (int label : labels) k = std::max(k, label + 1);
    double total = 0.0;
    int counted = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> dist_sum(k, 0.0);
        std::vector<int> dist_count(k, 0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = (points.row(i) - points.row(j)).norm();
            dist_sum[labels[j]] += d;
            ++dist_count[labels[j]];
        }
        int own = labels[i];
        if (dist_count[own] == 0) continue;  // singleton cluster
        double a = dist_sum[own] / static_cast<double>(dist_count[own]);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own || dist_count[c] == 0) continue;
            b = std::min(b, dist_sum[c] / static_cast<double>(dist_count[c]));
        }
        if (!std::isfinite(b)) continue;
        total += (b - a) / std::max(a, b);
        ++counted;
    }
    return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

// Tree height by building child lists and walking down from the roots
// (breadth-first), independent of the head-chain walk in core/.
inline int tree_height_bruteforce(const std::vector<int>& heads) {
    // heads: -1 for root, -2 for "no annotation"
    int n = static_cast<int>(heads.size());
    std::vector<std::vector<int>> children(static_cast<size_t>(n));
    std::vector<int> depth(static_cast<size_t>(n), 0);
    std::vector<int> frontier;
    for (int i = 0; i < n; ++i) {
        if (heads[static_cast<size_t>(i)] == -1) {
            depth[static_cast<size_t>(i)] = 1;
            frontier.push_back(i);
        } else if (heads[static_cast<size_t>(i)] >= 0) {
            children[static_cast<size_t>(heads[static_cast<size_t>(i)])].push_back(i);
        }
    }
    int best = 0;
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int node : frontier) {
            best = std::max(best, depth[static_cast<size_t>(node)]);
            for (int child : children[static_cast<size_t>(node)]) {
                depth[static_cast<size_t>(child)] = depth[static_cast<size_t>(node)] + 1;
                next.push_back(child);
            }
        }
        frontier = std::move(next);
    }
    return best;
}

}  // namespace oracles
