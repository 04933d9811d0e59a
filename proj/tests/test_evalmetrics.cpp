#include <doctest.h>

#include <cmath>

#include "readlab/error.hpp"
#include "readlab/evalmetrics.hpp"
#include "readlab/rng.hpp"
#include "support/oracles.hpp"

using namespace readlab;

namespace {

ConfusionMatrix random_cm(int n, long max_cell, Rng& rng) {
    ConfusionMatrix cm(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cm.at(i, j) = static_cast<long>(rng.below(static_cast<uint64_t>(max_cell)));
    if (cm.total() == 0) cm.at(0, 0) = 1;
    return cm;
}

}  // namespace

TEST_CASE("perfect prediction scores 1.0 everywhere") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 5;
    cm.at(1, 1) = 7;
    cm.at(2, 2) = 9;
    MetricsReport report = evaluate(cm);
    CHECK(report.accuracy == doctest::Approx(1.0));
    CHECK(report.precision == doctest::Approx(1.0));
    CHECK(report.recall == doctest::Approx(1.0));
    CHECK(report.f1 == doctest::Approx(1.0));
    CHECK(report.qwk.value() == doctest::Approx(1.0));
}

TEST_CASE("hand-computed 2x2 worked example") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 1;
    cm.at(0, 1) = 1;
    cm.at(1, 0) = 0;
    cm.at(1, 1) = 2;
    MetricsReport report = basic_metrics(cm);
    CHECK(report.accuracy == doctest::Approx(0.75));
    CHECK(report.per_class[0].precision == doctest::Approx(1.0));
    CHECK(report.per_class[0].recall == doctest::Approx(0.5));
    CHECK(report.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
    CHECK(report.per_class[1].precision == doctest::Approx(2.0 / 3.0));
    CHECK(report.per_class[1].recall == doctest::Approx(1.0));
    CHECK(report.per_class[1].f1 == doctest::Approx(0.8));
    CHECK(report.f1 == doctest::Approx((2.0 * (2.0 / 3.0) + 2.0 * 0.8) / 4.0));
}

TEST_CASE("a never-predicted class yields zero precision without throwing") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 4;
    cm.at(1, 0) = 2;
    cm.at(2, 0) = 1;  // everything lands in class 1
    MetricsReport report = basic_metrics(cm);
    CHECK(report.per_class[1].precision == 0.0);
    CHECK(report.per_class[2].precision == 0.0);
}

TEST_CASE("weighted recall equals accuracy on random matrices") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.below(5));
        ConfusionMatrix cm = random_cm(n, 12, rng);
        MetricsReport report = basic_metrics(cm);
        CHECK(report.recall == doctest::Approx(report.accuracy).epsilon(1e-12));
    }
}

TEST_CASE("qwk hits the closed-form boundary cases") {
    ConfusionMatrix opposite(2);
    opposite.at(0, 1) = 10;
    opposite.at(1, 0) = 10;
    CHECK(qwk(opposite) == doctest::Approx(-1.0));

    ConfusionMatrix perfect(4);
    for (int i = 0; i < 4; ++i) perfect.at(i, i) = 3 + i;
    CHECK(qwk(perfect) == doctest::Approx(1.0));
}

TEST_CASE("qwk matches the brute-force oracle on 1000 random matrices") {
    Rng rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng.below(5));
        ConfusionMatrix cm = random_cm(n, 9, rng);
        // makes the expected-disagreement denominator nonzero
        cm.at(0, n - 1) += 1;
        CHECK(std::abs(qwk(cm) - oracles::qwk_bruteforce(cm)) < 1e-12);
    }
}

TEST_CASE("qwk is invariant to scaling all counts") {
    ConfusionMatrix cm(3);
    cm.at(0, 0) = 3;
    cm.at(0, 1) = 1;
    cm.at(1, 1) = 4;
    cm.at(2, 1) = 2;
    cm.at(2, 2) = 5;
    ConfusionMatrix scaled(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) scaled.at(i, j) = 10 * cm.at(i, j);
    CHECK(qwk(cm) == doctest::Approx(qwk(scaled)).epsilon(1e-12));
}

TEST_CASE("qwk N=2 label swap leaves the value unchanged") {
    ConfusionMatrix cm(2);
    cm.at(0, 0) = 6;
    cm.at(0, 1) = 2;
    cm.at(1, 0) = 1;
    cm.at(1, 1) = 4;
    ConfusionMatrix swapped(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) swapped.at(1 - i, 1 - j) = cm.at(i, j);
    CHECK(qwk(cm) == doctest::Approx(qwk(swapped)).epsilon(1e-12));
}

TEST_CASE("qwk degenerate marginals: single diagonal cell returns 1") {
    ConfusionMatrix cm(3);
    cm.at(1, 1) = 12;
    CHECK(qwk(cm) == doctest::Approx(1.0));
}

TEST_CASE("spearman matches the worked examples") {
    CHECK(spearman({1, 2, 3, 4}, {1, 2, 3, 4}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    // tie-averaged ranks: the oracle evaluates this pair to 5/6
    double rho = spearman({1, 2, 2, 3}, {1, 3, 2, 3});
    CHECK(rho == doctest::Approx(oracles::spearman_bruteforce({1, 2, 2, 3}, {1, 3, 2, 3}))
                     .epsilon(1e-12));
    CHECK(rho == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("spearman matches the brute-force oracle on 1000 random inputs with ties") {
    Rng rng(77);
    for (int trial = 0; trial < 1000; ++trial) {
        size_t n = 3 + rng.below(20);
        std::vector<double> a(n), b(n);
        bool ok = false;
        while (!ok) {
            for (size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(rng.below(6));  // small range forces ties
                b[i] = static_cast<double>(rng.below(6));
            }
            auto constant = [](const std::vector<double>& v) {
                for (double x : v)
                    if (x != v[0]) return false;
                return true;
            };
            ok = !constant(a) && !constant(b);
        }
        CHECK(std::abs(spearman(a, b) - oracles::spearman_bruteforce(a, b)) < 1e-12);
    }
}

TEST_CASE("spearman is symmetric and monotone-transform invariant") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        size_t n = 4 + rng.below(12);
        std::vector<double> a(n), b(n);
        for (size_t i = 0; i < n; ++i) {
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        double rho = spearman(a, b);
        CHECK(rho == doctest::Approx(spearman(b, a)).epsilon(1e-12));
        std::vector<double> a_mono(n);
        for (size_t i = 0; i < n; ++i) a_mono[i] = std::exp(3.0 * a[i]) + 7.0;
        CHECK(rho == doctest::Approx(spearman(a_mono, b)).epsilon(1e-12));
    }
}

TEST_CASE("spearman rejects constant input") {
    try {
        spearman({1, 1, 1}, {1, 2, 3});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::constant_input);
    }
}

TEST_CASE("spearman p-value approximation matches reference points") {
    // frozen from the t distribution with n-2 df (two-tailed)
    CHECK(spearman_p_value(0.3, 20) == doctest::Approx(0.1987577).epsilon(1e-5));
    CHECK(spearman_p_value(0.7, 10) == doctest::Approx(0.02420634).epsilon(1e-5));
    CHECK(spearman_p_value(0.19, 200) == doctest::Approx(0.007044038).epsilon(1e-5));
    CHECK(spearman_p_value(0.18, 200) == doctest::Approx(0.01075701).epsilon(1e-5));
}

TEST_CASE("agreement_table is symmetric with unit diagonal") {
    Rng rng(11);
    std::vector<std::pair<std::string, std::vector<double>>> raters;
    std::vector<double> base(200);
    for (double& v : base) v = static_cast<double>(1 + rng.below(3));
    for (const char* name : {"E1", "E2", "E3", "M4"}) {
        std::vector<double> ratings = base;
        for (double& v : ratings)
            if (rng.uniform() < 0.2) v = static_cast<double>(1 + rng.below(3));
        raters.emplace_back(name, ratings);
    }
    AgreementTable table = agreement_table(raters);
    REQUIRE(table.raters.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(table.rho[i][i] == doctest::Approx(1.0));
        for (size_t j = 0; j < 4; ++j) CHECK(table.rho[i][j] == doctest::Approx(table.rho[j][i]));
    }
    // strongly correlated raters over 200 items clear the 0.01 bar
    CHECK(table.significant[0][1]);
}

TEST_CASE("agreement_table two raters") {
    std::vector<std::pair<std::string, std::vector<double>>> raters = {
        {"a", {1, 2, 3, 1, 2}}, {"b", {1, 3, 2, 1, 2}}};
    AgreementTable table = agreement_table(raters);
    CHECK(table.rho.size() == 2);
    CHECK(table.rho[0][1] == doctest::Approx(spearman({1, 2, 3, 1, 2}, {1, 3, 2, 1, 2})));
}
