#include <doctest.h>

#include <cmath>

#include "readlab/error.hpp"
#include "readlab/lbloss.hpp"
#include "readlab/rng.hpp"

using namespace readlab;

TEST_CASE("class_length_value sums the four attributes") {
    CHECK(class_length_value({10, 9, 5, 20}) == doctest::Approx(44));
    CHECK(class_length_value({50, 50, 50, 50}) == doctest::Approx(200));
    try {
        class_length_value({0, 0, 0, 0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::all_zero);
    }
}

TEST_CASE("class_length_value honors the optional attribute weights") {
    CHECK(class_length_value({10, 9, 5, 20}, {1, 0, 0, 0}) == doctest::Approx(10));
    CHECK(class_length_value({10, 9, 5, 20}, {2, 1, 1, 1}) == doctest::Approx(54));
}

TEST_CASE("length_coefficients normalizes") {
    auto kappa = length_coefficients({100, 300});
    CHECK(kappa[0] == doctest::Approx(0.25));
    CHECK(kappa[1] == doctest::Approx(0.75));

    auto uniform = length_coefficients({7, 7, 7, 7, 7});
    for (double k : uniform) CHECK(k == doctest::Approx(0.2));

    try {
        length_coefficients({1.0, 0.0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_positive);
    }
}

TEST_CASE("average-length-only coefficients reproduce the 5-class reference") {
    // average passage lengths 266/679/1140/2165/3299; verified by hand:
    // sum 7549, ratios 0.0352 0.0899 0.1510 0.2868 0.4370
    auto kappa = length_coefficients({266, 679, 1140, 2165, 3299});
    CHECK(kappa[0] == doctest::Approx(0.0352).epsilon(5e-3));
    CHECK(kappa[1] == doctest::Approx(0.0899).epsilon(5e-3));
    CHECK(kappa[2] == doctest::Approx(0.1510).epsilon(5e-3));
    CHECK(kappa[3] == doctest::Approx(0.2868).epsilon(5e-3));
    CHECK(kappa[4] == doctest::Approx(0.4370).epsilon(5e-3));
    double sum = 0.0;
    for (double k : kappa) sum += k;
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("lb_loss with rho 0 is exactly cross entropy") {
    Rng rng(3);
    for (int trial = 0; trial < 10000; ++trial) {
        size_t n = 2 + rng.below(5);
        std::vector<double> p(n), kappa(n);
        double psum = 0.0, ksum = 0.0;
        for (size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform(0.01, 1.0);
            kappa[i] = rng.uniform(0.01, 1.0);
            psum += p[i];
            ksum += kappa[i];
        }
        for (size_t i = 0; i < n; ++i) {
            p[i] /= psum;
            kappa[i] /= ksum;
        }
        int label = static_cast<int>(rng.below(n));
        double ce = -std::log(std::max(p[static_cast<size_t>(label)], 1e-12));
        CHECK(std::abs(lb_loss(p, label, kappa, 0.0) - ce) < 1e-12);
    }
}

TEST_CASE("lb_loss worked example and perfect prediction") {
    CHECK(lb_loss({0.5, 0.5}, 0, {0.25, 0.75}, 1.0) ==
          doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-9));
    CHECK(lb_loss({1.0, 0.0}, 0, {0.25, 0.75}, 1.0) == doctest::Approx(0.0));
    CHECK(lb_loss({0.0, 1.0}, 1, {0.25, 0.75}, 2.5) == doctest::Approx(0.0));
}

TEST_CASE("lb_loss is monotone decreasing in the true-class probability") {
    std::vector<double> kappa = {0.3, 0.7};
    double previous = 1e300;
    for (double p = 0.05; p < 1.0; p += 0.05) {
        double loss = lb_loss({p, 1.0 - p}, 0, kappa, 0.7);
        CHECK(loss < previous);
        previous = loss;
    }
}

TEST_CASE("lb_loss is continuous in rho and equals kappa*CE at rho 1") {
    std::vector<double> p = {0.2, 0.5, 0.3};
    std::vector<double> kappa = {0.2, 0.3, 0.5};
    double ce = -std::log(0.5);
    CHECK(lb_loss(p, 1, kappa, 1.0) == doctest::Approx(0.3 * ce).epsilon(1e-12));
    // continuity probe around rho = 1
    double eps = 1e-7;
    double left = lb_loss(p, 1, kappa, 1.0 - eps);
    double right = lb_loss(p, 1, kappa, 1.0 + eps);
    CHECK(std::abs(left - right) < 1e-6);
}

TEST_CASE("smaller kappa means smaller loss at equal confidence") {
    std::vector<double> kappa = {0.1, 0.9};
    double loss_small = lb_loss({0.4, 0.6}, 0, kappa, 0.8);
    double loss_large = lb_loss({0.6, 0.4}, 1, kappa, 0.8);
    // identical predictive confidence 0.4 for the true class
    double confident_small = lb_loss({0.4, 0.6}, 0, kappa, 0.8);
    double confident_large = lb_loss({0.4, 0.6}, 1, kappa, 0.8);
    CHECK(confident_small < confident_large);
    (void)loss_small;
    (void)loss_large;
}

TEST_CASE("LengthLossConfig::from_stats wires stats to kappa") {
    LengthStats stats;
    stats.per_class = {{100, 90, 50, 200}, {300, 280, 100, 600}};
    LengthLossConfig config = LengthLossConfig::from_stats(stats, 0.4);
    CHECK(config.num_classes == 2);
    CHECK(config.theta[0] == doctest::Approx(440));
    CHECK(config.theta[1] == doctest::Approx(1280));
    CHECK(config.kappa[0] + config.kappa[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(config.weight(0) == doctest::Approx(std::pow(440.0 / 1720.0, 0.4)));
}
