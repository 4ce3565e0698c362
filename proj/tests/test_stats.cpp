#include "grnbench/stats.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace grnbench;
using doctest::Approx;

TEST_CASE("wasserstein1 examples") {
    CHECK(stats::wasserstein1(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK(stats::wasserstein1(std::vector<double>{0, 1}, std::vector<double>{1, 2}) == Approx(1.0));
    CHECK(stats::wasserstein1(std::vector<double>{0, 0, 0, 0}, std::vector<double>{0, 0, 0, 1}) == Approx(0.25));
    CHECK(stats::wasserstein1(std::vector<double>{0}, std::vector<double>{0, 3}) == Approx(1.5));
    CHECK_THROWS_AS(stats::wasserstein1(std::vector<double>{}, std::vector<double>{1}), std::invalid_argument);
}

TEST_CASE("wasserstein1 matches oracles") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const bool ties = trial % 2 == 0;
        const auto a = oracle::random_sample(rng, 1 + trial % 9, ties);
        const auto b = oracle::random_sample(rng, 1 + (trial * 7) % 11, ties);
        REQUIRE(stats::wasserstein1(a, b) == Approx(oracle::wasserstein_cdf(a, b)).epsilon(1e-12));
        const auto c = oracle::random_sample(rng, a.size(), ties);
        REQUIRE(stats::wasserstein1(a, c) == Approx(oracle::wasserstein_sorted(a, c)).epsilon(1e-12));
    }
}

TEST_CASE("wasserstein1 is a metric on empirical distributions") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_sample(rng, 3 + trial % 5, false);
        const auto b = oracle::random_sample(rng, 2 + trial % 7, false);
        const auto c = oracle::random_sample(rng, 4, false);
        const double ab = stats::wasserstein1(a, b);
        CHECK(ab == Approx(stats::wasserstein1(b, a)));
        CHECK(ab <= stats::wasserstein1(a, c) + stats::wasserstein1(c, b) + 1e-12);
        auto doubled = a;
        doubled.insert(doubled.end(), a.begin(), a.end());
        CHECK(stats::wasserstein1(a, doubled) == Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("mann-whitney examples") {
    const auto r = stats::mann_whitney_u_two_sided(std::vector<double>{1, 2}, std::vector<double>{3, 4}, stats::MwuMethod::exact);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == Approx(1.0 / 3.0));

    const std::vector<double> same{2, 2, 2, 2};
    CHECK(stats::mann_whitney_u_two_sided(same, same).p_value == 1.0);
    CHECK(stats::mann_whitney_u_two_sided(same, same, stats::MwuMethod::asymptotic).p_value == 1.0);

    std::vector<double> low, high;
    for (int k = 1; k <= 20; ++k) {
        low.push_back(k);
        high.push_back(k + 20);
    }
    const auto far = stats::mann_whitney_u_two_sided(low, high);
    CHECK(far.statistic == 0.0);
    CHECK(far.p_value < 0.001);

    CHECK_THROWS_AS(stats::mann_whitney_u_two_sided(low, high, stats::MwuMethod::exact), std::invalid_argument);
    CHECK_THROWS_AS(stats::mann_whitney_u_two_sided(std::vector<double>{}, high), std::invalid_argument);
}

TEST_CASE("mann-whitney exact mode matches enumeration") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n1 = 1 + trial % 7;
        const std::size_t n2 = 1 + (trial / 7) % 8;
        const auto a = oracle::random_sample(rng, n1, trial % 3 == 0);
        const auto b = oracle::random_sample(rng, n2, trial % 3 == 0);
        const auto r = stats::mann_whitney_u_two_sided(a, b, stats::MwuMethod::exact);
        REQUIRE(r.statistic == Approx(oracle::u_statistic(a, b)).epsilon(1e-12));
        REQUIRE(std::abs(r.p_value - oracle::mwu_exact_p(a, b)) < 1e-6);
    }
}

TEST_CASE("mann-whitney asymptotic p tracks the exact p") {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 12 + trial % 9;
        const std::size_t n1 = n / 2 - trial % 3;
        const auto a = oracle::random_sample(rng, n1, false);
        auto b = oracle::random_sample(rng, n - n1, false);
        for (auto& v : b) {
            v += 0.5 * (trial % 3);
        }
        const auto exact = stats::mann_whitney_u_two_sided(a, b, stats::MwuMethod::exact);
        const auto approx = stats::mann_whitney_u_two_sided(a, b, stats::MwuMethod::asymptotic);
        CHECK(exact.statistic == approx.statistic);
        worst = std::max(worst, std::abs(exact.p_value - approx.p_value));
    }
    CHECK(worst < 0.05);
}

TEST_CASE("mann-whitney automatic mode picks exact for small samples") {
    const std::vector<double> a{0.1, 0.5, 0.9}, b{0.2, 1.5, 2.0, 3.0};
    CHECK(stats::mann_whitney_u_two_sided(a, b).p_value == stats::mann_whitney_u_two_sided(a, b, stats::MwuMethod::exact).p_value);
    CHECK(stats::mann_whitney_u_two_sided(b, a).statistic == Approx(12.0 - stats::mann_whitney_u_two_sided(a, b).statistic));
}

TEST_CASE("kolmogorov-smirnov examples") {
    const std::vector<double> a{1, 2, 3};
    const auto same = stats::ks_two_sample(a, a);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);
    CHECK(stats::ks_two_sample(a, std::vector<double>{10, 11, 12}).statistic == 1.0);

    const std::vector<double> x{1, 2, 3, 4}, y{2, 3, 4, 5};
    const auto r = stats::ks_two_sample(x, y);
    CHECK(r.statistic == Approx(0.25));
    CHECK(oracle::ks_permutation_p(x, y) == Approx(1.0));
    CHECK(std::abs(r.p_value - oracle::ks_permutation_p(x, y)) < 1e-3);
}

TEST_CASE("kolmogorov-smirnov matches oracles") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = oracle::random_sample(rng, 1 + trial % 13, trial % 4 == 0);
        const auto b = oracle::random_sample(rng, 1 + (trial * 5) % 17, trial % 4 == 0);
        const auto r = stats::ks_two_sample(a, b);
        REQUIRE(r.statistic == Approx(oracle::ks_statistic(a, b)).epsilon(1e-12));
        const double ne = static_cast<double>(a.size() * b.size()) / static_cast<double>(a.size() + b.size());
        REQUIRE(std::abs(r.p_value - oracle::kolmogorov_tail(std::sqrt(ne) * r.statistic)) < 1e-9);
    }
}

TEST_CASE("kolmogorov survival function") {
    CHECK(stats::kolmogorov_survival(0.0) == 1.0);
    CHECK(stats::kolmogorov_survival(1.3580986393225507) == Approx(0.05).epsilon(1e-6));
    CHECK(stats::kolmogorov_survival(10.0) == Approx(0.0).epsilon(1e-12));
    double previous = 1.0;
    for (double x = 0.05; x < 3.0; x += 0.01) {
        const double q = stats::kolmogorov_survival(x);
        CHECK(q <= previous + 1e-15);
        CHECK(std::abs(q - oracle::kolmogorov_tail(x)) < 1e-9);
        previous = q;
    }
}

TEST_CASE("kolmogorov-smirnov is invariant under monotone transforms") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = oracle::random_sample(rng, 8, false);
        auto b = oracle::random_sample(rng, 11, false);
        const auto before = stats::ks_two_sample(a, b);
        for (auto* s : {&a, &b}) {
            for (auto& v : *s) {
                v = std::exp(3.0 * v) + 7.0;
            }
        }
        const auto after = stats::ks_two_sample(a, b);
        CHECK(before.statistic == Approx(after.statistic));
        CHECK(before.p_value == Approx(after.p_value));
    }
}

TEST_CASE("benjamini-hochberg examples") {
    CHECK(stats::benjamini_hochberg(std::vector<double>{0.5}) == std::vector<double>{0.5});
    const auto r = stats::benjamini_hochberg(std::vector<double>{0.01, 0.02, 0.03, 0.04});
    for (double v : r) {
        CHECK(v == Approx(0.04));
    }
    CHECK(stats::benjamini_hochberg(std::vector<double>{1.0, 1.0}) == std::vector<double>{1.0, 1.0});
    CHECK(stats::benjamini_hochberg(std::vector<double>{}).empty());
    CHECK_THROWS_AS(stats::benjamini_hochberg(std::vector<double>{1.5}), std::invalid_argument);
    CHECK_THROWS_AS(stats::benjamini_hochberg(std::vector<double>{-0.1}), std::invalid_argument);
}

TEST_CASE("benjamini-hochberg matches its definition") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> p(1 + trial % 25);
        for (auto& v : p) {
            v = trial % 3 == 0 ? std::round(u(rng) * 10.0) / 10.0 : u(rng) * u(rng);
        }
        const auto got = stats::benjamini_hochberg(p);
        const auto expected = oracle::bh(p);
        for (std::size_t k = 0; k < p.size(); ++k) {
            REQUIRE(std::abs(got[k] - expected[k]) < 1e-12);
            REQUIRE(got[k] >= p[k]);
            for (std::size_t l = 0; l < p.size(); ++l) {
                if (p[k] < p[l]) {
                    REQUIRE(got[k] <= got[l]);
                }
            }
        }
    }
}

TEST_CASE("pearson correlation") {
    CHECK(stats::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == Approx(1.0));
    CHECK(stats::pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) == Approx(-1.0));
    CHECK(stats::pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}) == 0.0);
    CHECK_THROWS_AS(stats::pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(stats::pearson(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = oracle::random_sample(rng, 10, false);
        const auto y = oracle::random_sample(rng, 10, false);
        auto x2 = x, y2 = y;
        for (auto& v : x2) {
            v = 3.0 * v - 2.0;
        }
        for (auto& v : y2) {
            v = 0.5 * v + 100.0;
        }
        CHECK(stats::pearson(x, y) == Approx(stats::pearson(x2, y2)).epsilon(1e-10));
    }
}

TEST_CASE("row z-scores") {
    Matrix m(3, 3);
    m << 1, 2, 3,
         5, 5, 5,
         -1, 0, 4;
    const Matrix z = stats::zscore_rows(m);
    CHECK(z(0, 0) == Approx(-1.224744871391589));
    CHECK(z(0, 1) == Approx(0.0));
    CHECK(z(0, 2) == Approx(1.224744871391589));
    CHECK(z.row(1).isZero());
    for (Eigen::Index r : {0, 2}) {
        CHECK(z.row(r).mean() == Approx(0.0).epsilon(1e-12));
        CHECK(std::sqrt(z.row(r).array().square().mean()) == Approx(1.0));
    }
    CHECK((stats::zscore_rows(z) - z).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("summary helpers") {
    CHECK(stats::mean(std::vector<double>{1, 2, 6}) == Approx(3.0));
    CHECK(stats::median({3, 1, 2}) == 2.0);
    CHECK(stats::median({4, 1, 2, 3}) == 2.5);
    CHECK_THROWS_AS(stats::median({}), std::invalid_argument);
    CHECK(stats::normal_survival(0.0) == Approx(0.5));
    CHECK(stats::normal_survival(1.959963984540054) == Approx(0.025).epsilon(1e-9));
    CHECK(stats::normal_survival(10.0) > 0.0);
}
