#include "grnbench/methods.hpp"
#include "grnbench/stats.hpp"
#include "grnbench/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

using namespace grnbench;
using doctest::Approx;

namespace {

gbm::GbmParams quick_regression() {
    auto p = gbm::regression_defaults();
    p.num_iterations = 30;
    return p;
}

gbm::GbmParams quick_classifier() {
    auto p = gbm::classifier_defaults();
    p.num_iterations = 50;
    return p;
}

void check_edge_list(const RankedEdgeList& edges, std::size_t m) {
    std::set<std::pair<GeneIndex, GeneIndex>> seen;
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) {
        REQUIRE(e.parent != e.child);
        REQUIRE(e.parent < m);
        REQUIRE(e.child < m);
        REQUIRE(seen.insert({e.parent, e.child}).second);
        REQUIRE(e.score <= previous);
        previous = e.score;
    }
}

Matrix noise_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            x(r, c) = normal(rng);
        }
    }
    return x;
}

// Chain 0 -> 1 -> 2 plus an isolated gene 3.
std::pair<ExpressionDataset, WeightedAdjacency> chain_dataset(std::vector<GeneIndex> intervened, std::uint64_t seed, double value = -3.0) {
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = 1.2;
    a(1, 2) = 1.0;
    SemConfig c;
    c.d = 4;
    c.seed = seed;
    c.intervention_value = value;
    WeightedAdjacency dag(a);
    auto [data, truth] = synth::simulate_sem(dag, 300, 60, intervened, c);
    return {data, dag};
}

}  // namespace

TEST_CASE("grnboost scores find the predictive parent") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x = noise_matrix(300, 4, 2);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        x(r, 1) = 2.0 * x(r, 0) + 0.05 * normal(rng);
    }
    const ExpressionDataset data(x, default_gene_names(4), std::vector<Intervention>(300));
    const Matrix g = methods::grnboost_scores(data, quick_regression());
    CHECK(g.diagonal().isZero());
    CHECK((g.array() >= 0.0).all());
    Eigen::Index best = 0;
    g.col(1).maxCoeff(&best);
    CHECK(best == 0);
    CHECK(methods::grnboost_scores(data, quick_regression(), 3) == g);

    const auto top = methods::grnboost(data, 2, quick_regression());
    REQUIRE(top.size() == 2);
    std::set<std::pair<GeneIndex, GeneIndex>> pairs;
    for (const auto& e : top) {
        pairs.insert({e.parent, e.child});
    }
    CHECK(pairs == std::set<std::pair<GeneIndex, GeneIndex>>{{0, 1}, {1, 0}});
}

TEST_CASE("grnboost on independent noise has no dominant winner") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        const ExpressionDataset data(noise_matrix(200, 6, 10 + s), default_gene_names(6), std::vector<Intervention>(200));
        const Matrix g = methods::grnboost_scores(data, quick_regression());
        for (Eigen::Index j = 0; j < 6; ++j) {
            std::vector<double> column;
            for (Eigen::Index i = 0; i < 6; ++i) {
                if (i != j) {
                    column.push_back(g(i, j));
                }
            }
            const double med = stats::median(column);
            CHECK(*std::max_element(column.begin(), column.end()) <= 10.0 * med);
        }
    }
}

TEST_CASE("grnboost with two genes") {
    const ExpressionDataset data(noise_matrix(50, 2, 4), default_gene_names(2), std::vector<Intervention>(50));
    const Matrix g = methods::grnboost_scores(data, quick_regression());
    CHECK(g(0, 0) == 0.0);
    CHECK(g(1, 1) == 0.0);
    CHECK(g(0, 1) > 0.0);
    CHECK(g(1, 0) > 0.0);
}

TEST_CASE("top_k_by_score") {
    Matrix s(3, 3);
    s << 9, 1, 5,
         5, 9, 0,
         2, 3, 9;
    const auto top = methods::top_k_by_score(s, 3);
    REQUIRE(top.size() == 3);
    CHECK(top.edges()[0].parent == 0);
    CHECK(top.edges()[0].child == 2);
    CHECK(top.edges()[1].parent == 1);
    CHECK(top.edges()[1].child == 0);
    CHECK(top.edges()[2].score == 3.0);
    CHECK(methods::top_k_by_score(s, 100).size() == 6);
}

TEST_CASE("interventional p-values") {
    auto [data, dag] = chain_dataset({0, 3}, 5);
    Eigen::MatrixXi tested;
    const Matrix p = methods::interventional_pvalues(data, &tested);
    CHECK(p.diagonal() == Vector::Ones(4));
    CHECK((p.array() >= 0.0).all());
    CHECK((p.array() <= 1.0).all());
    for (Eigen::Index j = 0; j < 4; ++j) {
        if (j != 1) {
            CHECK(p(1, j) == methods::kDefaultPValue);
            CHECK(tested(1, j) == 0);
        }
    }
    CHECK(tested(0, 1) == 1);
    CHECK(p(0, 1) < 1e-6);
    CHECK(p(0, 2) < 1e-6);
    CHECK(p(0, 3) > 0.01);

    const auto obs_only = data.without_intervention_labels();
    const Matrix defaults = methods::interventional_pvalues(obs_only);
    CHECK((defaults.array() == methods::kDefaultPValue || defaults.array() == 1.0).all());
}

TEST_CASE("betterboost puts a strongly shifted child first") {
    auto [data, dag] = chain_dataset({0}, 6);
    const auto top = methods::betterboost(data, 1, quick_regression());
    REQUIRE(top.size() == 1);
    CHECK(top.edges()[0].parent == 0);
    CHECK((top.edges()[0].child == 1 || top.edges()[0].child == 2));

    const auto all = methods::betterboost(data, 100, quick_regression());
    check_edge_list(all, 4);
    // Untested sources carry the default p-value, so 1 - p = 0.95 for them.
    for (const auto& e : all) {
        if (e.parent != 0) {
            CHECK(e.score == Approx(0.95));
        }
    }
}

TEST_CASE("betterboost orders tested pairs before defaults at equal p") {
    auto [data, dag] = chain_dataset({0}, 7);
    const Matrix g = Matrix::Constant(4, 4, 1.0);
    const auto edges = methods::betterboost_from_scores(data, g, 100);
    bool seen_default = false;
    for (const auto& e : edges) {
        if (e.parent != 0) {
            seen_default = true;
        } else {
            CHECK_FALSE(seen_default);
        }
    }
    CHECK_THROWS_AS(methods::betterboost_from_scores(data, Matrix::Zero(3, 3), 5), std::invalid_argument);
}

TEST_CASE("betterboost returns nothing when every gene is perturbed without effect") {
    // Each perturbed block copies the observational block, so every KS p-value is 1.
    const std::size_t m = 4, n_obs = 40;
    const Matrix obs = noise_matrix(n_obs, m, 8);
    Matrix x(static_cast<Eigen::Index>(n_obs * (m + 1)), static_cast<Eigen::Index>(m));
    std::vector<Intervention> labels(n_obs);
    x.topRows(static_cast<Eigen::Index>(n_obs)) = obs;
    for (GeneIndex g = 0; g < m; ++g) {
        x.middleRows(static_cast<Eigen::Index>(n_obs * (g + 1)), static_cast<Eigen::Index>(n_obs)) = obs;
        labels.insert(labels.end(), n_obs, Intervention{g});
    }
    const ExpressionDataset data(x, default_gene_names(m), labels);
    CHECK(methods::betterboost(data, 10, quick_regression()).empty());
}

TEST_CASE("betterboost without interventions reduces to grnboost") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        SemConfig c;
        c.d = 6;
        c.seed = s;
        const auto dag = synth::generate_dag(c);
        auto [data, truth] = synth::simulate_sem(dag, 150, 0, {}, c);
        for (std::size_t k : {1, 5, 30}) {
            CHECK(methods::betterboost(data, k, quick_regression()).same_edges(methods::grnboost(data, k, quick_regression())));
        }
    }
}

TEST_CASE("mean difference") {
    Matrix x(6, 3);
    x << 5, 1, 0,
         5, 1, 0,
         3, 1, 0,
         3, 1, 0,
         7, 4, 0,
         9, 6, 0;
    const ExpressionDataset data(x, default_gene_names(3), {std::nullopt, std::nullopt, 1, 1, 2, 2});
    const auto edges = methods::mean_difference(data, 10);
    check_edge_list(edges, 3);
    REQUIRE(edges.size() == 4);
    CHECK(edges.edges()[0].parent == 2);
    CHECK(edges.edges()[0].child == 1);
    CHECK(edges.edges()[0].score == Approx(4.0));
    CHECK(edges.edges()[1].score == Approx(3.0));
    CHECK(edges.edges()[2].parent == 1);
    CHECK(edges.edges()[2].child == 0);
    CHECK(edges.edges()[2].score == Approx(2.0));
    CHECK(edges.edges()[3].score == 0.0);
    for (const auto& e : edges) {
        CHECK(e.parent != 0);
    }
    CHECK(methods::mean_difference(data, 1).size() == 1);

    const ExpressionDataset obs(x, default_gene_names(3), std::vector<Intervention>(6));
    CHECK_THROWS_AS(methods::mean_difference(obs, 5), std::invalid_argument);
    const ExpressionDataset no_controls(x, default_gene_names(3), {1, 1, 1, 1, 2, 2});
    CHECK_THROWS_AS(methods::mean_difference(no_controls, 5), std::invalid_argument);
}

TEST_CASE("mean difference on a chain and under row shuffles") {
    auto [data, dag] = chain_dataset({0, 3}, 9);
    const auto edges = methods::mean_difference(data, 2);
    REQUIRE(edges.size() == 2);
    for (const auto& e : edges) {
        CHECK(e.parent == 0);
        CHECK(e.child != 3);
    }
    auto all = methods::mean_difference(data, 100);
    for (const auto& e : all) {
        if (e.parent == 3 || e.child == 3) {
            CHECK(e.score < 0.5);
        }
    }

    std::vector<std::size_t> rows(data.num_cells());
    std::iota(rows.begin(), rows.end(), 0);
    std::mt19937_64 rng(3);
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto shuffled = methods::mean_difference(data.select_rows(rows), 100);
    REQUIRE(shuffled.size() == all.size());
    for (std::size_t k = 0; k < all.size(); ++k) {
        CHECK(shuffled.edges()[k].score == Approx(all.edges()[k].score).epsilon(1e-12));
    }
}

TEST_CASE("guanlab pair labels and features") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix x = noise_matrix(400, 4, 12);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        x(r, 1) = x(r, 0) + 0.01 * normal(rng);
    }
    std::vector<Intervention> labels(400);
    for (std::size_t r = 300; r < 400; ++r) {
        labels[r] = GeneIndex{2};
    }
    const ExpressionDataset data(x, default_gene_names(4), labels);
    const auto table = methods::guanlab_pairs(data, 0);
    REQUIRE(table.pairs.size() == 12);
    REQUIRE(table.features.rows() == 12);
    REQUIRE(table.features.cols() == 4);
    for (std::size_t k = 0; k < table.pairs.size(); ++k) {
        const auto [i, j] = table.pairs[k];
        const auto row = static_cast<Eigen::Index>(k);
        const bool linked = (i == 0 && j == 1) || (i == 1 && j == 0);
        CHECK((table.labels[k] == 1.0) == (std::abs(table.correlations[k]) > methods::kGuanlabCorrelationThreshold));
        if (linked) {
            CHECK(table.labels[k] == 1.0);
        }
        if (i != 2) {
            CHECK(table.features(row, 2) == 0.0);
            CHECK(std::isnan(table.features(row, 3)));
        } else {
            CHECK(std::isfinite(table.features(row, 3)));
        }
    }
    const auto again = methods::guanlab_pairs(data, 0);
    CHECK(again.correlations == table.correlations);

    const auto edges = methods::guanlab(data, 1000, quick_classifier());
    check_edge_list(edges, 4);
    CHECK(edges.size() == 12);
    CHECK(methods::guanlab(data, 3, quick_classifier()).size() == 3);
}

TEST_CASE("guanlab fails without both label classes") {
    const ExpressionDataset flat(Matrix::Ones(30, 3), default_gene_names(3), std::vector<Intervention>(30));
    CHECK_THROWS_AS(methods::guanlab(flat, 10, quick_classifier()), std::invalid_argument);
}

TEST_CASE("acyclicity function") {
    CHECK(methods::acyclicity(Matrix::Zero(5, 5)) == Approx(0.0).epsilon(1e-15));
    Matrix two = Matrix::Zero(2, 2);
    two(0, 1) = two(1, 0) = 1.0;
    CHECK(methods::acyclicity(two) > 0.1);
    Matrix dag = Matrix::Zero(3, 3);
    dag(0, 1) = 2.0;
    dag(1, 2) = -1.0;
    CHECK(std::abs(methods::acyclicity(dag)) < 1e-12);
}

TEST_CASE("cycle breaking removes the weakest edge") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = 0.9;
    a(1, 2) = 0.8;
    a(2, 0) = -0.4;
    CHECK(methods::break_cycles(a) == 1);
    CHECK(a(2, 0) == 0.0);
    CHECK(a(0, 1) == 0.9);
    CHECK(methods::break_cycles(a) == 0);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::bernoulli_distribution coin(0.4);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix r = Matrix::Zero(6, 6);
        for (Eigen::Index i = 0; i < 6; ++i) {
            for (Eigen::Index j = 0; j < 6; ++j) {
                if (i != j && coin(rng)) {
                    r(i, j) = u(rng);
                }
            }
        }
        methods::break_cycles(r);
        CHECK(topological_order(r).has_value());
    }
}

TEST_CASE("sparserc recovers a small few-root-causes DAG") {
    SemConfig c;
    c.d = 5;
    c.seed = 2;
    c.noise_scale = 0.0;
    const auto dag = synth::generate_dag(c);
    auto [data, truth] = synth::simulate_few_root_causes(dag, 1000, c);
    const auto result = methods::sparserc(data);
    check_edge_list(result.edges, 5);
    CHECK(shd(result.edges, dag) <= 1);
    CHECK(topological_order(result.pruned).has_value());
    CHECK(result.weights.rows() == 5);
    CHECK(result.outer_iterations >= 1);
}

TEST_CASE("sparserc on pure noise returns a sparse acyclic graph") {
    for (std::uint64_t s = 0; s < 2; ++s) {
        const ExpressionDataset data(noise_matrix(300, 6, 30 + s), default_gene_names(6), std::vector<Intervention>(300));
        methods::SparseRcOptions o;
        o.max_outer_iterations = 8;
        const auto result = methods::sparserc(data, o);
        CHECK(result.edges.size() <= 6);
        CHECK(topological_order(result.pruned).has_value());
    }
}

TEST_CASE("sparserc mask ignores the residual of clamped genes") {
    auto [data, dag] = chain_dataset({1}, 11, 5.0);
    methods::SparseRcOptions o;
    o.max_outer_iterations = 6;
    const auto masked = methods::sparserc(data, o);
    check_edge_list(masked.edges, 4);
    CHECK(topological_order(masked.pruned).has_value());
    o.max_edges = 1;
    CHECK(methods::sparserc(data, o).edges.size() <= 1);
}
