#include "grnbench/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace grnbench;
using doctest::Approx;

namespace {

WeightedAdjacency chain(double w1, double w2) {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 1) = w1;
    a(1, 2) = w2;
    return WeightedAdjacency(a);
}

SemConfig noiseless(std::size_t d) {
    SemConfig c;
    c.d = d;
    c.noise_scale = 0.0;
    c.measurement_noise_scale = 0.0;
    return c;
}

}  // namespace

TEST_CASE("generate_dag") {
    SemConfig c;
    c.d = 8;
    c.expected_degree = 0.0;
    CHECK(synth::generate_dag(c).num_edges() == 0);

    c.d = 50;
    c.expected_degree = 2.0;
    c.seed = 13;
    const auto g = synth::generate_dag(c);
    CHECK(is_acyclic(g));
    CHECK(g.matrix() == synth::generate_dag(c).matrix());
    // Roughly expected_degree * d / 2 edges.
    CHECK(g.num_edges() > 25);
    CHECK(g.num_edges() < 80);
    for (const auto& e : g.nonzero_edges()) {
        CHECK(e.score >= c.weight_low);
        CHECK(e.score <= c.weight_high);
    }
    c.seed = 14;
    CHECK(synth::generate_dag(c).matrix() != g.matrix());

    for (std::uint64_t s = 0; s < 20; ++s) {
        SemConfig dense;
        dense.d = 6;
        dense.expected_degree = 10.0;
        dense.seed = s;
        const auto full = synth::generate_dag(dense);
        CHECK(full.num_edges() == 15);
        CHECK(is_acyclic(full));
    }
}

TEST_CASE("transitive weight closure") {
    CHECK(synth::transitive_weight_closure(WeightedAdjacency::zeros(3)).matrix().isZero());
    const auto c = synth::transitive_weight_closure(chain(2.0, -3.0));
    CHECK(c(0, 1) == Approx(2.0));
    CHECK(c(1, 2) == Approx(-3.0));
    CHECK(c(0, 2) == Approx(-6.0));
    CHECK(c(2, 0) == 0.0);

    Matrix cyclic = Matrix::Zero(2, 2);
    cyclic(0, 1) = cyclic(1, 0) = 0.5;
    CHECK_THROWS_AS(synth::transitive_weight_closure(WeightedAdjacency(cyclic)), std::invalid_argument);
}

TEST_CASE("transitive weight closure agrees with the matrix inverse") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        SemConfig c;
        c.d = 2 + s % 9;
        c.expected_degree = 2.5;
        c.seed = s;
        const auto dag = synth::generate_dag(c);
        const auto d = static_cast<Eigen::Index>(c.d);
        const Matrix expected = (Matrix::Identity(d, d) - dag.matrix()).inverse() - Matrix::Identity(d, d);
        CHECK((synth::transitive_weight_closure(dag).matrix() - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("linear sem propagation and hard interventions") {
    auto cfg = noiseless(3);
    auto [zero, t0] = synth::simulate_sem(WeightedAdjacency::zeros(3), 5, 2, {0}, cfg);
    CHECK(zero.values().isZero());

    cfg.noise_scale = 1.0;
    cfg.intervention_value = 2.5;
    cfg.seed = 3;
    const auto dag = chain(1.5, -0.5);
    auto [data, truth] = synth::simulate_sem(dag, 40, 10, {0, 2}, cfg);
    CHECK(truth.dag.matrix() == dag.matrix());
    CHECK(data.num_cells() == 60);
    CHECK(data.observational_rows().size() == 40);
    CHECK(data.perturbed_rows(0).size() == 10);
    CHECK(data.perturbed_rows(0).front() == 40);
    CHECK(data.perturbed_rows(2).size() == 10);
    for (auto r : data.perturbed_rows(0)) {
        CHECK(data.values()(static_cast<Eigen::Index>(r), 0) == 2.5);
    }
    for (auto r : data.perturbed_rows(2)) {
        CHECK(data.values()(static_cast<Eigen::Index>(r), 2) == 2.5);
    }

    auto quiet = noiseless(3);
    quiet.intervention_value = 4.0;
    auto [clamped, t1] = synth::simulate_sem(dag, 1, 1, {0, 1}, quiet);
    const auto& x = clamped.values();
    CHECK(x(1, 0) == 4.0);
    CHECK(x(1, 1) == Approx(6.0));
    CHECK(x(1, 2) == Approx(-3.0));
    CHECK(x(2, 1) == 4.0);
    CHECK(x(2, 2) == Approx(-2.0));
}

TEST_CASE("observational sem rows satisfy x = xA + noise") {
    SemConfig c;
    c.d = 12;
    c.seed = 9;
    const auto dag = synth::generate_dag(c);
    c.noise_scale = 0.0;
    auto [data, truth] = synth::simulate_sem(dag, 50, 0, {}, c);
    const Matrix& x = data.values();
    CHECK((x - x * dag.matrix()).cwiseAbs().maxCoeff() < 1e-9);

    c.noise_scale = 1.0;
    auto [a, ta] = synth::simulate_sem(dag, 20, 3, {1, 4}, c);
    auto [b, tb] = synth::simulate_sem(dag, 20, 3, {1, 4}, c);
    CHECK(a.values() == b.values());
    c.seed = 10;
    auto [other, to] = synth::simulate_sem(dag, 20, 3, {1, 4}, c);
    CHECK(other.values() != a.values());
}

TEST_CASE("sem generator rejects bad input") {
    Matrix cyclic = Matrix::Zero(2, 2);
    cyclic(0, 1) = cyclic(1, 0) = 0.5;
    SemConfig c;
    c.d = 2;
    CHECK_THROWS_AS(synth::simulate_sem(WeightedAdjacency(cyclic), 5, 0, {}, c), std::invalid_argument);
    CHECK_THROWS_AS(synth::simulate_sem(WeightedAdjacency::zeros(2), 5, 1, {7}, c), std::invalid_argument);
    CHECK_THROWS_AS(synth::simulate_sem(WeightedAdjacency::zeros(2), 0, 0, {}, c), std::invalid_argument);
    CHECK_THROWS_AS(synth::simulate_few_root_causes(WeightedAdjacency(cyclic), 5, c), std::invalid_argument);
}

TEST_CASE("few root causes model") {
    auto c = noiseless(3);
    c.root_cause_prob = 0.0;
    auto [zeros, t0] = synth::simulate_few_root_causes(chain(1.0, 1.0), 10, c);
    CHECK(zeros.values().isZero());
    CHECK_FALSE(zeros.has_interventions());

    c.root_cause_prob = 0.3;
    c.seed = 4;
    Matrix roots;
    auto [plain, t1] = synth::simulate_few_root_causes(WeightedAdjacency::zeros(3), 30, c, &roots);
    CHECK(plain.values() == roots);
    CHECK((roots.array() >= 0.0).all());
    CHECK(roots.maxCoeff() <= c.root_cause_magnitude);

    // One root cause at the head of a single edge.
    Matrix single = Matrix::Zero(2, 2);
    single(0, 1) = -0.7;
    auto one = noiseless(2);
    one.root_cause_prob = 1.0;
    one.seed = 1;
    auto [row, t2] = synth::simulate_few_root_causes(WeightedAdjacency(single), 1, one, &roots);
    CHECK(row.values()(0, 0) == Approx(roots(0, 0)));
    CHECK(row.values()(0, 1) == Approx(roots(0, 1) - 0.7 * roots(0, 0)));
}

TEST_CASE("noiseless root causes are recovered by the inverse transform") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        SemConfig c = noiseless(10);
        c.seed = s;
        const auto dag = synth::generate_dag(c);
        Matrix roots;
        auto [data, truth] = synth::simulate_few_root_causes(dag, 200, c, &roots);
        const Matrix recovered = data.values() * (Matrix::Identity(10, 10) - dag.matrix());
        CHECK((recovered - roots).cwiseAbs().maxCoeff() < 1e-9);
        const double density = static_cast<double>((roots.array() != 0.0).count()) / static_cast<double>(roots.size());
        CHECK(density > 0.05);
        CHECK(density < 0.15);
    }
}
