#include "grnbench/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace grnbench::synth {

namespace {

std::vector<std::size_t> require_dag(const WeightedAdjacency& dag) {
    auto order = topological_order(dag.matrix());
    if (!order) {
        throw std::invalid_argument("generator requires an acyclic graph");
    }
    return std::move(*order);
}

double draw_normal(std::mt19937_64& rng, double scale) {
    if (scale == 0.0) {
        return 0.0;
    }
    std::normal_distribution<double> dist(0.0, scale);
    return dist(rng);
}

}  // namespace

WeightedAdjacency generate_dag(const SemConfig& cfg) {
    cfg.validate();
    const auto d = cfg.d;
    std::mt19937_64 rng(cfg.seed);

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    const double edge_prob = std::min(1.0, cfg.expected_degree / static_cast<double>(d - 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(cfg.weight_low, cfg.weight_high);

    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t p = 0; p < d; ++p) {
        for (std::size_t q = p + 1; q < d; ++q) {
            if (unit(rng) >= edge_prob) {
                continue;
            }
            const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
            a(static_cast<Eigen::Index>(order[p]), static_cast<Eigen::Index>(order[q])) = sign * magnitude(rng);
        }
    }
    return WeightedAdjacency(std::move(a));
}

WeightedAdjacency transitive_weight_closure(const WeightedAdjacency& dag) {
    require_dag(dag);
    const auto& a = dag.matrix();
    Matrix closure = Matrix::Zero(a.rows(), a.cols());
    Matrix power = a;
    // Nilpotent: A^d = 0 for a DAG on d nodes.
    for (std::size_t k = 1; k < dag.dim() && !power.isZero(0.0); ++k) {
        closure += power;
        power = power * a;
    }
    closure.diagonal().setZero();
    return WeightedAdjacency(std::move(closure));
}

std::pair<ExpressionDataset, SyntheticGroundTruth> simulate_sem(const WeightedAdjacency& dag, std::size_t n_obs, std::size_t n_per_intervention,
                                                                const std::vector<GeneIndex>& intervened_genes, const SemConfig& cfg) {
    cfg.validate();
    const auto order = require_dag(dag);
    const auto d = dag.dim();
    for (auto g : intervened_genes) {
        if (g >= d) {
            throw std::invalid_argument("intervened gene " + std::to_string(g) + " out of range");
        }
    }

    const std::size_t n = n_obs + n_per_intervention * intervened_genes.size();
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    std::vector<Intervention> labels(n);
    std::mt19937_64 rng(cfg.seed);
    const auto& a = dag.matrix();

    std::size_t row = 0;
    auto emit = [&](Intervention target) {
        const auto r = static_cast<Eigen::Index>(row);
        for (auto j : order) {
            const auto jj = static_cast<Eigen::Index>(j);
            if (target && *target == j) {
                x(r, jj) = cfg.intervention_value;
                continue;
            }
            double value = draw_normal(rng, cfg.noise_scale);
            for (std::size_t i = 0; i < d; ++i) {
                const double w = a(static_cast<Eigen::Index>(i), jj);
                if (w != 0.0) {
                    value += x(r, static_cast<Eigen::Index>(i)) * w;
                }
            }
            x(r, jj) = value;
        }
        labels[row] = target;
        ++row;
    };

    for (std::size_t k = 0; k < n_obs; ++k) {
        emit(std::nullopt);
    }
    for (auto g : intervened_genes) {
        for (std::size_t k = 0; k < n_per_intervention; ++k) {
            emit(g);
        }
    }

    if (n == 0) {
        throw std::invalid_argument("simulate_sem: no rows requested");
    }
    return {ExpressionDataset(std::move(x), default_gene_names(d), std::move(labels)), SyntheticGroundTruth{dag, cfg}};
}

std::pair<ExpressionDataset, SyntheticGroundTruth> simulate_few_root_causes(const WeightedAdjacency& dag, std::size_t n, const SemConfig& cfg,
                                                                            Matrix* root_causes) {
    cfg.validate();
    if (n == 0) {
        throw std::invalid_argument("simulate_few_root_causes: no rows requested");
    }
    const auto closure = transitive_weight_closure(dag);
    const auto d = static_cast<Eigen::Index>(dag.dim());
    const auto rows = static_cast<Eigen::Index>(n);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Matrix c = Matrix::Zero(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (unit(rng) < cfg.root_cause_prob) {
                // (0, magnitude]: 1 - U with U in [0, 1) never hits zero.
                c(r, j) = cfg.root_cause_magnitude * (1.0 - unit(rng));
            }
        }
    }
    Matrix input = c;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index j = 0; j < d; ++j) {
            input(r, j) += draw_normal(rng, cfg.noise_scale);
        }
    }
    Matrix x = input + input * closure.matrix();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index j = 0; j < d; ++j) {
            x(r, j) += draw_normal(rng, cfg.measurement_noise_scale);
        }
    }
    if (root_causes != nullptr) {
        *root_causes = std::move(c);
    }
    return {ExpressionDataset(std::move(x), default_gene_names(dag.dim()), std::vector<Intervention>(n)), SyntheticGroundTruth{dag, cfg}};
}

}  // namespace grnbench::synth
