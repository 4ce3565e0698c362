#include "grnbench/methods.hpp"

#include "grnbench/parallel.hpp"
#include "grnbench/stats.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace grnbench::methods {

namespace {

void require_observational(const ExpressionDataset& data, const char* method) {
    if (data.observational_rows().empty()) {
        throw std::invalid_argument(std::string(method) + ": dataset has no observational cells");
    }
}

double column_mean(const Matrix& values, GeneIndex g, const std::vector<std::size_t>& rows) {
    double sum = 0.0;
    for (auto r : rows) {
        sum += values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(g));
    }
    return sum / static_cast<double>(rows.size());
}

}  // namespace

Matrix grnboost_scores(const ExpressionDataset& data, const gbm::GbmParams& params, unsigned threads) {
    gbm::GbmParams regression = params;
    regression.objective = gbm::Objective::squared_error;
    const auto m = data.num_genes();
    const auto n = static_cast<Eigen::Index>(data.num_cells());
    const auto& x = data.values();
    Matrix scores = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));

    // Each target writes only its own column of `scores`.
    parallel_for(m, threads, [&](std::size_t target) {
        Matrix features(n, static_cast<Eigen::Index>(m - 1));
        std::vector<GeneIndex> source_of;
        source_of.reserve(m - 1);
        for (GeneIndex g = 0; g < m; ++g) {
            if (g != target) {
                features.col(static_cast<Eigen::Index>(source_of.size())) = x.col(static_cast<Eigen::Index>(g));
                source_of.push_back(g);
            }
        }
        const Vector y = x.col(static_cast<Eigen::Index>(target));
        const auto model = gbm::fit(features, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())), regression);
        const auto importance = gbm::feature_importance(model);
        for (std::size_t f = 0; f < source_of.size(); ++f) {
            scores(static_cast<Eigen::Index>(source_of[f]), static_cast<Eigen::Index>(target)) = importance[f];
        }
    });
    return scores;
}

RankedEdgeList top_k_by_score(const Matrix& scores, std::size_t k) {
    std::vector<Edge> candidates;
    const auto m = static_cast<std::size_t>(scores.rows());
    candidates.reserve(m * (m - 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j) {
                candidates.push_back({i, j, scores(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
            }
        }
    }
    return RankedEdgeList::top_k(std::move(candidates), k);
}

RankedEdgeList grnboost(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params, unsigned threads) {
    return top_k_by_score(grnboost_scores(data, params, threads), k);
}

Matrix interventional_pvalues(const ExpressionDataset& data, Eigen::MatrixXi* tested) {
    const auto m = data.num_genes();
    const auto dim = static_cast<Eigen::Index>(m);
    Matrix p = Matrix::Constant(dim, dim, kDefaultPValue);
    p.diagonal().setOnes();
    Eigen::MatrixXi ran = Eigen::MatrixXi::Zero(dim, dim);

    const auto perturbed = data.perturbed_genes();
    if (!perturbed.empty()) {
        require_observational(data, "interventional_pvalues");
        std::vector<std::vector<double>> observational(m);
        for (GeneIndex j = 0; j < m; ++j) {
            observational[j] = data.gene_values(j, data.observational_rows());
        }
        std::vector<double> raw;
        std::vector<std::pair<GeneIndex, GeneIndex>> where;
        for (auto i : perturbed) {
            for (GeneIndex j = 0; j < m; ++j) {
                if (j == i) {
                    continue;
                }
                const auto shifted = data.gene_values(j, data.perturbed_rows(i));
                raw.push_back(stats::ks_two_sample(shifted, observational[j]).p_value);
                where.emplace_back(i, j);
            }
        }
        const auto adjusted = stats::benjamini_hochberg(raw);
        for (std::size_t k = 0; k < where.size(); ++k) {
            const auto [i, j] = where[k];
            p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = adjusted[k];
            ran(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1;
        }
    }
    if (tested != nullptr) {
        *tested = std::move(ran);
    }
    return p;
}

RankedEdgeList betterboost_from_scores(const ExpressionDataset& data, const Matrix& predictive_scores, std::size_t k) {
    const auto m = data.num_genes();
    if (static_cast<std::size_t>(predictive_scores.rows()) != m || static_cast<std::size_t>(predictive_scores.cols()) != m) {
        throw std::invalid_argument("betterboost: predictive score matrix has the wrong shape");
    }
    Eigen::MatrixXi tested;
    const Matrix p = interventional_pvalues(data, &tested);

    struct Candidate {
        double p;
        bool is_default;
        double g;
        GeneIndex i;
        GeneIndex j;
    };
    std::vector<Candidate> candidates;
    for (GeneIndex i = 0; i < m; ++i) {
        for (GeneIndex j = 0; j < m; ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            if (i == j || !(p(ii, jj) <= kDefaultPValue)) {
                continue;
            }
            candidates.push_back({p(ii, jj), tested(ii, jj) == 0, predictive_scores(ii, jj), i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.p, a.is_default, b.g, a.i, a.j) < std::tie(b.p, b.is_default, a.g, b.i, b.j);
    });
    if (candidates.size() > k) {
        candidates.resize(k);
    }
    std::vector<Edge> edges;
    edges.reserve(candidates.size());
    for (const auto& c : candidates) {
        edges.push_back({c.i, c.j, 1.0 - c.p});
    }
    return RankedEdgeList(std::move(edges));
}

RankedEdgeList betterboost(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params, unsigned threads) {
    if (k < 1) {
        throw std::invalid_argument("betterboost: k must be at least 1");
    }
    return betterboost_from_scores(data, grnboost_scores(data, params, threads), k);
}

RankedEdgeList mean_difference(const ExpressionDataset& data, std::size_t k) {
    const auto perturbed = data.perturbed_genes();
    if (perturbed.empty()) {
        throw std::invalid_argument("mean_difference: dataset has no perturbed cells");
    }
    require_observational(data, "mean_difference");
    const auto m = data.num_genes();
    const auto& x = data.values();

    std::vector<double> observational_mean(m);
    for (GeneIndex j = 0; j < m; ++j) {
        observational_mean[j] = column_mean(x, j, data.observational_rows());
    }
    std::vector<Edge> candidates;
    for (auto i : perturbed) {
        for (GeneIndex j = 0; j < m; ++j) {
            if (j != i) {
                candidates.push_back({i, j, std::abs(observational_mean[j] - column_mean(x, j, data.perturbed_rows(i)))});
            }
        }
    }
    return RankedEdgeList::top_k(std::move(candidates), k);
}

PairTable guanlab_pairs(const ExpressionDataset& data, std::uint64_t seed) {
    require_observational(data, "guanlab");
    const auto m = data.num_genes();
    const auto& x = data.values();
    const auto& obs_rows = data.observational_rows();
    if (obs_rows.size() < 2) {
        throw std::invalid_argument("guanlab: need at least two observational cells");
    }

    // Observational partner rows for each perturbed source, drawn in ascending source order.
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> partner_rows(m);
    for (auto i : data.perturbed_genes()) {
        const auto want = data.perturbed_rows(i).size();
        auto& chosen = partner_rows[i];
        if (want <= obs_rows.size()) {
            std::sample(obs_rows.begin(), obs_rows.end(), std::back_inserter(chosen), static_cast<std::ptrdiff_t>(want), rng);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, obs_rows.size() - 1);
            for (std::size_t k = 0; k < want; ++k) {
                chosen.push_back(obs_rows[pick(rng)]);
            }
        }
    }

    const Matrix z = stats::zscore_rows(x);
    std::vector<double> z_obs_mean(m);
    for (GeneIndex g = 0; g < m; ++g) {
        z_obs_mean[g] = column_mean(z, g, obs_rows);
    }

    PairTable table;
    const auto num_pairs = m * (m - 1);
    table.pairs.reserve(num_pairs);
    table.features.resize(static_cast<Eigen::Index>(num_pairs), 4);
    table.labels.reserve(num_pairs);
    table.correlations.reserve(num_pairs);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (GeneIndex i = 0; i < m; ++i) {
        const bool perturbed = data.is_perturbed(i);
        std::vector<std::size_t> label_rows;
        if (perturbed) {
            label_rows = data.perturbed_rows(i);
            label_rows.insert(label_rows.end(), partner_rows[i].begin(), partner_rows[i].end());
        } else {
            label_rows = obs_rows;
        }
        const auto xi = data.gene_values(i, label_rows);
        const double z_pert_i = perturbed ? column_mean(z, i, data.perturbed_rows(i)) : 0.0;

        for (GeneIndex j = 0; j < m; ++j) {
            if (j == i) {
                continue;
            }
            const auto row = static_cast<Eigen::Index>(table.pairs.size());
            const double r = stats::pearson(xi, data.gene_values(j, label_rows));
            table.pairs.emplace_back(i, j);
            table.correlations.push_back(r);
            table.labels.push_back(std::abs(r) > kGuanlabCorrelationThreshold ? 1.0 : 0.0);
            table.features(row, 0) = z_obs_mean[i];
            table.features(row, 1) = z_obs_mean[j];
            table.features(row, 2) = z_pert_i;
            table.features(row, 3) = perturbed ? column_mean(z, j, data.perturbed_rows(i)) : nan;
        }
    }
    return table;
}

RankedEdgeList guanlab(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params) {
    const auto table = guanlab_pairs(data, params.seed);
    const auto positives = std::count(table.labels.begin(), table.labels.end(), 1.0);
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(table.labels.size())) {
        throw std::invalid_argument("guanlab: correlation labels are all one class; classifier undefined");
    }
    gbm::GbmParams classifier = params;
    classifier.objective = gbm::Objective::binary_logloss;
    const auto model = gbm::fit(table.features, table.labels, classifier);
    const auto prob = gbm::predict(model, table.features);

    std::vector<Edge> candidates;
    candidates.reserve(table.pairs.size());
    for (std::size_t r = 0; r < table.pairs.size(); ++r) {
        candidates.push_back({table.pairs[r].first, table.pairs[r].second, prob[r]});
    }
    return RankedEdgeList::top_k(std::move(candidates), k);
}

double acyclicity(const Matrix& a) {
    const Matrix squared = a.cwiseProduct(a);
    return squared.exp().trace() - static_cast<double>(a.rows());
}

std::size_t break_cycles(Matrix& a) {
    const auto d = static_cast<std::size_t>(a.rows());
    std::size_t removed = 0;
    while (!topological_order(a)) {
        // Iterative DFS; the first back edge closes a cycle along the current path.
        std::vector<int> state(d, 0);  // 0 new, 1 on path, 2 done
        std::vector<std::size_t> path;
        std::vector<std::size_t> next_child;
        std::vector<std::size_t> cycle;
        for (std::size_t start = 0; start < d && cycle.empty(); ++start) {
            if (state[start] != 0) {
                continue;
            }
            path = {start};
            next_child = {0};
            state[start] = 1;
            while (!path.empty() && cycle.empty()) {
                const auto node = path.back();
                auto& c = next_child.back();
                if (c == d) {
                    state[node] = 2;
                    path.pop_back();
                    next_child.pop_back();
                    continue;
                }
                const auto child = c++;
                if (a(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(child)) == 0.0) {
                    continue;
                }
                if (state[child] == 1) {
                    const auto pos = std::find(path.begin(), path.end(), child);
                    cycle.assign(pos, path.end());
                } else if (state[child] == 0) {
                    state[child] = 1;
                    path.push_back(child);
                    next_child.push_back(0);
                }
            }
        }
        if (cycle.empty()) {
            break;
        }
        std::size_t weakest_from = cycle.back(), weakest_to = cycle.front();
        double weakest = std::abs(a(static_cast<Eigen::Index>(weakest_from), static_cast<Eigen::Index>(weakest_to)));
        for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
            const double w = std::abs(a(static_cast<Eigen::Index>(cycle[k]), static_cast<Eigen::Index>(cycle[k + 1])));
            if (w < weakest) {
                weakest = w;
                weakest_from = cycle[k];
                weakest_to = cycle[k + 1];
            }
        }
        a(static_cast<Eigen::Index>(weakest_from), static_cast<Eigen::Index>(weakest_to)) = 0.0;
        ++removed;
    }
    return removed;
}

namespace {

struct SmoothL1Objective {
    const Matrix& x;
    const Eigen::ArrayXXd& mask;
    double delta;
    double scale;  // 1 / (2n)

    /// Value and gradient of the masked Huber loss at `a`.
    double evaluate(const Matrix& a, Matrix& grad) const {
        const Eigen::ArrayXXd residual = (x - x * a).array();
        const Eigen::ArrayXXd abs_r = residual.abs();
        const Eigen::ArrayXXd loss = (abs_r <= delta).select(residual.square() / (2.0 * delta), abs_r - 0.5 * delta);
        const Eigen::ArrayXXd psi = (residual / delta).max(-1.0).min(1.0) * mask;
        grad = -scale * (x.transpose() * psi.matrix());
        return scale * (loss * mask).sum();
    }
};

}  // namespace

SparseRcResult sparserc(const ExpressionDataset& data, const SparseRcOptions& opts) {
    const auto d = static_cast<Eigen::Index>(data.num_genes());
    const auto n = static_cast<Eigen::Index>(data.num_cells());
    const Matrix& x = data.values();

    Eigen::ArrayXXd mask = Eigen::ArrayXXd::Ones(n, d);
    if (opts.use_intervention_mask) {
        for (Eigen::Index r = 0; r < n; ++r) {
            if (const auto& label = data.intervention()[static_cast<std::size_t>(r)]) {
                mask(r, static_cast<Eigen::Index>(*label)) = 0.0;
            }
        }
    }
    const SmoothL1Objective objective{x, mask, opts.huber_delta, 1.0 / (2.0 * static_cast<double>(n))};

    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    Matrix a = Matrix::Zero(d, d);
    Matrix grad(d, d), grad_h(d, d);
    double alpha = 0.0;
    double rho = opts.rho_initial;
    double h = acyclicity(a);
    double h_previous = std::numeric_limits<double>::infinity();

    SparseRcResult result;
    double best_h = std::numeric_limits<double>::infinity();
    Matrix best_a = a;

    for (int outer = 0; outer < opts.max_outer_iterations; ++outer) {
        result.outer_iterations = outer + 1;
        Matrix first = Matrix::Zero(d, d), second = Matrix::Zero(d, d);
        double window_start = std::numeric_limits<double>::infinity();
        constexpr int kWindow = 100;

        for (int step = 1; step <= opts.max_inner_steps; ++step) {
            const double loss = objective.evaluate(a, grad);
            const Matrix squared = a.cwiseProduct(a);
            const Matrix expm = squared.exp();
            h = expm.trace() - static_cast<double>(d);
            grad_h = expm.transpose().cwiseProduct(2.0 * a);
            grad += (alpha + rho * h) * grad_h;
            grad.diagonal().setZero();

            first = beta1 * first + (1.0 - beta1) * grad;
            second = beta2 * second + (1.0 - beta2) * grad.cwiseProduct(grad);
            const double c1 = 1.0 - std::pow(beta1, step);
            const double c2 = 1.0 - std::pow(beta2, step);
            a.array() -= opts.learning_rate * (first.array() / c1) / ((second.array() / c2).sqrt() + eps);
            a.diagonal().setZero();

            if (step % kWindow == 0) {
                const double total = loss + alpha * h + 0.5 * rho * h * h;
                if (std::abs(window_start - total) <= opts.inner_tolerance * std::max(1.0, std::abs(total))) {
                    break;
                }
                window_start = total;
            }
        }

        h = acyclicity(a);
        if (h < best_h) {
            best_h = h;
            best_a = a;
        }
        if (h < opts.h_tolerance) {
            result.converged = true;
            break;
        }
        if (h > opts.h_progress * h_previous) {
            rho = std::min(rho * opts.rho_growth, opts.rho_max);
        }
        alpha += rho * h;
        h_previous = h;
    }

    if (!result.converged) {
        a = best_a;
        h = best_h;
    }
    result.weights = a;
    result.h = h;

    Matrix pruned = (a.array().abs() > opts.edge_threshold).select(a, 0.0);
    pruned.diagonal().setZero();
    result.cycle_edges_removed = break_cycles(pruned);
    result.pruned = pruned;

    std::vector<Edge> candidates;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (pruned(i, j) != 0.0) {
                candidates.push_back({static_cast<GeneIndex>(i), static_cast<GeneIndex>(j), std::abs(pruned(i, j))});
            }
        }
    }
    result.edges = RankedEdgeList::top_k(std::move(candidates), opts.max_edges);
    return result;
}

}  // namespace grnbench::methods
