#include "grnbench/eval.hpp"

#include "grnbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace grnbench::eval {

namespace {

constexpr double kFractionTolerance = 1e-9;

void require_observational(const ExpressionDataset& test) {
    if (test.observational_rows().empty()) {
        throw std::invalid_argument("evaluation requires observational test cells");
    }
}

void require_genes(const RankedEdgeList& graph, const ExpressionDataset& test) {
    if (graph.min_gene_count() > test.num_genes()) {
        throw std::invalid_argument("graph references genes beyond the test dataset");
    }
}

std::optional<double> value_at(const std::vector<FractionPoint>& points, double fraction) {
    for (const auto& p : points) {
        if (std::abs(p.fraction - fraction) < kFractionTolerance) {
            return p.mean_wasserstein;
        }
    }
    return std::nullopt;
}

}  // namespace

void EvalConfig::validate() const {
    if (!(mwu_alpha > 0.0 && mwu_alpha < 1.0)) {
        throw std::invalid_argument("EvalConfig: mwu_alpha must lie in (0, 1)");
    }
    if (negative_pair_sample_size < 1) {
        throw std::invalid_argument("EvalConfig: negative_pair_sample_size must be at least 1");
    }
}

WassersteinScore mean_wasserstein_metric(const RankedEdgeList& graph, const ExpressionDataset& test, const EvalConfig& cfg) {
    cfg.validate();
    if (graph.empty()) {
        throw std::invalid_argument("mean_wasserstein_metric: empty graph");
    }
    require_observational(test);
    require_genes(graph, test);

    std::map<GeneIndex, std::vector<double>> observational;
    WassersteinScore score;
    double total = 0.0;
    for (const auto& e : graph) {
        const auto& rows = test.perturbed_rows(e.parent);
        if (rows.size() < cfg.min_interventional_cells || rows.empty()) {
            ++score.edges_skipped;
            continue;
        }
        auto it = observational.find(e.child);
        if (it == observational.end()) {
            it = observational.emplace(e.child, test.gene_values(e.child, test.observational_rows())).first;
        }
        total += stats::wasserstein1(test.gene_values(e.child, rows), it->second);
        ++score.edges_scored;
    }
    if (score.edges_scored == 0) {
        throw std::invalid_argument("mean_wasserstein_metric: no evaluable edges");
    }
    score.mean_wasserstein = total / static_cast<double>(score.edges_scored);
    return score;
}

FalseOmissionScore false_omission_rate(const RankedEdgeList& graph, const ExpressionDataset& test, const EvalConfig& cfg) {
    cfg.validate();
    require_observational(test);
    require_genes(graph, test);
    const auto m = test.num_genes();
    const auto reach = reachable_pairs(graph, m);

    std::vector<std::pair<GeneIndex, GeneIndex>> eligible;
    for (GeneIndex i = 0; i < m; ++i) {
        const auto cells = test.perturbed_rows(i).size();
        if (cells == 0 || cells < cfg.min_interventional_cells) {
            continue;
        }
        for (GeneIndex j = 0; j < m; ++j) {
            if (j != i && !reach.contains(i, j)) {
                eligible.emplace_back(i, j);
            }
        }
    }
    if (eligible.empty()) {
        throw std::invalid_argument("false_omission_rate: graph leaves no testable negatives");
    }

    std::vector<std::pair<GeneIndex, GeneIndex>> sampled;
    std::mt19937_64 rng(cfg.seed);
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(sampled),
                static_cast<std::ptrdiff_t>(std::min(cfg.negative_pair_sample_size, eligible.size())), rng);

    FalseOmissionScore score;
    score.negatives_eligible = eligible.size();
    std::map<GeneIndex, std::vector<double>> observational;
    for (const auto& [i, j] : sampled) {
        auto it = observational.find(j);
        if (it == observational.end()) {
            it = observational.emplace(j, test.gene_values(j, test.observational_rows())).first;
        }
        const auto result = stats::mann_whitney_u_two_sided(test.gene_values(j, test.perturbed_rows(i)), it->second);
        if (result.p_value < cfg.mwu_alpha) {
            ++score.false_negatives;
        }
        ++score.negatives_tested;
    }
    score.false_omission_rate = static_cast<double>(score.false_negatives) / static_cast<double>(score.negatives_tested);
    return score;
}

double auc_over_fractions(const std::vector<FractionPoint>& points) {
    if (points.size() < 2) {
        throw std::invalid_argument("auc_over_fractions: need at least two points");
    }
    double area = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        if (!(p.fraction >= 0.0 && p.fraction <= 1.0) || !std::isfinite(p.mean_wasserstein)) {
            throw std::invalid_argument("auc_over_fractions: fractions must lie in [0, 1] with finite values");
        }
        if (k == 0) {
            continue;
        }
        const auto& q = points[k - 1];
        if (!(p.fraction > q.fraction)) {
            throw std::invalid_argument("auc_over_fractions: fractions must be strictly increasing");
        }
        area += 0.5 * (p.mean_wasserstein + q.mean_wasserstein) * (p.fraction - q.fraction);
    }
    return area;
}

double delta_25_100(const std::vector<FractionPoint>& points) {
    const auto low = value_at(points, 0.25);
    const auto high = value_at(points, 1.0);
    if (!low || !high) {
        throw std::invalid_argument("delta_25_100: series must contain fractions 0.25 and 1.0");
    }
    return *high - *low;
}

std::vector<RankingRow> mean_position_ranking(const std::vector<MethodMetrics>& results) {
    const auto count = results.size();
    std::vector<RankingRow> rows(count);
    std::vector<std::size_t> order(count);

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = results[a];
        const auto& y = results[b];
        return std::tie(y.wasserstein, x.false_omission, x.method) < std::tie(x.wasserstein, y.false_omission, y.method);
    });
    for (std::size_t pos = 0; pos < count; ++pos) {
        rows[order[pos]].rank_wasserstein = static_cast<int>(pos + 1);
    }

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = results[a];
        const auto& y = results[b];
        return std::tie(x.false_omission, y.wasserstein, x.method) < std::tie(y.false_omission, x.wasserstein, y.method);
    });
    for (std::size_t pos = 0; pos < count; ++pos) {
        rows[order[pos]].rank_for = static_cast<int>(pos + 1);
    }

    for (std::size_t k = 0; k < count; ++k) {
        auto& row = rows[k];
        row.method = results[k].method;
        row.wasserstein = results[k].wasserstein;
        row.false_omission = results[k].false_omission;
        row.mean_position = 0.5 * (row.rank_wasserstein + row.rank_for);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
        return std::tie(a.mean_position, a.rank_for) < std::tie(b.mean_position, b.rank_for);
    });
    return rows;
}

std::vector<CombinedRankingRow> combine_rankings(const std::vector<std::vector<RankingRow>>& rankings) {
    std::map<std::string, CombinedRankingRow> combined;
    for (const auto& ranking : rankings) {
        for (const auto& row : ranking) {
            combined[row.method].method = row.method;
        }
    }
    for (const auto& ranking : rankings) {
        const int missing_rank = static_cast<int>(ranking.size()) + 1;
        for (auto& [name, row] : combined) {
            const auto it = std::find_if(ranking.begin(), ranking.end(), [&](const RankingRow& r) { return r.method == name; });
            if (it == ranking.end()) {
                row.ranks.push_back(missing_rank);
                row.ranks.push_back(missing_rank);
            } else {
                row.ranks.push_back(it->rank_wasserstein);
                row.ranks.push_back(it->rank_for);
            }
        }
    }
    std::vector<CombinedRankingRow> out;
    for (auto& [name, row] : combined) {
        row.mean_rank = row.ranks.empty() ? 0.0 : std::accumulate(row.ranks.begin(), row.ranks.end(), 0.0) / static_cast<double>(row.ranks.size());
        out.push_back(std::move(row));
    }
    std::stable_sort(out.begin(), out.end(), [](const CombinedRankingRow& a, const CombinedRankingRow& b) {
        return std::tie(a.mean_rank, a.method) < std::tie(b.mean_rank, b.method);
    });
    return out;
}

}  // namespace grnbench::eval
