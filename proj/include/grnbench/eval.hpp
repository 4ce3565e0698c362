#ifndef GRNBENCH_EVAL_HPP
#define GRNBENCH_EVAL_HPP

#include "grnbench/core_data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

/**
 * @file eval.hpp
 * @brief Statistical evaluation of predicted networks against held-out perturbation data.
 */

namespace grnbench::eval {

struct EvalConfig {
    std::size_t negative_pair_sample_size = 1000;
    double mwu_alpha = 0.05;
    std::uint64_t seed = 0;
    /// Parents with fewer perturbed test cells are skipped (Wasserstein) or ineligible (FOR).
    std::size_t min_interventional_cells = 5;

    void validate() const;
};

struct WassersteinScore {
    double mean_wasserstein = 0.0;
    std::size_t edges_scored = 0;
    std::size_t edges_skipped = 0;
};

/**
 * Mean over predicted edges i -> j of W1(gene j under perturbation of i, gene j observational).
 * Edges whose parent has fewer than `min_interventional_cells` perturbed test cells are skipped and counted.
 * @throws std::invalid_argument on an empty graph, missing observational cells, or when no edge can be scored.
 */
WassersteinScore mean_wasserstein_metric(const RankedEdgeList& graph, const ExpressionDataset& test, const EvalConfig& cfg);

struct FalseOmissionScore {
    double false_omission_rate = 0.0;
    std::size_t false_negatives = 0;
    std::size_t negatives_tested = 0;
    std::size_t negatives_eligible = 0;
};

/**
 * False omission rate estimated on sampled negative pairs.
 *
 * Negatives are ordered pairs (i, j) with no directed path i -> ... -> j in `graph` whose parent has
 * at least `min_interventional_cells` perturbed test cells. Up to `negative_pair_sample_size` of them
 * are sampled uniformly without replacement; a pair is a false negative when the two-sided
 * Mann-Whitney test of gene j (perturbed i vs observational) has p < mwu_alpha.
 * @throws std::invalid_argument when there are no eligible negatives.
 */
FalseOmissionScore false_omission_rate(const RankedEdgeList& graph, const ExpressionDataset& test, const EvalConfig& cfg);

struct FractionPoint {
    double fraction = 0.0;
    double mean_wasserstein = 0.0;
};

/// Trapezoidal area under the series over its own fraction range.
double auc_over_fractions(const std::vector<FractionPoint>& points);

/// Value at fraction 1.0 minus value at fraction 0.25.
double delta_25_100(const std::vector<FractionPoint>& points);

struct MethodMetrics {
    std::string method;
    double wasserstein = 0.0;
    double false_omission = 0.0;
};

struct RankingRow {
    std::string method;
    int rank_wasserstein = 0;
    int rank_for = 0;
    double mean_position = 0.0;
    double wasserstein = 0.0;
    double false_omission = 0.0;
};

/**
 * Ranks methods by Wasserstein (descending) and FOR (ascending) and averages the two positions.
 *
 * A tie on one metric is broken by the other metric (better value first), then by method name.
 * Rows come back sorted by mean position, then FOR rank.
 */
std::vector<RankingRow> mean_position_ranking(const std::vector<MethodMetrics>& results);

struct CombinedRankingRow {
    std::string method;
    std::vector<int> ranks;  ///< Wasserstein rank then FOR rank for each input ranking, in input order
    double mean_rank = 0.0;
};

/**
 * Averages per-metric ranks across several rankings (e.g. one per dataset). Methods missing from a
 * ranking are placed after every ranked method there. Sorted by mean rank, then name.
 */
std::vector<CombinedRankingRow> combine_rankings(const std::vector<std::vector<RankingRow>>& rankings);

}  // namespace grnbench::eval

#endif
