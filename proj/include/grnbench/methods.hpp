#ifndef GRNBENCH_METHODS_HPP
#define GRNBENCH_METHODS_HPP

#include "grnbench/core_data.hpp"
#include "grnbench/gbm.hpp"

#include <cstddef>
#include <cstdint>

/**
 * @file methods.hpp
 * @brief Network inference methods mapping an `ExpressionDataset` to a `RankedEdgeList`.
 *
 * All methods are deterministic given their inputs and seeds; `threads` only changes wall time.
 */

namespace grnbench::methods {

/// p-value assigned to sources with no perturbation data.
inline constexpr double kDefaultPValue = 0.05;

/// Default number of edges returned by the ranking methods.
inline constexpr std::size_t kDefaultTopK = 1000;

/**
 * Predictive scores G(i, j): total split-gain importance of gene i in a squared-error boosted model
 * predicting gene j from all other genes, fitted on every row regardless of its label.
 * The diagonal is zero.
 */
Matrix grnboost_scores(const ExpressionDataset& data, const gbm::GbmParams& params, unsigned threads = 1);

/// Top-k directed pairs by predictive score (ties by (parent, child) order).
RankedEdgeList grnboost(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params, unsigned threads = 1);

/// Orders pairs by predictive score, then (parent, child); the diagonal is skipped.
RankedEdgeList top_k_by_score(const Matrix& scores, std::size_t k);

/**
 * BH-adjusted KS p-values p(i, j) for the shift of gene j under perturbation of gene i.
 * All perturbed-source tests form one correction family; rows of unperturbed sources are set to
 * `kDefaultPValue` afterwards. The diagonal is 1.
 * `tested(i, j)` is set to 1 where a test was run.
 */
Matrix interventional_pvalues(const ExpressionDataset& data, Eigen::MatrixXi* tested = nullptr);

/**
 * Combines interventional KS evidence with predictive scores.
 *
 * Pairs are ordered by p ascending, then tested-before-default at equal p, then G descending, then
 * (parent, child). Only pairs with p <= 0.05 are eligible (untested sources qualify through their
 * default), and at most `k` are returned. Each edge carries 1 - p as its score.
 */
RankedEdgeList betterboost(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params, unsigned threads = 1);

/// Same ranking given precomputed predictive scores.
RankedEdgeList betterboost_from_scores(const ExpressionDataset& data, const Matrix& predictive_scores, std::size_t k);

/**
 * |mean_obs(j) - mean_{perturb i}(j)| for every perturbed i and j != i, top-k descending.
 * @throws std::invalid_argument if the dataset has no perturbed cells or no observational cells.
 */
RankedEdgeList mean_difference(const ExpressionDataset& data, std::size_t k);

/// Pair table built by the supervised correlation method, exposed for inspection and tests.
struct PairTable {
    std::vector<std::pair<GeneIndex, GeneIndex>> pairs;
    Matrix features;            ///< one row per pair: obs mean i, obs mean j, perturbed mean i, perturbed mean j
    std::vector<double> labels;  ///< 1 when |r| > threshold
    std::vector<double> correlations;
};

inline constexpr double kGuanlabCorrelationThreshold = 0.1;

/**
 * Labels and features for every ordered pair (i, j), i != j.
 *
 * The label correlates gene i with gene j over the i-perturbed cells concatenated with an equally
 * long sample of observational cells (without replacement when possible), or over the observational
 * cells alone when i is unperturbed. Features use row-wise z-scored expression; unperturbed sources
 * get (0, NaN) for the perturbed means.
 */
PairTable guanlab_pairs(const ExpressionDataset& data, std::uint64_t seed);

/**
 * Supervised pair classification: fits a boosted binary classifier on the pair table and ranks all
 * pairs by predicted probability.
 * @throws std::invalid_argument if the labels are all positive or all negative.
 */
RankedEdgeList guanlab(const ExpressionDataset& data, std::size_t k, const gbm::GbmParams& params);

struct SparseRcOptions {
    double edge_threshold = 0.3;
    double huber_delta = 1e-3;
    double learning_rate = 1e-2;
    int max_inner_steps = 3000;
    int max_outer_iterations = 20;
    double h_tolerance = 1e-8;
    double rho_initial = 1.0;
    double rho_growth = 10.0;
    /// Penalty cap. Past this point the Adam steps shrink true edges along with the spurious ones.
    double rho_max = 1e8;
    /// h must fall below this fraction of its previous value, otherwise rho grows.
    double h_progress = 0.25;
    /// Inner loop stops early once the relative objective change over a window drops below this.
    double inner_tolerance = 1e-7;
    bool use_intervention_mask = true;
    std::size_t max_edges = kDefaultTopK;
};

struct SparseRcResult {
    RankedEdgeList edges;
    Matrix weights;           ///< raw optimiser output before thresholding
    Matrix pruned;            ///< thresholded, acyclic weights
    double h = 0.0;           ///< acyclicity residual of `weights`
    int outer_iterations = 0;
    bool converged = false;   ///< false when the outer loop hit its iteration cap
    std::size_t cycle_edges_removed = 0;
};

/// trace(exp(A o A)) - d; zero exactly when the weighted graph is acyclic.
double acyclicity(const Matrix& a);

/**
 * Sparse-root-cause structure learning: minimises (1/2n) * sum over unmasked entries of a Huber
 * smoothing of |X - XA| subject to acyclicity(A) = 0 with an augmented Lagrangian and Adam inner
 * steps. The mask drops the residual of gene g in every row perturbing g. Weights with
 * |a| <= edge_threshold are pruned, leftover cycles are broken by deleting their weakest edge, and
 * edges are ranked by |a|.
 */
SparseRcResult sparserc(const ExpressionDataset& data, const SparseRcOptions& opts = {});

/// Removes the weakest edge of some remaining cycle until the graph is acyclic; returns the count removed.
std::size_t break_cycles(Matrix& a);

}  // namespace grnbench::methods

#endif
