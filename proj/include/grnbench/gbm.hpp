#ifndef GRNBENCH_GBM_HPP
#define GRNBENCH_GBM_HPP

#include "grnbench/core_data.hpp"

#include <cstdint>
#include <span>
#include <vector>

/**
 * @file gbm.hpp
 * @brief Small gradient-boosted decision tree learner.
 *
 * Supports squared-error regression and binary log-loss classification. Trees grow leaf-wise
 * (best gain first) under `num_leaves` and `max_depth`, split search is an exact scan over the
 * sorted feature values, and missing values (NaN) are routed to whichever side maximises the gain.
 * Split gain is the Newton gain G_L^2/H_L + G_R^2/H_R - G^2/H with no L1/L2 penalty, and leaf values
 * are -G/H (the residual mean for squared error). No row or feature subsampling is performed, so a
 * fit is fully determined by its inputs.
 */

namespace grnbench::gbm {

enum class Objective { squared_error, binary_logloss };

struct GbmParams {
    int num_leaves = 5;
    int max_depth = 2;
    int min_data_in_leaf = 5;
    double learning_rate = 0.05;
    double min_gain_to_split = 0.01;
    int num_iterations = 1000;
    Objective objective = Objective::binary_logloss;
    std::uint64_t seed = 0;

    /// @throws std::invalid_argument when a field is out of range.
    void validate() const;
};

/// Hyper-parameters used by the pair classifier of the supervised correlation method.
inline GbmParams classifier_defaults() { return GbmParams{}; }

/// Regression settings for per-gene predictive scoring.
inline GbmParams regression_defaults() {
    GbmParams p;
    p.objective = Objective::squared_error;
    p.num_iterations = 200;
    p.min_gain_to_split = 0.0;
    return p;
}

struct TreeNode {
    int feature = -1;  ///< -1 for leaves
    double threshold = 0.0;
    bool missing_left = true;
    int left = -1;
    int right = -1;
    double value = 0.0;  ///< leaf output before learning-rate scaling
    double gain = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  ///< nodes[0] is the root

    /// Index of the leaf reached by `row`.
    int leaf_for(std::span<const double> row) const;
    double output(std::span<const double> row) const { return nodes[static_cast<std::size_t>(leaf_for(row))].value; }
    int depth() const;
    int num_leaves() const;
};

struct GbmModel {
    std::vector<Tree> trees;
    double base_score = 0.0;
    Objective objective = Objective::squared_error;
    double learning_rate = 0.1;
    std::size_t num_features = 0;
    double total_gain = 0.0;
};

/**
 * Fits a boosted model. Rows of `features` are samples; NaN marks a missing value and is only
 * accepted for the binary objective.
 *
 * A constant target yields a model with no trees whose prediction is that constant.
 * @throws std::invalid_argument on shape mismatch, too few rows, labels outside {0, 1} for the
 * binary objective, infinite features, or missing values in a regression problem.
 */
GbmModel fit(const Matrix& features, std::span<const double> target, const GbmParams& params);

/// Raw additive scores: base_score + sum of learning_rate * tree outputs.
std::vector<double> predict_raw(const GbmModel& model, const Matrix& features);

/// Raw scores for regression, sigmoid probabilities for the binary objective.
std::vector<double> predict(const GbmModel& model, const Matrix& features);

/// Total split gain per feature over all trees.
std::vector<double> feature_importance(const GbmModel& model);

double sigmoid(double x);

}  // namespace grnbench::gbm

#endif
