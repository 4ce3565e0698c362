#ifndef GRNBENCH_SYNTH_HPP
#define GRNBENCH_SYNTH_HPP

#include "grnbench/core_data.hpp"

#include <cstddef>
#include <utility>
#include <vector>

/**
 * @file synth.hpp
 * @brief Synthetic perturbational datasets drawn from known DAGs.
 *
 * Two generators are provided: the recursive linear SEM X = XA + N with hard interventions,
 * and the few-root-causes model X = (C + N_C)(I + Abar) + N_X where C is sparse.
 * Every generator is bit-for-bit deterministic given `SemConfig::seed`.
 */

namespace grnbench::synth {

/**
 * Random DAG: a seeded permutation fixes the topological order and each forward pair becomes an
 * edge with probability expected_degree / (d - 1). Weights are uniform in [low, high] with a random sign.
 */
WeightedAdjacency generate_dag(const SemConfig& cfg);

/**
 * Abar = A + A^2 + ... + A^(d-1) = (I - A)^{-1} - I.
 * @throws std::invalid_argument if `dag` has a cycle.
 */
WeightedAdjacency transitive_weight_closure(const WeightedAdjacency& dag);

/**
 * Linear SEM samples: `n_obs` observational rows followed by `n_per_intervention` rows for each gene
 * in `intervened_genes` (in the given order). A perturbed gene is clamped to `cfg.intervention_value`
 * and receives no parental input or noise; its descendants propagate the clamped value.
 *
 * @throws std::invalid_argument on a cyclic DAG, dimension mismatch or out-of-range gene.
 */
std::pair<ExpressionDataset, SyntheticGroundTruth> simulate_sem(const WeightedAdjacency& dag, std::size_t n_obs, std::size_t n_per_intervention,
                                                                const std::vector<GeneIndex>& intervened_genes, const SemConfig& cfg);

/// Observational samples from the few-root-causes model. Root causes are stored in `root_causes` when non-null.
std::pair<ExpressionDataset, SyntheticGroundTruth> simulate_few_root_causes(const WeightedAdjacency& dag, std::size_t n, const SemConfig& cfg,
                                                                            Matrix* root_causes = nullptr);

}  // namespace grnbench::synth

#endif
