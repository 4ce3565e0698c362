#ifndef GRNBENCH_CORE_DATA_HPP
#define GRNBENCH_CORE_DATA_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

/**
 * @file core_data.hpp
 * @brief Dataset, edge-list and adjacency types shared by every module, plus graph utilities.
 */

namespace grnbench {

using GeneIndex = std::size_t;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/**
 * Per-cell intervention label.
 * An empty label marks an observational (control) cell, otherwise it holds the index of the perturbed gene.
 */
using Intervention = std::optional<GeneIndex>;

/**
 * @brief Cells-by-genes expression matrix with per-cell intervention labels.
 *
 * Genes are identified by column index everywhere inside the library; names are only carried for I/O.
 * Row groupings (observational rows, rows perturbing each gene) are computed once at construction.
 * Instances are immutable.
 */
class ExpressionDataset {
public:
    /**
     * @throws std::invalid_argument if the shape, labels or values violate the dataset invariants:
     * at least one cell, at least two genes, unique gene names, finite values, labels within range.
     */
    ExpressionDataset(Matrix values, std::vector<std::string> gene_names, std::vector<Intervention> intervention);

    std::size_t num_cells() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t num_genes() const { return static_cast<std::size_t>(values_.cols()); }

    const Matrix& values() const { return values_; }
    const std::vector<std::string>& gene_names() const { return gene_names_; }
    const std::vector<Intervention>& intervention() const { return intervention_; }

    /// Row indices of observational cells, ascending.
    const std::vector<std::size_t>& observational_rows() const { return observational_rows_; }

    /// Row indices of cells perturbing gene `g`, ascending. Empty if `g` was never perturbed.
    const std::vector<std::size_t>& perturbed_rows(GeneIndex g) const { return perturbed_rows_.at(g); }

    bool is_perturbed(GeneIndex g) const { return !perturbed_rows_.at(g).empty(); }

    /// Genes with at least one perturbed cell, ascending.
    std::vector<GeneIndex> perturbed_genes() const;

    bool has_interventions() const { return observational_rows_.size() < num_cells(); }

    /// Values of gene `g` restricted to `rows`, in the given row order.
    std::vector<double> gene_values(GeneIndex g, const std::vector<std::size_t>& rows) const;

    /// New dataset holding only `rows` (in the given order), same genes.
    ExpressionDataset select_rows(const std::vector<std::size_t>& rows) const;

    /// Same values with every cell relabelled observational.
    ExpressionDataset without_intervention_labels() const;

private:
    Matrix values_;
    std::vector<std::string> gene_names_;
    std::vector<Intervention> intervention_;
    std::vector<std::size_t> observational_rows_;
    std::vector<std::vector<std::size_t>> perturbed_rows_;
};

/// Default gene names "G0", "G1", ... used by generators.
std::vector<std::string> default_gene_names(std::size_t m);

struct Edge {
    GeneIndex parent = 0;
    GeneIndex child = 0;
    double score = 0.0;
};

inline bool same_pair(const Edge& a, const Edge& b) { return a.parent == b.parent && a.child == b.child; }

/**
 * @brief Directed, scored candidate edges in rank order; the output of every inference method.
 *
 * Invariants: no self loops, no duplicate (parent, child) pair, scores non-increasing.
 */
class RankedEdgeList {
public:
    RankedEdgeList() = default;

    /// Validates the invariants for a list already in rank order.
    explicit RankedEdgeList(std::vector<Edge> edges);

    /**
     * Sorts candidates by score descending, then (parent, child) ascending, and keeps the first `k`.
     * Candidates must already satisfy the pair invariants; scores must not be NaN.
     */
    static RankedEdgeList top_k(std::vector<Edge> candidates, std::size_t k);

    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    auto begin() const { return edges_.begin(); }
    auto end() const { return edges_.end(); }

    /// Largest gene index referenced plus one (0 when empty).
    std::size_t min_gene_count() const;

    /// Same (parent, child) sequence, ignoring scores.
    bool same_edges(const RankedEdgeList& other) const;

private:
    std::vector<Edge> edges_;
};

/**
 * @brief Dense weighted adjacency; `a(i, j)` is the weight of edge i -> j.
 */
class WeightedAdjacency {
public:
    /// @throws std::invalid_argument unless square, at least 2x2, finite, with zero diagonal.
    explicit WeightedAdjacency(Matrix a);

    static WeightedAdjacency zeros(std::size_t d) { return WeightedAdjacency(Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))); }

    std::size_t dim() const { return static_cast<std::size_t>(a_.rows()); }
    const Matrix& matrix() const { return a_; }
    double operator()(std::size_t i, std::size_t j) const { return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

    std::size_t num_edges() const;

    /// Nonzero entries as edges scored by |weight|, in (parent, child) order.
    std::vector<Edge> nonzero_edges() const;

private:
    Matrix a_;
};

/// Parameters of the synthetic generators (see synth.hpp).
struct SemConfig {
    std::size_t d = 10;
    double expected_degree = 2.0;
    double weight_low = 0.5;
    double weight_high = 1.5;
    double noise_scale = 1.0;
    double root_cause_prob = 0.1;
    double root_cause_magnitude = 1.0;
    double measurement_noise_scale = 0.0;
    double intervention_value = 0.0;
    std::uint64_t seed = 0;

    /// @throws std::invalid_argument on d < 2, probabilities outside [0,1], bad weight range or negative scales.
    void validate() const;
};

struct SyntheticGroundTruth {
    WeightedAdjacency dag;
    SemConfig config;
};

/**
 * @brief Dense boolean reachability relation over m genes.
 */
class Reachability {
public:
    explicit Reachability(std::size_t m) : m_(m), reach_(m * m, false) {}

    std::size_t num_genes() const { return m_; }
    bool contains(GeneIndex i, GeneIndex j) const { return reach_[i * m_ + j]; }
    void insert(GeneIndex i, GeneIndex j) { reach_[i * m_ + j] = true; }
    std::size_t size() const;
    std::vector<std::pair<GeneIndex, GeneIndex>> pairs() const;

private:
    std::size_t m_;
    std::vector<bool> reach_;
};

/**
 * Ordered pairs (i, j), i != j, joined by a directed path in `edges`.
 * Per-source BFS over an adjacency-list view. Cycles are fine; self pairs are never reported.
 */
Reachability reachable_pairs(const RankedEdgeList& edges, std::size_t m);

/**
 * Structural Hamming distance: insertions + deletions + reversals turning `predicted` into the nonzero
 * edge set of `truth`. A reversed edge counts once.
 * @throws std::invalid_argument if `predicted` references genes outside `truth`.
 */
std::size_t shd(const RankedEdgeList& predicted, const WeightedAdjacency& truth);

bool is_acyclic(const WeightedAdjacency& adj);

/// Topological order of the nonzero-edge digraph, or nullopt when cyclic.
std::optional<std::vector<std::size_t>> topological_order(const Matrix& a);

}  // namespace grnbench

#endif
