#include "grnbench/core_data.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace grnbench {

ExpressionDataset::ExpressionDataset(Matrix values, std::vector<std::string> gene_names, std::vector<Intervention> intervention)
    : values_(std::move(values)), gene_names_(std::move(gene_names)), intervention_(std::move(intervention)) {
    const auto n = num_cells();
    const auto m = num_genes();
    if (n < 1) {
        throw std::invalid_argument("dataset needs at least one cell");
    }
    if (m < 2) {
        throw std::invalid_argument("dataset needs at least two genes");
    }
    if (gene_names_.size() != m) {
        throw std::invalid_argument("expected " + std::to_string(m) + " gene names, got " + std::to_string(gene_names_.size()));
    }
    if (intervention_.size() != n) {
        throw std::invalid_argument("expected " + std::to_string(n) + " intervention labels, got " + std::to_string(intervention_.size()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : gene_names_) {
        if (name.empty()) {
            throw std::invalid_argument("empty gene name");
        }
        if (!seen.insert(name).second) {
            throw std::invalid_argument("duplicate gene name '" + name + "'");
        }
    }
    if (!values_.allFinite()) {
        throw std::invalid_argument("expression values must be finite");
    }

    perturbed_rows_.assign(m, {});
    for (std::size_t r = 0; r < n; ++r) {
        const auto& label = intervention_[r];
        if (!label) {
            observational_rows_.push_back(r);
        } else if (*label >= m) {
            throw std::invalid_argument("row " + std::to_string(r) + " perturbs gene index " + std::to_string(*label) + " out of range");
        } else {
            perturbed_rows_[*label].push_back(r);
        }
    }
}

std::vector<GeneIndex> ExpressionDataset::perturbed_genes() const {
    std::vector<GeneIndex> out;
    for (GeneIndex g = 0; g < num_genes(); ++g) {
        if (!perturbed_rows_[g].empty()) {
            out.push_back(g);
        }
    }
    return out;
}

std::vector<double> ExpressionDataset::gene_values(GeneIndex g, const std::vector<std::size_t>& rows) const {
    std::vector<double> out;
    out.reserve(rows.size());
    const auto col = values_.col(static_cast<Eigen::Index>(g));
    for (auto r : rows) {
        out.push_back(col(static_cast<Eigen::Index>(r)));
    }
    return out;
}

ExpressionDataset ExpressionDataset::select_rows(const std::vector<std::size_t>& rows) const {
    Matrix sub(static_cast<Eigen::Index>(rows.size()), values_.cols());
    std::vector<Intervention> labels;
    labels.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        sub.row(static_cast<Eigen::Index>(k)) = values_.row(static_cast<Eigen::Index>(rows[k]));
        labels.push_back(intervention_.at(rows[k]));
    }
    return ExpressionDataset(std::move(sub), gene_names_, std::move(labels));
}

ExpressionDataset ExpressionDataset::without_intervention_labels() const {
    return ExpressionDataset(values_, gene_names_, std::vector<Intervention>(num_cells()));
}

std::vector<std::string> default_gene_names(std::size_t m) {
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t g = 0; g < m; ++g) {
        names.push_back("G" + std::to_string(g));
    }
    return names;
}

RankedEdgeList::RankedEdgeList(std::vector<Edge> edges) : edges_(std::move(edges)) {
    std::set<std::pair<GeneIndex, GeneIndex>> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        if (e.parent == e.child) {
            throw std::invalid_argument("self-loop on gene " + std::to_string(e.parent));
        }
        if (std::isnan(e.score)) {
            throw std::invalid_argument("NaN edge score");
        }
        if (!seen.emplace(e.parent, e.child).second) {
            throw std::invalid_argument("duplicate edge " + std::to_string(e.parent) + "->" + std::to_string(e.child));
        }
        if (k > 0 && e.score > edges_[k - 1].score) {
            throw std::invalid_argument("edge scores must be non-increasing");
        }
    }
}

RankedEdgeList RankedEdgeList::top_k(std::vector<Edge> candidates, std::size_t k) {
    std::sort(candidates.begin(), candidates.end(), [](const Edge& a, const Edge& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        if (a.parent != b.parent) {
            return a.parent < b.parent;
        }
        return a.child < b.child;
    });
    if (candidates.size() > k) {
        candidates.resize(k);
    }
    return RankedEdgeList(std::move(candidates));
}

std::size_t RankedEdgeList::min_gene_count() const {
    std::size_t m = 0;
    for (const auto& e : edges_) {
        m = std::max({m, e.parent + 1, e.child + 1});
    }
    return m;
}

bool RankedEdgeList::same_edges(const RankedEdgeList& other) const {
    return std::equal(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(), same_pair);
}

WeightedAdjacency::WeightedAdjacency(Matrix a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) {
        throw std::invalid_argument("adjacency must be square");
    }
    if (a_.rows() < 2) {
        throw std::invalid_argument("adjacency needs at least two nodes");
    }
    if (!a_.allFinite()) {
        throw std::invalid_argument("adjacency weights must be finite");
    }
    for (Eigen::Index i = 0; i < a_.rows(); ++i) {
        if (a_(i, i) != 0.0) {
            throw std::invalid_argument("adjacency diagonal must be zero");
        }
    }
}

std::size_t WeightedAdjacency::num_edges() const {
    return static_cast<std::size_t>((a_.array() != 0.0).count());
}

std::vector<Edge> WeightedAdjacency::nonzero_edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j) {
            const double w = (*this)(i, j);
            if (w != 0.0) {
                out.push_back({i, j, std::abs(w)});
            }
        }
    }
    return out;
}

void SemConfig::validate() const {
    if (d < 2) {
        throw std::invalid_argument("SemConfig: d must be at least 2");
    }
    if (!(expected_degree >= 0.0)) {
        throw std::invalid_argument("SemConfig: expected_degree must be non-negative");
    }
    if (!(weight_low > 0.0) || !(weight_low <= weight_high)) {
        throw std::invalid_argument("SemConfig: need 0 < weight_low <= weight_high");
    }
    if (!(noise_scale >= 0.0) || !(measurement_noise_scale >= 0.0)) {
        throw std::invalid_argument("SemConfig: noise scales must be non-negative");
    }
    if (!(root_cause_prob >= 0.0 && root_cause_prob <= 1.0)) {
        throw std::invalid_argument("SemConfig: root_cause_prob must lie in [0, 1]");
    }
    if (!(root_cause_magnitude > 0.0)) {
        throw std::invalid_argument("SemConfig: root_cause_magnitude must be positive");
    }
    if (!std::isfinite(intervention_value)) {
        throw std::invalid_argument("SemConfig: intervention_value must be finite");
    }
}

std::size_t Reachability::size() const {
    return static_cast<std::size_t>(std::count(reach_.begin(), reach_.end(), true));
}

std::vector<std::pair<GeneIndex, GeneIndex>> Reachability::pairs() const {
    std::vector<std::pair<GeneIndex, GeneIndex>> out;
    for (GeneIndex i = 0; i < m_; ++i) {
        for (GeneIndex j = 0; j < m_; ++j) {
            if (contains(i, j)) {
                out.emplace_back(i, j);
            }
        }
    }
    return out;
}

Reachability reachable_pairs(const RankedEdgeList& edges, std::size_t m) {
    if (edges.min_gene_count() > m) {
        throw std::invalid_argument("edge list references genes beyond m");
    }
    std::vector<std::vector<GeneIndex>> children(m);
    for (const auto& e : edges) {
        children[e.parent].push_back(e.child);
    }

    Reachability reach(m);
    std::vector<char> visited(m);
    std::deque<GeneIndex> queue;
    for (GeneIndex src = 0; src < m; ++src) {
        if (children[src].empty()) {
            continue;
        }
        std::fill(visited.begin(), visited.end(), 0);
        queue.assign(children[src].begin(), children[src].end());
        for (auto c : children[src]) {
            visited[c] = 1;
        }
        while (!queue.empty()) {
            const auto node = queue.front();
            queue.pop_front();
            if (node != src) {
                reach.insert(src, node);
            }
            for (auto c : children[node]) {
                if (!visited[c]) {
                    visited[c] = 1;
                    queue.push_back(c);
                }
            }
        }
    }
    return reach;
}

std::size_t shd(const RankedEdgeList& predicted, const WeightedAdjacency& truth) {
    const auto d = truth.dim();
    if (predicted.min_gene_count() > d) {
        throw std::invalid_argument("predicted graph references genes outside the truth graph");
    }
    std::vector<char> pred(d * d, 0);
    for (const auto& e : predicted) {
        pred[e.parent * d + e.child] = 1;
    }

    std::size_t distance = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const bool p_ij = pred[i * d + j], p_ji = pred[j * d + i];
            const bool t_ij = truth(i, j) != 0.0, t_ji = truth(j, i) != 0.0;
            if (p_ij == t_ij && p_ji == t_ji) {
                continue;
            }
            const int p_count = p_ij + p_ji;
            const int t_count = t_ij + t_ji;
            // One edge on each side pointing opposite ways is a single reversal.
            distance += static_cast<std::size_t>(std::max(1, std::abs(p_count - t_count)));
        }
    }
    return distance;
}

std::optional<std::vector<std::size_t>> topological_order(const Matrix& a) {
    const auto d = static_cast<std::size_t>(a.rows());
    std::vector<std::size_t> indegree(d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
                ++indegree[j];
            }
        }
    }
    std::vector<std::size_t> order;
    order.reserve(d);
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < d; ++i) {
        if (indegree[i] == 0) {
            ready.push_back(i);
        }
    }
    while (!ready.empty()) {
        const auto i = ready.front();
        ready.pop_front();
        order.push_back(i);
        for (std::size_t j = 0; j < d; ++j) {
            if (a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 && --indegree[j] == 0) {
                ready.push_back(j);
            }
        }
    }
    if (order.size() != d) {
        return std::nullopt;
    }
    return order;
}

bool is_acyclic(const WeightedAdjacency& adj) {
    return topological_order(adj.matrix()).has_value();
}

}  // namespace grnbench
