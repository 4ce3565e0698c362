#include "grnbench/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace grnbench::gbm {

namespace {

constexpr double kMinHessian = 1e-3;
constexpr double kProbabilityFloor = 1e-12;

struct GradStats {
    double g = 0.0;
    double h = 0.0;
    std::size_t count = 0;

    GradStats& operator+=(const GradStats& o) {
        g += o.g;
        h += o.h;
        count += o.count;
        return *this;
    }
    GradStats operator-(const GradStats& o) const { return {g - o.g, h - o.h, count - o.count}; }
    GradStats operator+(const GradStats& o) const { return {g + o.g, h + o.h, count + o.count}; }
    double score() const { return g * g / h; }
};

struct SplitCandidate {
    bool valid = false;
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    bool missing_left = true;
};

struct LeafState {
    int node = 0;
    int depth = 0;
    GradStats total;
    SplitCandidate best;
};

/// Pre-sorted column orders shared by every boosting round.
struct ColumnIndex {
    std::vector<std::vector<std::size_t>> sorted;   // non-missing rows by ascending value
    std::vector<std::vector<std::size_t>> missing;  // rows with NaN

    explicit ColumnIndex(const Matrix& x) : sorted(static_cast<std::size_t>(x.cols())), missing(static_cast<std::size_t>(x.cols())) {
        for (Eigen::Index f = 0; f < x.cols(); ++f) {
            auto& order = sorted[static_cast<std::size_t>(f)];
            for (Eigen::Index r = 0; r < x.rows(); ++r) {
                if (std::isnan(x(r, f))) {
                    missing[static_cast<std::size_t>(f)].push_back(static_cast<std::size_t>(r));
                } else {
                    order.push_back(static_cast<std::size_t>(r));
                }
            }
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f); });
        }
    }
};

class TreeGrower {
public:
    TreeGrower(const Matrix& x, const ColumnIndex& columns, const GbmParams& params, const std::vector<double>& grad, const std::vector<double>& hess)
        : x_(x), columns_(columns), params_(params), grad_(grad), hess_(hess), leaf_of_(static_cast<std::size_t>(x.rows()), 0) {}

    Tree grow() {
        Tree tree;
        tree.nodes.emplace_back();
        LeafState root;
        for (std::size_t r = 0; r < grad_.size(); ++r) {
            root.total += GradStats{grad_[r], hess_[r], 1};
        }
        tree.nodes[0].value = leaf_value(root.total);
        leaves_ = {root};
        evaluate({0});

        while (static_cast<int>(leaves_.size()) < params_.num_leaves) {
            int chosen = -1;
            for (std::size_t k = 0; k < leaves_.size(); ++k) {
                const auto& best = leaves_[k].best;
                if (best.valid && (chosen < 0 || best.gain > leaves_[static_cast<std::size_t>(chosen)].best.gain)) {
                    chosen = static_cast<int>(k);
                }
            }
            if (chosen < 0) {
                break;
            }
            split(tree, static_cast<std::size_t>(chosen));
        }
        return tree;
    }

    const std::vector<int>& leaf_of() const { return leaf_of_; }

private:
    static double leaf_value(const GradStats& s) { return s.h > 0.0 ? -s.g / s.h : 0.0; }

    bool admissible(const GradStats& s) const {
        return s.count >= static_cast<std::size_t>(params_.min_data_in_leaf) && s.h >= kMinHessian;
    }

    void consider(LeafState& leaf, const GradStats& left, const GradStats& right, int feature, double threshold, bool missing_left) const {
        if (!admissible(left) || !admissible(right)) {
            return;
        }
        const double gain = left.score() + right.score() - leaf.total.score();
        if (!(gain > params_.min_gain_to_split)) {
            return;
        }
        if (!leaf.best.valid || gain > leaf.best.gain) {
            leaf.best = SplitCandidate{true, gain, feature, threshold, missing_left};
        }
    }

    /// Finds the best split for each listed leaf with one pass over every sorted column.
    void evaluate(const std::vector<std::size_t>& targets) {
        std::vector<int> slot_of_node(node_count_hint(), -1);
        std::vector<std::size_t> active;
        for (auto k : targets) {
            auto& leaf = leaves_[k];
            leaf.best = {};
            if (leaf.depth >= params_.max_depth || leaf.total.count < 2 * static_cast<std::size_t>(params_.min_data_in_leaf)) {
                continue;
            }
            slot_of_node[static_cast<std::size_t>(leaf.node)] = static_cast<int>(active.size());
            active.push_back(k);
        }
        if (active.empty()) {
            return;
        }

        struct Scan {
            GradStats missing;
            GradStats left;
            double last = 0.0;
        };
        std::vector<Scan> scans(active.size());

        for (std::size_t f = 0; f < columns_.sorted.size(); ++f) {
            const auto fi = static_cast<Eigen::Index>(f);
            for (auto& s : scans) {
                s = Scan{};
            }
            for (auto r : columns_.missing[f]) {
                const int slot = slot_of_node[static_cast<std::size_t>(leaf_of_[r])];
                if (slot >= 0) {
                    scans[static_cast<std::size_t>(slot)].missing += GradStats{grad_[r], hess_[r], 1};
                }
            }
            for (auto r : columns_.sorted[f]) {
                const int slot = slot_of_node[static_cast<std::size_t>(leaf_of_[r])];
                if (slot < 0) {
                    continue;
                }
                auto& scan = scans[static_cast<std::size_t>(slot)];
                auto& leaf = leaves_[active[static_cast<std::size_t>(slot)]];
                const double v = x_(static_cast<Eigen::Index>(r), fi);
                if (scan.left.count > 0 && v != scan.last) {
                    double threshold = 0.5 * (scan.last + v);
                    if (!(threshold < v)) {
                        threshold = scan.last;
                    }
                    consider_both(leaf, scan.left, scan.missing, static_cast<int>(f), threshold);
                }
                scan.left += GradStats{grad_[r], hess_[r], 1};
                scan.last = v;
            }
            // Every observed value on one side, missing rows on the other.
            for (std::size_t slot = 0; slot < active.size(); ++slot) {
                const auto& scan = scans[slot];
                if (scan.missing.count > 0 && scan.left.count > 0) {
                    auto& leaf = leaves_[active[slot]];
                    consider(leaf, scan.left, scan.missing, static_cast<int>(f), scan.last, false);
                }
            }
        }
    }

    void consider_both(LeafState& leaf, const GradStats& left_present, const GradStats& missing, int feature, double threshold) const {
        const GradStats present_total = leaf.total - missing;
        const GradStats right_present = present_total - left_present;
        if (missing.count == 0) {
            // No missing rows seen here: unseen missing values follow the larger child.
            consider(leaf, left_present, right_present, feature, threshold, left_present.count >= right_present.count);
            return;
        }
        consider(leaf, left_present + missing, right_present, feature, threshold, true);
        consider(leaf, left_present, right_present + missing, feature, threshold, false);
    }

    std::size_t node_count_hint() const { return static_cast<std::size_t>(2 * params_.num_leaves + 1); }

    void split(Tree& tree, std::size_t leaf_index) {
        const LeafState parent = leaves_[leaf_index];
        const auto& best = parent.best;
        const int left_id = static_cast<int>(tree.nodes.size());
        const int right_id = left_id + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();

        auto& node = tree.nodes[static_cast<std::size_t>(parent.node)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.missing_left = best.missing_left;
        node.left = left_id;
        node.right = right_id;
        node.gain = best.gain;

        LeafState left{left_id, parent.depth + 1, {}, {}};
        LeafState right{right_id, parent.depth + 1, {}, {}};
        const auto fi = static_cast<Eigen::Index>(best.feature);
        for (std::size_t r = 0; r < leaf_of_.size(); ++r) {
            if (leaf_of_[r] != parent.node) {
                continue;
            }
            const double v = x_(static_cast<Eigen::Index>(r), fi);
            const bool go_left = std::isnan(v) ? best.missing_left : v <= best.threshold;
            auto& child = go_left ? left : right;
            leaf_of_[r] = child.node;
            child.total += GradStats{grad_[r], hess_[r], 1};
        }
        tree.nodes[static_cast<std::size_t>(left_id)].value = leaf_value(left.total);
        tree.nodes[static_cast<std::size_t>(right_id)].value = leaf_value(right.total);

        leaves_[leaf_index] = left;
        leaves_.push_back(right);
        evaluate({leaf_index, leaves_.size() - 1});
    }

    const Matrix& x_;
    const ColumnIndex& columns_;
    const GbmParams& params_;
    const std::vector<double>& grad_;
    const std::vector<double>& hess_;
    std::vector<int> leaf_of_;
    std::vector<LeafState> leaves_;
};

std::vector<double> row_of(const Matrix& x, Eigen::Index r) {
    std::vector<double> row(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index f = 0; f < x.cols(); ++f) {
        row[static_cast<std::size_t>(f)] = x(r, f);
    }
    return row;
}

void validate_inputs(const Matrix& features, std::span<const double> target, const GbmParams& params) {
    params.validate();
    const auto n = static_cast<std::size_t>(features.rows());
    if (n != target.size()) {
        throw std::invalid_argument("gbm::fit: " + std::to_string(n) + " feature rows but " + std::to_string(target.size()) + " targets");
    }
    if (features.cols() < 1) {
        throw std::invalid_argument("gbm::fit: need at least one feature");
    }
    const auto needed = std::max<std::size_t>(2, 2 * static_cast<std::size_t>(params.min_data_in_leaf));
    if (n < needed) {
        throw std::invalid_argument("gbm::fit: need at least " + std::to_string(needed) + " rows, got " + std::to_string(n));
    }
    for (double y : target) {
        if (!std::isfinite(y)) {
            throw std::invalid_argument("gbm::fit: non-finite target");
        }
        if (params.objective == Objective::binary_logloss && y != 0.0 && y != 1.0) {
            throw std::invalid_argument("gbm::fit: binary targets must be 0 or 1");
        }
    }
    for (Eigen::Index f = 0; f < features.cols(); ++f) {
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            const double v = features(r, f);
            if (std::isinf(v)) {
                throw std::invalid_argument("gbm::fit: infinite feature value");
            }
            if (std::isnan(v) && params.objective == Objective::squared_error) {
                throw std::invalid_argument("gbm::fit: missing feature values are only supported for classification");
            }
        }
    }
}

}  // namespace

void GbmParams::validate() const {
    if (num_leaves < 2) {
        throw std::invalid_argument("GbmParams: num_leaves must be at least 2");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("GbmParams: max_depth must be at least 1");
    }
    if (min_data_in_leaf < 1) {
        throw std::invalid_argument("GbmParams: min_data_in_leaf must be at least 1");
    }
    if (!(learning_rate > 0.0)) {
        throw std::invalid_argument("GbmParams: learning_rate must be positive");
    }
    if (!(min_gain_to_split >= 0.0)) {
        throw std::invalid_argument("GbmParams: min_gain_to_split must be non-negative");
    }
    if (num_iterations < 1) {
        throw std::invalid_argument("GbmParams: num_iterations must be at least 1");
    }
}

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

int Tree::leaf_for(std::span<const double> row) const {
    int id = 0;
    while (!nodes[static_cast<std::size_t>(id)].is_leaf()) {
        const auto& node = nodes[static_cast<std::size_t>(id)];
        const double v = row[static_cast<std::size_t>(node.feature)];
        const bool go_left = std::isnan(v) ? node.missing_left : v <= node.threshold;
        id = go_left ? node.left : node.right;
    }
    return id;
}

int Tree::depth() const {
    std::vector<int> depth(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!nodes[k].is_leaf()) {
            depth[static_cast<std::size_t>(nodes[k].left)] = depth[k] + 1;
            depth[static_cast<std::size_t>(nodes[k].right)] = depth[k] + 1;
        }
        deepest = std::max(deepest, depth[k]);
    }
    return deepest;
}

int Tree::num_leaves() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

GbmModel fit(const Matrix& features, std::span<const double> target, const GbmParams& params) {
    validate_inputs(features, target, params);
    const auto n = target.size();

    GbmModel model;
    model.objective = params.objective;
    model.learning_rate = params.learning_rate;
    model.num_features = static_cast<std::size_t>(features.cols());

    const double target_mean = std::accumulate(target.begin(), target.end(), 0.0) / static_cast<double>(n);
    if (params.objective == Objective::squared_error) {
        model.base_score = target_mean;
    } else {
        const double p = std::clamp(target_mean, kProbabilityFloor, 1.0 - kProbabilityFloor);
        model.base_score = std::log(p / (1.0 - p));
    }
    const bool constant_target = std::all_of(target.begin(), target.end(), [&](double y) { return y == target.front(); });
    if (constant_target) {
        if (params.objective == Objective::squared_error) {
            model.base_score = target.front();
        }
        return model;
    }

    const ColumnIndex columns(features);
    std::vector<double> score(n, model.base_score);
    std::vector<double> grad(n), hess(n);

    for (int iter = 0; iter < params.num_iterations; ++iter) {
        for (std::size_t r = 0; r < n; ++r) {
            if (params.objective == Objective::squared_error) {
                grad[r] = score[r] - target[r];
                hess[r] = 1.0;
            } else {
                const double p = sigmoid(score[r]);
                grad[r] = p - target[r];
                hess[r] = p * (1.0 - p);
            }
        }
        TreeGrower grower(features, columns, params, grad, hess);
        Tree tree = grower.grow();
        if (tree.nodes.size() == 1) {
            // Nothing left to split; later rounds would be identical.
            break;
        }
        const auto& leaf_of = grower.leaf_of();
        for (std::size_t r = 0; r < n; ++r) {
            score[r] += params.learning_rate * tree.nodes[static_cast<std::size_t>(leaf_of[r])].value;
        }
        for (const auto& node : tree.nodes) {
            model.total_gain += node.gain;
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

std::vector<double> predict_raw(const GbmModel& model, const Matrix& features) {
    if (static_cast<std::size_t>(features.cols()) != model.num_features) {
        throw std::invalid_argument("gbm::predict: expected " + std::to_string(model.num_features) + " features, got " + std::to_string(features.cols()));
    }
    std::vector<double> out(static_cast<std::size_t>(features.rows()));
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
        const auto row = row_of(features, r);
        double s = model.base_score;
        for (const auto& tree : model.trees) {
            s += model.learning_rate * tree.output(row);
        }
        out[static_cast<std::size_t>(r)] = s;
    }
    return out;
}

std::vector<double> predict(const GbmModel& model, const Matrix& features) {
    auto out = predict_raw(model, features);
    if (model.objective == Objective::binary_logloss) {
        for (auto& v : out) {
            v = sigmoid(v);
        }
    }
    return out;
}

std::vector<double> feature_importance(const GbmModel& model) {
    std::vector<double> importance(model.num_features, 0.0);
    for (const auto& tree : model.trees) {
        for (const auto& node : tree.nodes) {
            if (!node.is_leaf()) {
                importance[static_cast<std::size_t>(node.feature)] += node.gain;
            }
        }
    }
    return importance;
}

}  // namespace grnbench::gbm
