#ifndef GRNBENCH_BENCH_HPP
#define GRNBENCH_BENCH_HPP

#include "grnbench/core_data.hpp"
#include "grnbench/eval.hpp"
#include "grnbench/gbm.hpp"
#include "grnbench/methods.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

/**
 * @file bench.hpp
 * @brief Train/test splitting, intervention-fraction subsetting and the end-to-end benchmark.
 */

namespace grnbench::bench {

struct Split {
    ExpressionDataset train;
    ExpressionDataset test;
    std::vector<std::string> warnings;
};

/**
 * Stratified split: the rows of every intervention label are shuffled and divided independently,
 * so each label with at least two cells appears on both sides. Labels with a single cell go to
 * train and are reported in `warnings`. Row order inside each side follows the input.
 * @throws std::invalid_argument unless 0 < test_fraction < 1, or when no label can be split.
 */
Split split_train_test(const ExpressionDataset& data, double test_fraction, std::uint64_t seed);

/**
 * Perturbed genes kept at `fraction`: ceil(fraction * P) genes taken from the front of one seeded
 * shuffle, so smaller fractions always keep a subset of larger ones. Returned ascending.
 */
std::vector<GeneIndex> select_intervention_genes(const ExpressionDataset& train, double fraction, std::uint64_t seed);

/// Drops every perturbed cell whose gene is not selected; observational cells are always kept.
ExpressionDataset subset_interventions(const ExpressionDataset& train, double fraction, std::uint64_t seed);

enum class MethodKind { mean_difference, betterboost, grnboost, guanlab, sparserc };

std::string to_string(MethodKind kind);
MethodKind method_kind_from_string(const std::string& name);

struct MethodSpec {
    std::string name;
    MethodKind kind = MethodKind::mean_difference;
    std::size_t k = methods::kDefaultTopK;
    /// Relabel every training cell as observational before inference.
    bool strip_interventions = false;
    gbm::GbmParams gbm;
    methods::SparseRcOptions sparserc;
};

/// Default options for a method kind (classifier defaults for guanlab, regression defaults for boosted scores).
MethodSpec default_method(const std::string& name, MethodKind kind);

/// Runs one method on a training set.
RankedEdgeList run_method(const MethodSpec& spec, const ExpressionDataset& train, unsigned threads = 1);

struct SyntheticSource {
    SemConfig sem;
    std::size_t n_obs = 500;
    std::size_t n_per_intervention = 50;
    /// Empty means every gene is perturbed.
    std::vector<GeneIndex> intervened;
};

struct BenchmarkConfig {
    std::optional<std::filesystem::path> dataset_path;
    std::optional<SyntheticSource> synthetic;
    std::vector<MethodSpec> methods;
    std::vector<double> fractions{0.25, 0.5, 0.75, 1.0};
    std::vector<std::uint64_t> seeds{0, 1, 2};
    double test_fraction = 0.2;
    eval::EvalConfig eval;
    std::optional<std::filesystem::path> output_dir;
    unsigned threads = 1;

    void validate() const;
};

/// Parses the JSON config format used by the `bench` command.
BenchmarkConfig config_from_json(const nlohmann::json& j);

struct RunRecord {
    std::string method;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::size_t num_edges = 0;
    std::size_t interventions_used = 0;
    std::optional<eval::WassersteinScore> wasserstein;
    std::optional<eval::FalseOmissionScore> false_omission;
    std::optional<std::size_t> shd;
    RankedEdgeList edges;
};

struct FractionSummary {
    double fraction = 0.0;
    std::size_t successful_runs = 0;
    std::optional<double> median_wasserstein;
    std::optional<double> median_false_omission;
};

struct MethodSummary {
    std::string method;
    std::vector<FractionSummary> fractions;
    std::optional<double> auc;
    std::optional<double> delta_25_100;
};

struct BenchmarkReport {
    nlohmann::ordered_json config_echo;
    std::vector<RunRecord> runs;
    std::vector<MethodSummary> summaries;
    double ranking_fraction = 1.0;
    std::vector<eval::RankingRow> ranking;
    std::vector<std::string> warnings;

    const MethodSummary& summary(const std::string& method) const;
    nlohmann::ordered_json to_json() const;
};

/**
 * Full protocol: for every seed, split the data, then for every fraction and method subset the
 * training interventions, infer, and evaluate on the whole held-out test set. Seeds are aggregated
 * by median per (method, fraction). A failing run is recorded and left out of the aggregates.
 * When `output_dir` is set, `report.json` and one edge list per run are written there.
 */
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

/// Loads or generates the dataset named by the config, plus the generating DAG for synthetic sources.
std::pair<ExpressionDataset, std::optional<WeightedAdjacency>> materialize_dataset(const BenchmarkConfig& cfg);

/// Serialises the report in its canonical text form.
std::string report_text(const BenchmarkReport& report);

/// Method metrics at the ranking fraction, read back from a report document.
std::vector<eval::MethodMetrics> metrics_from_report(const nlohmann::json& report);

}  // namespace grnbench::bench

#endif
