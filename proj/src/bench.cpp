#include "grnbench/bench.hpp"

#include "grnbench/io.hpp"
#include "grnbench/parallel.hpp"
#include "grnbench/stats.hpp"
#include "grnbench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace grnbench::bench {

namespace {

constexpr std::uint64_t kSubsetSeedSalt = 0x9e3779b97f4a7c15ULL;
constexpr double kFractionTolerance = 1e-9;

std::vector<std::vector<std::size_t>> rows_by_label(const ExpressionDataset& data) {
    std::vector<std::vector<std::size_t>> groups;
    groups.push_back(data.observational_rows());
    for (auto g : data.perturbed_genes()) {
        groups.push_back(data.perturbed_rows(g));
    }
    return groups;
}

std::string label_name(const ExpressionDataset& data, const std::vector<std::size_t>& rows) {
    const auto& label = data.intervention()[rows.front()];
    return label ? data.gene_names()[*label] : std::string(io::kObservationalLabel);
}

std::string file_stem(const std::string& method, double fraction, std::uint64_t seed) {
    std::string safe;
    for (char c : method) {
        safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    }
    return safe + "_f" + std::to_string(static_cast<int>(std::lround(fraction * 100.0))) + "_s" + std::to_string(seed);
}

nlohmann::ordered_json gbm_to_json(const gbm::GbmParams& p) {
    nlohmann::ordered_json j;
    j["num_leaves"] = p.num_leaves;
    j["max_depth"] = p.max_depth;
    j["min_data_in_leaf"] = p.min_data_in_leaf;
    j["learning_rate"] = p.learning_rate;
    j["min_gain_to_split"] = p.min_gain_to_split;
    j["num_iterations"] = p.num_iterations;
    j["objective"] = p.objective == gbm::Objective::binary_logloss ? "binary_logloss" : "squared_error";
    j["seed"] = p.seed;
    return j;
}

void gbm_from_json(const nlohmann::json& j, gbm::GbmParams& p) {
    p.num_leaves = j.value("num_leaves", p.num_leaves);
    p.max_depth = j.value("max_depth", p.max_depth);
    p.min_data_in_leaf = j.value("min_data_in_leaf", p.min_data_in_leaf);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.min_gain_to_split = j.value("min_gain_to_split", p.min_gain_to_split);
    p.num_iterations = j.value("num_iterations", p.num_iterations);
    p.seed = j.value("seed", p.seed);
    if (j.contains("objective")) {
        const auto name = j.at("objective").get<std::string>();
        if (name == "binary_logloss" || name == "binary") {
            p.objective = gbm::Objective::binary_logloss;
        } else if (name == "squared_error" || name == "regression") {
            p.objective = gbm::Objective::squared_error;
        } else {
            throw std::invalid_argument("unknown objective '" + name + "'");
        }
    }
}

nlohmann::ordered_json sparserc_to_json(const methods::SparseRcOptions& o) {
    nlohmann::ordered_json j;
    j["edge_threshold"] = o.edge_threshold;
    j["huber_delta"] = o.huber_delta;
    j["learning_rate"] = o.learning_rate;
    j["max_inner_steps"] = o.max_inner_steps;
    j["max_outer_iterations"] = o.max_outer_iterations;
    j["h_tolerance"] = o.h_tolerance;
    j["rho_max"] = o.rho_max;
    j["use_intervention_mask"] = o.use_intervention_mask;
    return j;
}

void sparserc_from_json(const nlohmann::json& j, methods::SparseRcOptions& o) {
    o.edge_threshold = j.value("edge_threshold", o.edge_threshold);
    o.huber_delta = j.value("huber_delta", o.huber_delta);
    o.learning_rate = j.value("learning_rate", o.learning_rate);
    o.max_inner_steps = j.value("max_inner_steps", o.max_inner_steps);
    o.max_outer_iterations = j.value("max_outer_iterations", o.max_outer_iterations);
    o.h_tolerance = j.value("h_tolerance", o.h_tolerance);
    o.rho_max = j.value("rho_max", o.rho_max);
    o.use_intervention_mask = j.value("use_intervention_mask", o.use_intervention_mask);
}

nlohmann::ordered_json sem_to_json(const SemConfig& s) {
    nlohmann::ordered_json j;
    j["d"] = s.d;
    j["expected_degree"] = s.expected_degree;
    j["weight_low"] = s.weight_low;
    j["weight_high"] = s.weight_high;
    j["noise_scale"] = s.noise_scale;
    j["root_cause_prob"] = s.root_cause_prob;
    j["root_cause_magnitude"] = s.root_cause_magnitude;
    j["measurement_noise_scale"] = s.measurement_noise_scale;
    j["intervention_value"] = s.intervention_value;
    j["seed"] = s.seed;
    return j;
}

nlohmann::ordered_json config_echo(const BenchmarkConfig& cfg) {
    nlohmann::ordered_json j;
    if (cfg.dataset_path) {
        j["dataset"] = cfg.dataset_path->string();
    }
    if (cfg.synthetic) {
        auto s = sem_to_json(cfg.synthetic->sem);
        s["n_obs"] = cfg.synthetic->n_obs;
        s["n_per_intervention"] = cfg.synthetic->n_per_intervention;
        s["intervened"] = cfg.synthetic->intervened;
        j["synthetic"] = s;
    }
    auto methods = nlohmann::ordered_json::array();
    for (const auto& m : cfg.methods) {
        nlohmann::ordered_json mj;
        mj["name"] = m.name;
        mj["kind"] = to_string(m.kind);
        mj["k"] = m.k;
        mj["strip_interventions"] = m.strip_interventions;
        if (m.kind == MethodKind::sparserc) {
            mj["sparserc"] = sparserc_to_json(m.sparserc);
        } else if (m.kind != MethodKind::mean_difference) {
            mj["gbm"] = gbm_to_json(m.gbm);
        }
        methods.push_back(mj);
    }
    j["methods"] = methods;
    j["fractions"] = cfg.fractions;
    j["seeds"] = cfg.seeds;
    j["test_fraction"] = cfg.test_fraction;
    nlohmann::ordered_json e;
    e["negative_pair_sample_size"] = cfg.eval.negative_pair_sample_size;
    e["mwu_alpha"] = cfg.eval.mwu_alpha;
    e["seed"] = cfg.eval.seed;
    e["min_interventional_cells"] = cfg.eval.min_interventional_cells;
    j["eval"] = e;
    return j;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

Split split_train_test(const ExpressionDataset& data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("split_train_test: test_fraction must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train_rows, test_rows;
    std::vector<std::string> warnings;
    for (auto rows : rows_by_label(data)) {
        if (rows.empty()) {
            continue;
        }
        if (rows.size() < 2) {
            warnings.push_back("label '" + label_name(data, rows) + "' has a single cell; kept in train only");
            train_rows.insert(train_rows.end(), rows.begin(), rows.end());
            continue;
        }
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto wanted = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(rows.size())));
        const auto n_test = std::clamp<std::size_t>(wanted, 1, rows.size() - 1);
        test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
        train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
    }
    if (test_rows.empty()) {
        throw std::invalid_argument("split_train_test: no label has enough cells to hold out");
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return Split{data.select_rows(train_rows), data.select_rows(test_rows), std::move(warnings)};
}

std::vector<GeneIndex> select_intervention_genes(const ExpressionDataset& train, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("subset_interventions: fraction must lie in (0, 1]");
    }
    auto genes = train.perturbed_genes();
    std::mt19937_64 rng(seed ^ kSubsetSeedSalt);
    std::shuffle(genes.begin(), genes.end(), rng);
    const auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(genes.size()) - kFractionTolerance));
    genes.resize(std::min(keep, genes.size()));
    std::sort(genes.begin(), genes.end());
    return genes;
}

ExpressionDataset subset_interventions(const ExpressionDataset& train, double fraction, std::uint64_t seed) {
    const auto genes = select_intervention_genes(train, fraction, seed);
    const std::set<GeneIndex> keep(genes.begin(), genes.end());
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < train.num_cells(); ++r) {
        const auto& label = train.intervention()[r];
        if (!label || keep.count(*label) > 0) {
            rows.push_back(r);
        }
    }
    return train.select_rows(rows);
}

std::string to_string(MethodKind kind) {
    switch (kind) {
        case MethodKind::mean_difference:
            return "mean_difference";
        case MethodKind::betterboost:
            return "betterboost";
        case MethodKind::grnboost:
            return "grnboost";
        case MethodKind::guanlab:
            return "guanlab";
        case MethodKind::sparserc:
            return "sparserc";
    }
    return "unknown";
}

MethodKind method_kind_from_string(const std::string& name) {
    for (auto kind : {MethodKind::mean_difference, MethodKind::betterboost, MethodKind::grnboost, MethodKind::guanlab, MethodKind::sparserc}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown method '" + name + "' (expected mean_difference, betterboost, grnboost, guanlab or sparserc)");
}

MethodSpec default_method(const std::string& name, MethodKind kind) {
    MethodSpec spec;
    spec.name = name;
    spec.kind = kind;
    spec.gbm = kind == MethodKind::guanlab ? gbm::classifier_defaults() : gbm::regression_defaults();
    return spec;
}

RankedEdgeList run_method(const MethodSpec& spec, const ExpressionDataset& train, unsigned threads) {
    const auto data = spec.strip_interventions ? train.without_intervention_labels() : train;
    switch (spec.kind) {
        case MethodKind::mean_difference:
            return methods::mean_difference(data, spec.k);
        case MethodKind::betterboost:
            return methods::betterboost(data, spec.k, spec.gbm, threads);
        case MethodKind::grnboost:
            return methods::grnboost(data, spec.k, spec.gbm, threads);
        case MethodKind::guanlab:
            return methods::guanlab(data, spec.k, spec.gbm);
        case MethodKind::sparserc: {
            auto opts = spec.sparserc;
            opts.max_edges = spec.k;
            return methods::sparserc(data, opts).edges;
        }
    }
    throw std::logic_error("unhandled method kind");
}

void BenchmarkConfig::validate() const {
    if (dataset_path.has_value() == synthetic.has_value()) {
        throw std::invalid_argument("benchmark config needs exactly one of a dataset path or a synthetic source");
    }
    if (methods.empty()) {
        throw std::invalid_argument("benchmark config lists no methods");
    }
    std::set<std::string> names;
    for (const auto& m : methods) {
        if (m.name.empty() || !names.insert(m.name).second) {
            throw std::invalid_argument("method names must be non-empty and unique");
        }
        if (m.k < 1) {
            throw std::invalid_argument("method '" + m.name + "' needs k >= 1");
        }
    }
    if (fractions.empty()) {
        throw std::invalid_argument("benchmark config lists no fractions");
    }
    for (std::size_t k = 0; k < fractions.size(); ++k) {
        if (!(fractions[k] > 0.0 && fractions[k] <= 1.0)) {
            throw std::invalid_argument("fractions must lie in (0, 1]");
        }
        if (k > 0 && !(fractions[k] > fractions[k - 1])) {
            throw std::invalid_argument("fractions must be strictly increasing");
        }
    }
    if (seeds.empty()) {
        throw std::invalid_argument("benchmark config lists no seeds");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in (0, 1)");
    }
    eval.validate();
}

BenchmarkConfig config_from_json(const nlohmann::json& j) {
    BenchmarkConfig cfg;
    if (j.contains("dataset")) {
        cfg.dataset_path = j.at("dataset").get<std::string>();
    }
    if (j.contains("synthetic")) {
        const auto& s = j.at("synthetic");
        SyntheticSource src;
        src.sem.d = s.value("d", src.sem.d);
        src.sem.expected_degree = s.value("expected_degree", src.sem.expected_degree);
        src.sem.weight_low = s.value("weight_low", src.sem.weight_low);
        src.sem.weight_high = s.value("weight_high", src.sem.weight_high);
        src.sem.noise_scale = s.value("noise_scale", src.sem.noise_scale);
        src.sem.root_cause_prob = s.value("root_cause_prob", src.sem.root_cause_prob);
        src.sem.root_cause_magnitude = s.value("root_cause_magnitude", src.sem.root_cause_magnitude);
        src.sem.measurement_noise_scale = s.value("measurement_noise_scale", src.sem.measurement_noise_scale);
        src.sem.intervention_value = s.value("intervention_value", src.sem.intervention_value);
        src.sem.seed = s.value("seed", src.sem.seed);
        src.n_obs = s.value("n_obs", src.n_obs);
        src.n_per_intervention = s.value("n_per_intervention", src.n_per_intervention);
        src.intervened = s.value("intervened", src.intervened);
        cfg.synthetic = src;
    }
    if (j.contains("methods")) {
        for (const auto& mj : j.at("methods")) {
            const auto kind = method_kind_from_string(mj.at("kind").get<std::string>());
            auto spec = default_method(mj.value("name", to_string(kind)), kind);
            spec.k = mj.value("k", spec.k);
            spec.strip_interventions = mj.value("strip_interventions", spec.strip_interventions);
            if (mj.contains("gbm")) {
                gbm_from_json(mj.at("gbm"), spec.gbm);
            }
            if (mj.contains("sparserc")) {
                sparserc_from_json(mj.at("sparserc"), spec.sparserc);
            }
            cfg.methods.push_back(std::move(spec));
        }
    }
    cfg.fractions = j.value("fractions", cfg.fractions);
    cfg.seeds = j.value("seeds", cfg.seeds);
    cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
    if (j.contains("eval")) {
        const auto& e = j.at("eval");
        cfg.eval.negative_pair_sample_size = e.value("negative_pair_sample_size", cfg.eval.negative_pair_sample_size);
        cfg.eval.mwu_alpha = e.value("mwu_alpha", cfg.eval.mwu_alpha);
        cfg.eval.seed = e.value("seed", cfg.eval.seed);
        cfg.eval.min_interventional_cells = e.value("min_interventional_cells", cfg.eval.min_interventional_cells);
    }
    if (j.contains("output_dir")) {
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    cfg.threads = j.value("threads", cfg.threads);
    cfg.validate();
    return cfg;
}

std::pair<ExpressionDataset, std::optional<WeightedAdjacency>> materialize_dataset(const BenchmarkConfig& cfg) {
    if (cfg.dataset_path) {
        return {io::load_dataset(*cfg.dataset_path), std::nullopt};
    }
    const auto& src = cfg.synthetic.value();
    const auto dag = synth::generate_dag(src.sem);
    auto intervened = src.intervened;
    if (intervened.empty()) {
        intervened.resize(src.sem.d);
        std::iota(intervened.begin(), intervened.end(), GeneIndex{0});
    }
    auto [data, truth] = synth::simulate_sem(dag, src.n_obs, src.n_per_intervention, intervened, src.sem);
    return {std::move(data), truth.dag};
}

const MethodSummary& BenchmarkReport::summary(const std::string& method) const {
    for (const auto& s : summaries) {
        if (s.method == method) {
            return s;
        }
    }
    throw std::out_of_range("no summary for method '" + method + "'");
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
    cfg.validate();
    const auto [data, truth] = materialize_dataset(cfg);

    BenchmarkReport report;
    report.config_echo = config_echo(cfg);
    report.config_echo["dataset_summary"] = {{"cells", data.num_cells()}, {"genes", data.num_genes()}, {"perturbed_genes", data.perturbed_genes().size()}};

    std::vector<Split> splits;
    for (auto seed : cfg.seeds) {
        splits.push_back(split_train_test(data, cfg.test_fraction, seed));
        for (const auto& w : splits.back().warnings) {
            report.warnings.push_back("seed " + std::to_string(seed) + ": " + w);
        }
    }
    // trains[s][f]
    std::vector<std::vector<ExpressionDataset>> trains(cfg.seeds.size());
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        for (double f : cfg.fractions) {
            trains[s].push_back(subset_interventions(splits[s].train, f, cfg.seeds[s]));
        }
    }

    const auto n_methods = cfg.methods.size();
    const auto n_fractions = cfg.fractions.size();
    const auto n_jobs = cfg.seeds.size() * n_fractions * n_methods;
    report.runs.resize(n_jobs);

    parallel_for(n_jobs, cfg.threads, [&](std::size_t job) {
        const auto m = job % n_methods;
        const auto f = (job / n_methods) % n_fractions;
        const auto s = job / (n_methods * n_fractions);
        const auto& spec = cfg.methods[m];
        const auto& train = trains[s][f];
        const auto& test = splits[s].test;

        RunRecord& run = report.runs[job];
        run.method = spec.name;
        run.fraction = cfg.fractions[f];
        run.seed = cfg.seeds[s];
        run.interventions_used = train.perturbed_genes().size();
        try {
            run.edges = run_method(spec, train, 1);
            run.num_edges = run.edges.size();
            if (truth) {
                run.shd = shd(run.edges, *truth);
            }
            run.wasserstein = eval::mean_wasserstein_metric(run.edges, test, cfg.eval);
            run.false_omission = eval::false_omission_rate(run.edges, test, cfg.eval);
            run.ok = true;
        } catch (const std::exception& err) {
            run.ok = false;
            run.error = err.what();
        }
    });

    for (std::size_t m = 0; m < n_methods; ++m) {
        MethodSummary summary;
        summary.method = cfg.methods[m].name;
        std::vector<eval::FractionPoint> series;
        for (std::size_t f = 0; f < n_fractions; ++f) {
            FractionSummary fs;
            fs.fraction = cfg.fractions[f];
            std::vector<double> w, fo;
            for (const auto& run : report.runs) {
                if (run.ok && run.method == summary.method && run.fraction == fs.fraction) {
                    w.push_back(run.wasserstein->mean_wasserstein);
                    fo.push_back(run.false_omission->false_omission_rate);
                }
            }
            fs.successful_runs = w.size();
            if (!w.empty()) {
                fs.median_wasserstein = stats::median(w);
                fs.median_false_omission = stats::median(fo);
                series.push_back({fs.fraction, *fs.median_wasserstein});
            }
            summary.fractions.push_back(fs);
        }
        if (series.size() >= 2) {
            summary.auc = eval::auc_over_fractions(series);
        } else {
            report.warnings.push_back("method '" + summary.method + "': AUC undefined (fewer than two evaluated fractions)");
        }
        try {
            summary.delta_25_100 = eval::delta_25_100(series);
        } catch (const std::invalid_argument&) {
            report.warnings.push_back("method '" + summary.method + "': delta_25_100 undefined (needs fractions 0.25 and 1.0)");
        }
        report.summaries.push_back(std::move(summary));
    }

    const bool has_full = std::any_of(cfg.fractions.begin(), cfg.fractions.end(), [](double f) { return std::abs(f - 1.0) < kFractionTolerance; });
    report.ranking_fraction = has_full ? 1.0 : cfg.fractions.back();
    std::vector<eval::MethodMetrics> at_rank;
    for (const auto& s : report.summaries) {
        for (const auto& fs : s.fractions) {
            if (std::abs(fs.fraction - report.ranking_fraction) < kFractionTolerance && fs.median_wasserstein) {
                at_rank.push_back({s.method, *fs.median_wasserstein, *fs.median_false_omission});
            }
        }
    }
    report.ranking = eval::mean_position_ranking(at_rank);

    if (cfg.output_dir) {
        std::filesystem::create_directories(*cfg.output_dir / "edges");
        for (const auto& run : report.runs) {
            if (run.ok || !run.edges.empty()) {
                io::emit_edges(run.edges, data.gene_names(), *cfg.output_dir / "edges" / (file_stem(run.method, run.fraction, run.seed) + ".tsv"));
            }
        }
        std::ofstream out(*cfg.output_dir / "report.json", std::ios::binary);
        out << report_text(report);
        if (!out) {
            throw std::runtime_error("failed writing report.json");
        }
    }
    return report;
}

nlohmann::ordered_json BenchmarkReport::to_json() const {
    nlohmann::ordered_json j;
    j["report_version"] = 1;
    j["config"] = config_echo;
    j["warnings"] = warnings;

    auto runs_json = nlohmann::ordered_json::array();
    for (const auto& run : runs) {
        nlohmann::ordered_json r;
        r["method"] = run.method;
        r["fraction"] = run.fraction;
        r["seed"] = run.seed;
        r["ok"] = run.ok;
        if (!run.ok) {
            r["error"] = run.error;
        }
        r["num_edges"] = run.num_edges;
        r["interventions_used"] = run.interventions_used;
        if (run.wasserstein) {
            r["mean_wasserstein"] = run.wasserstein->mean_wasserstein;
            r["edges_scored"] = run.wasserstein->edges_scored;
            r["edges_skipped"] = run.wasserstein->edges_skipped;
        }
        if (run.false_omission) {
            r["false_omission_rate"] = run.false_omission->false_omission_rate;
            r["false_negatives"] = run.false_omission->false_negatives;
            r["negatives_tested"] = run.false_omission->negatives_tested;
            r["negatives_eligible"] = run.false_omission->negatives_eligible;
        }
        if (run.shd) {
            r["shd"] = *run.shd;
        }
        runs_json.push_back(r);
    }
    j["runs"] = runs_json;

    auto summaries_json = nlohmann::ordered_json::array();
    for (const auto& s : summaries) {
        nlohmann::ordered_json sj;
        sj["method"] = s.method;
        auto series = nlohmann::ordered_json::array();
        for (const auto& fs : s.fractions) {
            nlohmann::ordered_json p;
            p["fraction"] = fs.fraction;
            p["successful_runs"] = fs.successful_runs;
            p["median_wasserstein"] = optional_number(fs.median_wasserstein);
            p["median_false_omission_rate"] = optional_number(fs.median_false_omission);
            series.push_back(p);
        }
        sj["series"] = series;
        sj["auc"] = optional_number(s.auc);
        sj["auc_defined"] = s.auc.has_value();
        sj["delta_25_100"] = optional_number(s.delta_25_100);
        summaries_json.push_back(sj);
    }
    j["summaries"] = summaries_json;

    nlohmann::ordered_json ranking_json;
    ranking_json["fraction"] = ranking_fraction;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : ranking) {
        nlohmann::ordered_json r;
        r["method"] = row.method;
        r["rank_wasserstein"] = row.rank_wasserstein;
        r["rank_for"] = row.rank_for;
        r["mean_position"] = row.mean_position;
        r["mean_wasserstein"] = row.wasserstein;
        r["false_omission_rate"] = row.false_omission;
        rows.push_back(r);
    }
    ranking_json["rows"] = rows;
    j["ranking"] = ranking_json;
    return j;
}

std::string report_text(const BenchmarkReport& report) {
    return report.to_json().dump(2) + "\n";
}

std::vector<eval::MethodMetrics> metrics_from_report(const nlohmann::json& report) {
    if (report.value("report_version", 0) != 1) {
        throw std::invalid_argument("unsupported report version");
    }
    std::vector<eval::MethodMetrics> out;
    for (const auto& row : report.at("ranking").at("rows")) {
        out.push_back({row.at("method").get<std::string>(), row.at("mean_wasserstein").get<double>(), row.at("false_omission_rate").get<double>()});
    }
    return out;
}

}  // namespace grnbench::bench
