#include "grnbench/bench.hpp"
#include "grnbench/eval.hpp"
#include "grnbench/io.hpp"
#include "grnbench/methods.hpp"
#include "grnbench/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace fs = std::filesystem;
using namespace grnbench;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    unsigned threads = 1;
};

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    return nlohmann::json::parse(in);
}

/// Ranking input: a bench report (.json) or a TSV with columns method, wasserstein, for.
std::vector<eval::MethodMetrics> read_metrics(const fs::path& path) {
    if (path.extension() == ".json") {
        return bench::metrics_from_report(read_json(path));
    }
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::vector<eval::MethodMetrics> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line.rfind("method", 0) == 0)) {
            continue;
        }
        std::istringstream fields(line);
        eval::MethodMetrics m;
        std::string w, f;
        if (!std::getline(fields, m.method, '\t') || !std::getline(fields, w, '\t') || !std::getline(fields, f, '\t')) {
            throw io::ParseError(path.string(), line_no, 0, "expected method<TAB>wasserstein<TAB>for");
        }
        m.wasserstein = std::stod(w);
        m.false_omission = std::stod(f);
        out.push_back(m);
    }
    return out;
}

void print_ranking(const std::vector<eval::RankingRow>& rows) {
    std::cout << "method\trank_wasserstein\trank_for\tmean_position\twasserstein\tfor\n";
    for (const auto& r : rows) {
        std::cout << r.method << '\t' << r.rank_wasserstein << '\t' << r.rank_for << '\t' << io::format_score(r.mean_position) << '\t'
                  << io::format_score(r.wasserstein) << '\t' << io::format_score(r.false_omission) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gene regulatory network inference benchmark"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--seed", global.seed, "Random seed")->capture_default_str();
    app.add_option("--output-dir", global.output_dir, "Directory for generated files")->capture_default_str();
    app.add_option("--threads", global.threads, "Worker threads")->capture_default_str();

    // generate
    auto* generate = app.add_subcommand("generate", "Write a synthetic perturbation dataset and its generating DAG");
    SemConfig sem;
    std::size_t n_obs = 500, n_per = 50;
    std::string model = "sem";
    std::string dataset_name = "dataset.tsv";
    std::vector<std::string> intervene_on;
    generate->add_option("--genes", sem.d, "Number of genes")->capture_default_str();
    generate->add_option("--expected-degree", sem.expected_degree)->capture_default_str();
    generate->add_option("--weight-low", sem.weight_low)->capture_default_str();
    generate->add_option("--weight-high", sem.weight_high)->capture_default_str();
    generate->add_option("--noise-scale", sem.noise_scale)->capture_default_str();
    generate->add_option("--root-cause-prob", sem.root_cause_prob)->capture_default_str();
    generate->add_option("--root-cause-magnitude", sem.root_cause_magnitude)->capture_default_str();
    generate->add_option("--measurement-noise", sem.measurement_noise_scale)->capture_default_str();
    generate->add_option("--intervention-value", sem.intervention_value)->capture_default_str();
    generate->add_option("--n-obs", n_obs, "Observational cells (root-cause model: total cells)")->capture_default_str();
    generate->add_option("--n-per-intervention", n_per, "Cells per perturbed gene")->capture_default_str();
    generate->add_option("--intervene", intervene_on, "Genes to perturb by index (default: all)");
    generate->add_option("--model", model, "sem or root-causes")->check(CLI::IsMember({"sem", "root-causes"}))->capture_default_str();
    generate->add_option("--name", dataset_name, "Dataset file name inside the output directory")->capture_default_str();

    // infer
    auto* infer = app.add_subcommand("infer", "Run one inference method on a dataset");
    std::string infer_dataset, infer_method = "mean_difference", infer_output;
    std::size_t infer_k = methods::kDefaultTopK;
    bool strip = false;
    int iterations = 0;
    infer->add_option("--dataset", infer_dataset, "Dataset file")->required();
    infer->add_option("--method", infer_method, "mean_difference, betterboost, grnboost, guanlab or sparserc")->capture_default_str();
    infer->add_option("-k,--top-k", infer_k, "Maximum number of edges")->capture_default_str();
    infer->add_option("--output", infer_output, "Edge list path (default: stdout)");
    infer->add_flag("--strip-interventions", strip, "Treat every cell as observational");
    infer->add_option("--iterations", iterations, "Boosting rounds override");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score an edge list against a held-out dataset");
    std::string eval_dataset, eval_edges;
    eval::EvalConfig eval_cfg;
    evaluate->add_option("--dataset", eval_dataset, "Held-out dataset")->required();
    evaluate->add_option("--edges", eval_edges, "Edge list file")->required();
    evaluate->add_option("--negatives", eval_cfg.negative_pair_sample_size, "Negative pairs to sample")->capture_default_str();
    evaluate->add_option("--alpha", eval_cfg.mwu_alpha, "Mann-Whitney significance level")->capture_default_str();
    evaluate->add_option("--min-cells", eval_cfg.min_interventional_cells, "Minimum perturbed cells per parent")->capture_default_str();

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the intervention-fraction benchmark from a JSON config");
    std::string config_path;
    bench_cmd->add_option("--config", config_path, "Benchmark config (JSON)")->required();

    // rank
    auto* rank = app.add_subcommand("rank", "Rank methods from metric tables or bench reports");
    std::vector<std::string> rank_inputs;
    rank->add_option("inputs", rank_inputs, "Metric TSV files or report.json files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            sem.seed = global.seed;
            const fs::path out_dir(global.output_dir);
            const auto dag = synth::generate_dag(sem);
            std::optional<ExpressionDataset> data;
            if (model == "sem") {
                std::vector<GeneIndex> genes;
                if (intervene_on.empty()) {
                    genes.resize(sem.d);
                    std::iota(genes.begin(), genes.end(), GeneIndex{0});
                } else {
                    for (const auto& g : intervene_on) {
                        genes.push_back(std::stoul(g));
                    }
                }
                data = synth::simulate_sem(dag, n_obs, n_per, genes, sem).first;
            } else {
                data = synth::simulate_few_root_causes(dag, n_obs, sem).first;
            }
            io::save_dataset(out_dir / dataset_name, *data);
            io::save_adjacency(out_dir / (fs::path(dataset_name).stem().string() + ".truth.tsv"), dag, data->gene_names());
            std::cerr << "wrote " << (out_dir / dataset_name).string() << " (" << data->num_cells() << " cells, " << data->num_genes() << " genes, "
                      << dag.num_edges() << " true edges)\n";
        } else if (*infer) {
            const auto data = io::load_dataset(infer_dataset);
            auto spec = bench::default_method(infer_method, bench::method_kind_from_string(infer_method));
            spec.k = infer_k;
            spec.strip_interventions = strip;
            spec.gbm.seed = global.seed;
            if (iterations > 0) {
                spec.gbm.num_iterations = iterations;
            }
            const auto edges = bench::run_method(spec, data, global.threads);
            if (infer_output.empty()) {
                io::write_edges(std::cout, edges, data.gene_names());
            } else {
                io::emit_edges(edges, data.gene_names(), infer_output);
            }
        } else if (*evaluate) {
            const auto data = io::load_dataset(eval_dataset);
            const auto edges = io::load_edges(eval_edges, data.gene_names());
            eval_cfg.seed = global.seed;
            nlohmann::ordered_json j;
            const auto w = eval::mean_wasserstein_metric(edges, data, eval_cfg);
            j["mean_wasserstein"] = w.mean_wasserstein;
            j["edges_scored"] = w.edges_scored;
            j["edges_skipped"] = w.edges_skipped;
            const auto f = eval::false_omission_rate(edges, data, eval_cfg);
            j["false_omission_rate"] = f.false_omission_rate;
            j["false_negatives"] = f.false_negatives;
            j["negatives_tested"] = f.negatives_tested;
            std::cout << j.dump(2) << '\n';
        } else if (*bench_cmd) {
            auto cfg = bench::config_from_json(read_json(config_path));
            if (app.count("--output-dir") > 0 || !cfg.output_dir) {
                cfg.output_dir = global.output_dir;
            }
            if (app.count("--threads") > 0) {
                cfg.threads = global.threads;
            }
            const auto report = bench::run_benchmark(cfg);
            print_ranking(report.ranking);
            std::cerr << "report written to " << (*cfg.output_dir / "report.json").string() << '\n';
        } else if (*rank) {
            if (rank_inputs.size() == 1) {
                print_ranking(eval::mean_position_ranking(read_metrics(rank_inputs.front())));
            } else {
                std::vector<std::vector<eval::RankingRow>> rankings;
                for (const auto& path : rank_inputs) {
                    rankings.push_back(eval::mean_position_ranking(read_metrics(path)));
                }
                std::cout << "method\tmean_rank";
                for (std::size_t k = 0; k < rank_inputs.size(); ++k) {
                    std::cout << "\trank_wasserstein_" << k + 1 << "\trank_for_" << k + 1;
                }
                std::cout << '\n';
                for (const auto& row : eval::combine_rankings(rankings)) {
                    std::cout << row.method << '\t' << io::format_score(row.mean_rank);
                    for (int r : row.ranks) {
                        std::cout << '\t' << r;
                    }
                    std::cout << '\n';
                }
            }
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
