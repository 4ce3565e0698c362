#include "grnbench/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

namespace grnbench::io {

namespace {

std::vector<std::string_view> split_line(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto stop = line.find(delimiter, start);
        if (stop == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, stop - start));
        start = stop + 1;
    }
    return fields;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

std::optional<double> parse_double(std::string_view text) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        return std::nullopt;
    }
    return value;
}

void check_name(const std::string& name, char delimiter) {
    if (name.empty() || name.find(delimiter) != std::string::npos || name.find('\n') != std::string::npos || name.find('\r') != std::string::npos) {
        throw std::invalid_argument("gene name '" + name + "' cannot be written in the delimited format");
    }
    if (name == kObservationalLabel || name == kInterventionColumn) {
        throw std::invalid_argument("gene name '" + name + "' is reserved");
    }
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + (column > 0 ? ":" + std::to_string(column) : std::string()) + ": " + message),
      line_(line),
      column_(column) {}

std::string format_exact(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string format_score(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

ExpressionDataset read_dataset(std::istream& in, const std::string& source, char delimiter) {
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(source, 1, 0, "missing header");
    }
    const auto header = split_line(line, delimiter);
    if (header.empty() || header.front() != kInterventionColumn) {
        throw ParseError(source, 1, 1, std::string("header must start with '") + kInterventionColumn + "'");
    }
    std::vector<std::string> genes;
    std::unordered_map<std::string, GeneIndex> index;
    for (std::size_t c = 1; c < header.size(); ++c) {
        std::string name(header[c]);
        if (name.empty()) {
            throw ParseError(source, 1, c + 1, "empty gene name");
        }
        if (name == kObservationalLabel) {
            throw ParseError(source, 1, c + 1, std::string("gene name '") + kObservationalLabel + "' is reserved");
        }
        if (!index.emplace(name, genes.size()).second) {
            throw ParseError(source, 1, c + 1, "duplicate gene name '" + name + "'");
        }
        genes.push_back(std::move(name));
    }
    if (genes.size() < 2) {
        throw ParseError(source, 1, 0, "need at least two genes");
    }

    std::vector<double> values;
    std::vector<Intervention> labels;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_line(line, delimiter);
        if (fields.size() != genes.size() + 1) {
            throw ParseError(source, line_no, 0, "expected " + std::to_string(genes.size() + 1) + " fields, got " + std::to_string(fields.size()));
        }
        const std::string label(fields[0]);
        if (label == kObservationalLabel) {
            labels.emplace_back(std::nullopt);
        } else {
            const auto it = index.find(label);
            if (it == index.end()) {
                throw ParseError(source, line_no, 1, "intervention label '" + label + "' is neither a gene in the header nor '" + kObservationalLabel + "'");
            }
            labels.emplace_back(it->second);
        }
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const auto v = parse_double(fields[c]);
            if (!v || !std::isfinite(*v)) {
                throw ParseError(source, line_no, c + 1, "invalid numeric value '" + std::string(fields[c]) + "'");
            }
            values.push_back(*v);
        }
    }
    if (labels.empty()) {
        throw ParseError(source, line_no, 0, "dataset has no cells");
    }

    const auto n = static_cast<Eigen::Index>(labels.size());
    const auto m = static_cast<Eigen::Index>(genes.size());
    Matrix x(n, m);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            x(r, c) = values[static_cast<std::size_t>(r * m + c)];
        }
    }
    return ExpressionDataset(std::move(x), std::move(genes), std::move(labels));
}

ExpressionDataset load_dataset(const std::filesystem::path& path, char delimiter) {
    auto in = open_input(path);
    return read_dataset(in, path.string(), delimiter);
}

void write_dataset(std::ostream& out, const ExpressionDataset& data, char delimiter) {
    for (const auto& name : data.gene_names()) {
        check_name(name, delimiter);
    }
    out << kInterventionColumn;
    for (const auto& name : data.gene_names()) {
        out << delimiter << name;
    }
    out << '\n';
    const auto& x = data.values();
    for (std::size_t r = 0; r < data.num_cells(); ++r) {
        const auto& label = data.intervention()[r];
        out << (label ? data.gene_names()[*label] : std::string(kObservationalLabel));
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            out << delimiter << format_exact(x(static_cast<Eigen::Index>(r), c));
        }
        out << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const ExpressionDataset& data, char delimiter) {
    auto out = open_output(path);
    write_dataset(out, data, delimiter);
    finish(out, path);
}

void write_edges(std::ostream& out, const RankedEdgeList& edges, const std::vector<std::string>& gene_names) {
    if (edges.min_gene_count() > gene_names.size()) {
        throw std::invalid_argument("edge list references genes without names");
    }
    out << "parent\tchild\tscore\n";
    for (const auto& e : edges) {
        out << gene_names[e.parent] << '\t' << gene_names[e.child] << '\t' << format_score(e.score) << '\n';
    }
}

void emit_edges(const RankedEdgeList& edges, const std::vector<std::string>& gene_names, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_edges(out, edges, gene_names);
    finish(out, path);
}

RankedEdgeList read_edges(std::istream& in, const std::vector<std::string>& gene_names, const std::string& source) {
    std::unordered_map<std::string, GeneIndex> index;
    for (std::size_t g = 0; g < gene_names.size(); ++g) {
        index.emplace(gene_names[g], g);
    }
    std::string line;
    if (!next_line(in, line) || line != "parent\tchild\tscore") {
        throw ParseError(source, 1, 0, "expected header 'parent<TAB>child<TAB>score'");
    }
    std::vector<Edge> edges;
    std::size_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = split_line(line, '\t');
        if (fields.size() != 3) {
            throw ParseError(source, line_no, 0, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        Edge e;
        for (int c = 0; c < 2; ++c) {
            const auto it = index.find(std::string(fields[static_cast<std::size_t>(c)]));
            if (it == index.end()) {
                throw ParseError(source, line_no, static_cast<std::size_t>(c + 1), "unknown gene '" + std::string(fields[static_cast<std::size_t>(c)]) + "'");
            }
            (c == 0 ? e.parent : e.child) = it->second;
        }
        const auto score = parse_double(fields[2]);
        if (!score || std::isnan(*score)) {
            throw ParseError(source, line_no, 3, "invalid score '" + std::string(fields[2]) + "'");
        }
        e.score = *score;
        edges.push_back(e);
    }
    try {
        return RankedEdgeList(std::move(edges));
    } catch (const std::invalid_argument& err) {
        throw ParseError(source, line_no, 0, err.what());
    }
}

RankedEdgeList load_edges(const std::filesystem::path& path, const std::vector<std::string>& gene_names) {
    auto in = open_input(path);
    return read_edges(in, gene_names, path.string());
}

void save_adjacency(const std::filesystem::path& path, const WeightedAdjacency& adj, const std::vector<std::string>& gene_names) {
    if (gene_names.size() != adj.dim()) {
        throw std::invalid_argument("save_adjacency: gene name count does not match dimension");
    }
    auto out = open_output(path);
    out << "gene";
    for (const auto& name : gene_names) {
        out << '\t' << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < adj.dim(); ++i) {
        out << gene_names[i];
        for (std::size_t j = 0; j < adj.dim(); ++j) {
            out << '\t' << format_exact(adj(i, j));
        }
        out << '\n';
    }
    finish(out, path);
}

WeightedAdjacency load_adjacency(const std::filesystem::path& path) {
    auto in = open_input(path);
    const auto source = path.string();
    std::string line;
    if (!next_line(in, line)) {
        throw ParseError(source, 1, 0, "missing header");
    }
    const auto d = split_line(line, '\t').size() - 1;
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        if (!next_line(in, line)) {
            throw ParseError(source, i + 2, 0, "missing row");
        }
        const auto fields = split_line(line, '\t');
        if (fields.size() != d + 1) {
            throw ParseError(source, i + 2, 0, "expected " + std::to_string(d + 1) + " fields");
        }
        for (std::size_t j = 0; j < d; ++j) {
            const auto v = parse_double(fields[j + 1]);
            if (!v) {
                throw ParseError(source, i + 2, j + 2, "invalid weight");
            }
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return WeightedAdjacency(std::move(a));
}

}  // namespace grnbench::io
