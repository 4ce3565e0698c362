#ifndef GRNBENCH_IO_HPP
#define GRNBENCH_IO_HPP

#include "grnbench/core_data.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

/**
 * @file io.hpp
 * @brief Text formats for datasets, edge lists and weighted adjacencies.
 *
 * Dataset: delimiter-separated text (tab by default), header `intervention` followed by gene names,
 * then one row per cell: label (`non-targeting` for observational cells, otherwise a gene name from
 * the header) and m numeric values. Values are written in shortest round-trip form.
 *
 * Edge list: header `parent<TAB>child<TAB>score`, one edge per line in rank order, scores with 12
 * significant digits.
 */

namespace grnbench::io {

inline constexpr const char* kObservationalLabel = "non-targeting";
inline constexpr const char* kInterventionColumn = "intervention";

/// Malformed input, with 1-based line (and column, when known) of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

ExpressionDataset read_dataset(std::istream& in, const std::string& source = "<stream>", char delimiter = '\t');
ExpressionDataset load_dataset(const std::filesystem::path& path, char delimiter = '\t');

/// @throws std::invalid_argument if a gene name would not survive a reload (delimiter, newline, reserved label).
void write_dataset(std::ostream& out, const ExpressionDataset& data, char delimiter = '\t');
void save_dataset(const std::filesystem::path& path, const ExpressionDataset& data, char delimiter = '\t');

void write_edges(std::ostream& out, const RankedEdgeList& edges, const std::vector<std::string>& gene_names);
void emit_edges(const RankedEdgeList& edges, const std::vector<std::string>& gene_names, const std::filesystem::path& path);

RankedEdgeList read_edges(std::istream& in, const std::vector<std::string>& gene_names, const std::string& source = "<stream>");
RankedEdgeList load_edges(const std::filesystem::path& path, const std::vector<std::string>& gene_names);

/// Square matrix with a header of gene names; row i lists the weights of edges leaving gene i.
void save_adjacency(const std::filesystem::path& path, const WeightedAdjacency& adj, const std::vector<std::string>& gene_names);
WeightedAdjacency load_adjacency(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// `value` with 12 significant digits.
std::string format_score(double value);

}  // namespace grnbench::io

#endif
