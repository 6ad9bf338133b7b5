#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpsm/simplicial.hpp"
#include "mpsm/signed_measure.hpp"
#include "mpsm/transport.hpp"

namespace mpsm::io {

namespace fs = std::filesystem;

/// One point per row, comma separated, no header. Throws InputError naming
/// the file and row of the first malformed line.
PointCloud read_point_cloud(const fs::path& path);
PointCloud parse_point_cloud(const std::string& text, const std::string& source = "<input>");

/// `u v` per line (`#` starts a comment) plus an optional attribute CSV whose
/// header names the columns. A first column named `vertex` carries external
/// labels; otherwise row i belongs to label "i". Labels are mapped to dense
/// ids and kept in AttributedGraph::labels.
AttributedGraph read_graph(const fs::path& edges, const std::optional<fs::path>& attributes);
AttributedGraph parse_graph(const std::string& edges_text, const std::optional<std::string>& attributes_text,
                            const std::string& source = "<input>");

nlohmann::json complex_to_json(const FilteredComplex& complex);
FilteredComplex complex_from_json(const nlohmann::json& j);

/// {"n": n, "atoms": [[x_1, ..., x_n, weight], ...]}
nlohmann::json measure_to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json read_json(const fs::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string gram_to_csv(const GramMatrix& gram, std::span<const std::string> ids);
std::string features_to_csv(std::span<const double> features);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const fs::path& path, const std::string& content);
std::string read_file(const fs::path& path);

}  // namespace mpsm::io
