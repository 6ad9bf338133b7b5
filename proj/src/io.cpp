#include "mpsm/io.hpp"

#include <charconv>
#include <fstream>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "mpsm/error.hpp"

namespace mpsm::io {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

PointCloud parse_point_cloud(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(lines[i], ',')) {
      double v = 0;
      if (!parse_number(cell, v)) fail(source, i + 1, "malformed number '" + cell + "'");
      if (std::isnan(v)) fail(source, i + 1, "NaN coordinate");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(source, i + 1, "expected " + std::to_string(rows.front().size()) + " columns, found " +
                              std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(source + ": empty input");
  return PointCloud::from_rows(rows);
}

PointCloud read_point_cloud(const fs::path& path) { return parse_point_cloud(read_file(path), path.string()); }

AttributedGraph parse_graph(const std::string& edges_text, const std::optional<std::string>& attributes_text,
                            const std::string& source) {
  AttributedGraph g;
  std::map<std::string, Vertex> ids;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<Vertex>(g.labels.size()));
    if (inserted) g.labels.push_back(label);
    return it->second;
  };

  if (attributes_text) {
    const std::string attr_source = source + " (attributes)";
    const auto lines = split_lines(*attributes_text);
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw InputError(attr_source + ": missing header row");
    auto header = split(lines[first], ',');
    const bool labelled = !header.empty() && header.front() == "vertex";
    for (std::size_t c = labelled ? 1 : 0; c < header.size(); ++c) {
      if (header[c].empty()) fail(attr_source, first + 1, "empty column name");
      g.attributes.push_back({header[c], {}});
    }
    std::size_t row_index = 0;
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
      if (trim(lines[i]).empty()) continue;
      auto cells = split(lines[i], ',');
      if (cells.size() != header.size())
        fail(attr_source, i + 1, "expected " + std::to_string(header.size()) + " columns, found " +
                                     std::to_string(cells.size()));
      const std::string label = labelled ? cells.front() : std::to_string(row_index);
      if (ids.count(label)) fail(attr_source, i + 1, "duplicate vertex label '" + label + "'");
      intern(label);
      for (std::size_t c = labelled ? 1 : 0; c < cells.size(); ++c) {
        double v = 0;
        if (!parse_number(cells[c], v)) fail(attr_source, i + 1, "malformed number '" + cells[c] + "'");
        g.attributes[c - (labelled ? 1 : 0)].values.push_back(v);
      }
      ++row_index;
    }
  }

  const bool closed = attributes_text.has_value();
  const auto lines = split_lines(edges_text);
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = lines[i];
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string a, b, extra;
    if (!(in >> a)) continue;
    if (!(in >> b) || (in >> extra)) fail(source, i + 1, "expected two vertex labels");
    if (closed && (!ids.count(a) || !ids.count(b)))
      fail(source, i + 1, "vertex '" + (ids.count(a) ? b : a) + "' has no attribute row");
    const Vertex u = intern(a), v = intern(b);
    if (u == v) fail(source, i + 1, "self-loop at '" + a + "'");
    if (!seen.insert(std::minmax(u, v)).second) fail(source, i + 1, "duplicate edge " + a + " " + b);
    g.edges.emplace_back(u, v);
  }
  g.vertex_count = static_cast<int>(g.labels.size());
  g.check();
  return g;
}

AttributedGraph read_graph(const fs::path& edges, const std::optional<fs::path>& attributes) {
  std::optional<std::string> attr_text;
  if (attributes) attr_text = read_file(*attributes);
  return parse_graph(read_file(edges), attr_text, edges.string());
}

nlohmann::json complex_to_json(const FilteredComplex& c) {
  nlohmann::json j;
  j["parameters"] = c.parameters();
  j["vertex_count"] = c.vertex_count();
  auto sources = nlohmann::json::array();
  for (int a = 0; a < c.parameters(); ++a)
    sources.push_back(c.percentile_source(a) == PercentileSource::AllSimplices ? "all_simplices" : "vertices");
  j["percentile_sources"] = sources;
  auto simplices = nlohmann::json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto v = c.value(i);
    simplices.push_back({{"vertices", c.simplex(i).vertices()},
                         {"value", std::vector<double>(v.begin(), v.end())}});
  }
  j["simplices"] = simplices;
  return j;
}

FilteredComplex complex_from_json(const nlohmann::json& j) {
  try {
    FilteredComplex c(j.at("parameters").get<int>(), j.value("vertex_count", 0));
    if (j.contains("percentile_sources")) {
      int a = 0;
      for (const auto& s : j.at("percentile_sources"))
        c.set_percentile_source(a++, s.get<std::string>() == "all_simplices" ? PercentileSource::AllSimplices
                                                                          : PercentileSource::Vertices);
    }
    for (const auto& s : j.at("simplices")) {
      auto value = s.at("value").get<std::vector<double>>();
      c.add(Simplex(s.at("vertices").get<std::vector<Vertex>>()), value);
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed complex document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed complex document: ") + e.what());
  }
}

nlohmann::json measure_to_json(const SignedMeasure& mu) {
  nlohmann::json j;
  j["n"] = mu.dimension();
  auto atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto row = nlohmann::json::array();
    for (double x : mu.point(i)) row.push_back(x);
    row.push_back(mu.weight(i));
    atoms.push_back(row);
  }
  j["atoms"] = atoms;
  return j;
}

SignedMeasure measure_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<double> coords;
    std::vector<Weight> weights;
    for (const auto& row : j.at("atoms")) {
      if (!row.is_array() || static_cast<int>(row.size()) != n + 1)
        throw InputError("atom rows must hold n coordinates and a weight");
      for (int i = 0; i < n; ++i) coords.push_back(row[i].get<double>());
      if (!row[n].is_number_integer()) throw InputError("atom weights must be integers");
      weights.push_back(row[n].get<Weight>());
    }
    return SignedMeasure(n, std::move(coords), std::move(weights));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed measure document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed measure document: ") + e.what());
  }
}

nlohmann::json read_json(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string gram_to_csv(const GramMatrix& gram, std::span<const std::string> ids) {
  if (ids.size() != gram.size) throw std::invalid_argument("one identifier per measure is required");
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + ids[i];
  out += '\n';
  for (std::size_t i = 0; i < gram.size; ++i) {
    for (std::size_t j = 0; j < gram.size; ++j) out += (j ? "," : "") + format_double(gram(i, j));
    out += '\n';
  }
  return out;
}

std::string features_to_csv(std::span<const double> features) {
  std::string out;
  for (std::size_t i = 0; i < features.size(); ++i) out += (i ? "," : "") + format_double(features[i]);
  out += '\n';
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace mpsm::io
