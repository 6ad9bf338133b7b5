#include "mpsm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "mpsm/error.hpp"
#include "mpsm/io.hpp"

namespace mpsm {

namespace {

namespace pt = boost::property_tree;

template <class Enum>
struct Names {
  std::vector<std::pair<Enum, std::string>> table;

  std::string name(Enum e) const {
    for (const auto& [k, v] : table)
      if (k == e) return v;
    throw std::logic_error("unnamed enumerator");
  }
  Enum parse(const std::string& key, const std::string& text) const {
    std::string options;
    for (const auto& [k, v] : table) {
      if (v == text) return k;
      options += (options.empty() ? "" : ", ") + v;
    }
    throw std::invalid_argument(key + ": unknown value '" + text + "' (expected one of " + options + ")");
  }
};

const Names<FiltrationConfig::Kind> kFiltrations{{{FiltrationConfig::Kind::Rips, "rips"},
                                                  {FiltrationConfig::Kind::FunctionRips, "function-rips"},
                                                  {FiltrationConfig::Kind::LowerStar, "lower-star"}}};
const Names<MeasureConfig::Kind> kMeasures{{{MeasureConfig::Kind::Hilbert, "hilbert"},
                                            {MeasureConfig::Kind::Euler, "euler"}}};
const Names<VectorizationConfig::Kind> kVectorizations{
    {{VectorizationConfig::Kind::None, "none"},
     {VectorizationConfig::Kind::Convolution, "convolution"},
     {VectorizationConfig::Kind::SlicedWasserstein, "sliced-wasserstein"}}};

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + io::format_double(values[i]);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty list item in '" + text + "'");
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw std::invalid_argument(key + ": cannot parse '" + text + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse_scalar<T>(key, item));
  return out;
}

bool is_cloud_descriptor(const DescriptorSpec& d) { return !d.needs_graph(); }

}  // namespace

std::string to_string(FiltrationConfig::Kind kind) { return kFiltrations.name(kind); }
std::string to_string(MeasureConfig::Kind kind) { return kMeasures.name(kind); }
std::string to_string(VectorizationConfig::Kind kind) { return kVectorizations.name(kind); }

int PipelineConfig::parameters() const {
  switch (filtration.kind) {
    case FiltrationConfig::Kind::Rips: return 1;
    case FiltrationConfig::Kind::FunctionRips: return 2;
    case FiltrationConfig::Kind::LowerStar: return static_cast<int>(filtration.attributes.size());
  }
  return 0;
}

int PipelineConfig::max_dimension() const {
  if (filtration.max_dim > 0) return filtration.max_dim;
  return *std::max_element(homology.degrees.begin(), homology.degrees.end()) + 1;
}

void PipelineConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  require(!homology.degrees.empty(), "homology.degrees: at least one degree is required");
  std::set<int> seen;
  for (int d : homology.degrees) {
    require(d >= 0, "homology.degrees: degrees must be non-negative");
    require(seen.insert(d).second, "homology.degrees: duplicate degree " + std::to_string(d));
  }
  FieldSpec{homology.field};
  require(grid.resolution >= 2, "grid.resolution: must be at least 2");
  require(grid.beta >= 0 && grid.beta < 0.5, "grid.beta: must lie in [0, 0.5)");
  require(filtration.max_edge_length > 0, "filtration.max_edge_length: must be positive");
  require(filtration.max_dim >= 0, "filtration.max_dim: must be non-negative");
  if (filtration.max_dim > 0)
    require(filtration.max_dim >= *seen.rbegin() + 1 || measure.kind == MeasureConfig::Kind::Euler,
            "filtration.max_dim: must exceed the largest homology degree");
  if (filtration.kind == FiltrationConfig::Kind::FunctionRips) {
    DescriptorSpec d;
    try {
      d = DescriptorSpec::parse(filtration.descriptor);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("filtration.descriptor: ") + e.what());
    }
    require(is_cloud_descriptor(d), "filtration.descriptor: '" + filtration.descriptor +
                                        "' needs a graph; function-rips takes kde, dtm or codegree");
  }
  if (filtration.kind == FiltrationConfig::Kind::LowerStar)
    require(!filtration.attributes.empty(), "filtration.attributes: lower-star needs at least one attribute");
  const auto n = static_cast<std::size_t>(parameters());
  require(vectorization.bandwidths.empty() || vectorization.bandwidths.size() == n,
          "vectorization.bandwidths: expected " + std::to_string(n) + " values");
  for (double b : vectorization.bandwidths) require(b > 0, "vectorization.bandwidths: must be positive");
  require(vectorization.directions >= 1, "vectorization.directions: must be at least 1");
  require(vectorization.sigma > 0, "vectorization.sigma: must be positive");
  require(scales.empty() || scales.size() == n, "vectorization.scales: expected " + std::to_string(n) + " values");
  for (double s : scales) require(s > 0, "vectorization.scales: must be positive");
}

std::string PipelineConfig::to_ini() const {
  std::ostringstream os;
  std::string attrs;
  for (std::size_t i = 0; i < filtration.attributes.size(); ++i) attrs += (i ? "," : "") + filtration.attributes[i];
  std::string degrees;
  for (std::size_t i = 0; i < homology.degrees.size(); ++i)
    degrees += (i ? "," : "") + std::to_string(homology.degrees[i]);
  os << "[filtration]\n"
     << "kind = " << to_string(filtration.kind) << "\n"
     << "max_edge_length = " << io::format_double(filtration.max_edge_length) << "\n"
     << "max_dim = " << filtration.max_dim << "\n"
     << "descriptor = " << filtration.descriptor << "\n"
     << "attributes = " << attrs << "\n\n"
     << "[homology]\n"
     << "degrees = " << degrees << "\n"
     << "field = " << homology.field << "\n\n"
     << "[grid]\n"
     << "resolution = " << grid.resolution << "\n"
     << "beta = " << io::format_double(grid.beta) << "\n\n"
     << "[measure]\n"
     << "kind = " << to_string(measure.kind) << "\n\n"
     << "[vectorization]\n"
     << "kind = " << to_string(vectorization.kind) << "\n"
     << "bandwidths = " << join_doubles(vectorization.bandwidths) << "\n"
     << "directions = " << vectorization.directions << "\n"
     << "sigma = " << io::format_double(vectorization.sigma) << "\n"
     << "scales = " << join_doubles(scales) << "\n"
     << "seed = " << seed << "\n";
  return os.str();
}

PipelineConfig PipelineConfig::from_ini(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InputError(std::string("config: ") + e.what());
  }

  const std::map<std::string, std::set<std::string>> known{
      {"filtration", {"kind", "max_edge_length", "max_dim", "descriptor", "attributes"}},
      {"homology", {"degrees", "field"}},
      {"grid", {"resolution", "beta"}},
      {"measure", {"kind"}},
      {"vectorization", {"kind", "bandwidths", "directions", "sigma", "scales", "seed"}}};
  for (const auto& [section, body] : tree) {
    auto it = known.find(section);
    if (it == known.end()) throw InputError("config: unknown section or key '" + section + "'");
    for (const auto& [key, _] : body)
      if (!it->second.count(key)) throw InputError("config: unknown key '" + section + "." + key + "'");
  }

  PipelineConfig c;
  auto get = [&](const std::string& path) { return tree.get_optional<std::string>(pt::ptree::path_type(path, '.')); };
  try {
    if (auto v = get("filtration.kind")) c.filtration.kind = kFiltrations.parse("filtration.kind", *v);
    if (auto v = get("filtration.max_edge_length"))
      c.filtration.max_edge_length = parse_scalar<double>("filtration.max_edge_length", *v);
    if (auto v = get("filtration.max_dim")) c.filtration.max_dim = parse_scalar<int>("filtration.max_dim", *v);
    if (auto v = get("filtration.descriptor")) c.filtration.descriptor = *v;
    if (auto v = get("filtration.attributes")) c.filtration.attributes = v->empty() ? std::vector<std::string>{} : split_list(*v);
    if (auto v = get("homology.degrees")) c.homology.degrees = v->empty() ? std::vector<int>{} : parse_list<int>("homology.degrees", *v);
    if (auto v = get("homology.field")) c.homology.field = parse_scalar<std::uint32_t>("homology.field", *v);
    if (auto v = get("grid.resolution")) c.grid.resolution = parse_scalar<int>("grid.resolution", *v);
    if (auto v = get("grid.beta")) c.grid.beta = parse_scalar<double>("grid.beta", *v);
    if (auto v = get("measure.kind")) c.measure.kind = kMeasures.parse("measure.kind", *v);
    if (auto v = get("vectorization.kind")) c.vectorization.kind = kVectorizations.parse("vectorization.kind", *v);
    if (auto v = get("vectorization.bandwidths"))
      c.vectorization.bandwidths = v->empty() ? std::vector<double>{} : parse_list<double>("vectorization.bandwidths", *v);
    if (auto v = get("vectorization.directions"))
      c.vectorization.directions = parse_scalar<int>("vectorization.directions", *v);
    if (auto v = get("vectorization.sigma")) c.vectorization.sigma = parse_scalar<double>("vectorization.sigma", *v);
    if (auto v = get("vectorization.scales")) c.scales = v->empty() ? std::vector<double>{} : parse_list<double>("vectorization.scales", *v);
    if (auto v = get("vectorization.seed")) c.seed = parse_scalar<std::uint64_t>("vectorization.seed", *v);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  try {
    return from_ini(io::read_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string PipelineConfig::hash() const {
  const std::string text = to_ini();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

}  // namespace mpsm
