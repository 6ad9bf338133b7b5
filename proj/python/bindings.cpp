#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mpsm/config.hpp"
#include "mpsm/descriptors.hpp"
#include "mpsm/error.hpp"
#include "mpsm/homology.hpp"
#include "mpsm/io.hpp"
#include "mpsm/pipeline.hpp"
#include "mpsm/signed_measure.hpp"
#include "mpsm/simplicial.hpp"
#include "mpsm/transport.hpp"
#include "mpsm/vectorize.hpp"

namespace py = pybind11;
using namespace mpsm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud to_cloud(const Array& points) {
  if (points.ndim() != 2) throw std::invalid_argument("points must be a 2-d array");
  return PointCloud(static_cast<int>(points.shape(1)), std::vector<double>(points.data(), points.data() + points.size()));
}

Array to_array(const std::vector<double>& v, std::vector<py::ssize_t> shape) {
  Array out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

AttributedGraph to_graph(int vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  AttributedGraph g;
  g.vertex_count = vertex_count;
  g.edges = edges;
  g.check();
  return g;
}

GridSpec grid_for(const FilteredComplex& c, int resolution, double beta) { return make_grid(c, resolution, beta); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Signed measures of multiparameter persistence modules";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<FilteredComplex>(m, "FilteredComplex")
      .def_property_readonly("parameters", &FilteredComplex::parameters)
      .def_property_readonly("vertex_count", &FilteredComplex::vertex_count)
      .def("__len__", &FilteredComplex::size)
      .def_property_readonly("simplices",
                             [](const FilteredComplex& c) {
                               std::vector<std::vector<Vertex>> out;
                               for (const auto& s : c.simplices()) out.emplace_back(s.vertices().begin(), s.vertices().end());
                               return out;
                             })
      .def_property_readonly("values",
                             [](const FilteredComplex& c) {
                               return to_array(c.values(), {static_cast<py::ssize_t>(c.size()), c.parameters()});
                             })
      .def("to_json", [](const FilteredComplex& c) { return io::complex_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& text) { return io::complex_from_json(nlohmann::json::parse(text)); })
      .def("validate", [](const FilteredComplex& c) { return validate_complex(c).to_string(); });

  m.def("rips", [](const Array& points, double max_edge_length, int max_dim) {
    return build_rips(to_cloud(points), max_edge_length, max_dim);
  }, py::arg("points"), py::arg("max_edge_length") = kInfinity, py::arg("max_dim") = 2);
  m.def("function_rips", [](const Array& points, const std::vector<double>& values, double max_edge_length, int max_dim) {
    return build_function_rips(to_cloud(points), values, max_edge_length, max_dim);
  }, py::arg("points"), py::arg("vertex_values"), py::arg("max_edge_length") = kInfinity, py::arg("max_dim") = 2);
  m.def("lower_star", [](int vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges,
                         const std::vector<std::vector<double>>& axes) {
    return lower_star(to_graph(vertex_count, edges), axes);
  }, py::arg("vertex_count"), py::arg("edges"), py::arg("axes"), "Lower-star filtration; axes[j][v] is axis j at v.");

  m.def("kde_codensity", [](const Array& p, double bw) { return kde_codensity(to_cloud(p), bw); });
  m.def("distance_to_measure", [](const Array& p, double mass) { return distance_to_measure(to_cloud(p), mass); });
  m.def("neighbour_codensity", [](const Array& p, double r) { return neighbour_codensity(to_cloud(p), r); });
  m.def("heat_kernel_signature", [](int vertex_count, const std::vector<std::pair<Vertex, Vertex>>& edges, double t) {
    return heat_kernel_signature(to_graph(vertex_count, edges), t);
  });

  py::class_<GridSpec>(m, "Grid")
      .def(py::init([](std::vector<std::vector<double>> axes) { return GridSpec::from_axes(std::move(axes)); }),
           py::arg("axes"))
      .def_property_readonly("parameters", &GridSpec::parameters)
      .def_property_readonly("shape", &GridSpec::shape)
      .def("axis", [](const GridSpec& g, int j) {
        auto a = g.axis(j);
        return std::vector<double>(a.begin(), a.end());
      })
      .def("padding", &GridSpec::padding);
  m.def("make_grid", &grid_for, py::arg("complex"), py::arg("resolution"), py::arg("beta") = 0.01);

  m.def("hilbert_function", [](const FilteredComplex& c, const std::vector<int>& degrees, const GridSpec& grid,
                               std::uint32_t field, int threads) {
    const auto h = hilbert_function(c, degrees, grid, FieldSpec(field), {threads, -1});
    py::dict out;
    const auto dims = grid.shape();
    std::vector<py::ssize_t> shape(dims.begin(), dims.end());
    for (int d : degrees) {
      auto v = h.values(d);
      py::array_t<std::int32_t> a(shape);
      std::copy(v.begin(), v.end(), a.mutable_data());
      out[py::int_(d)] = a;
    }
    return out;
  }, py::arg("complex"), py::arg("degrees"), py::arg("grid"), py::arg("field") = 11, py::arg("threads") = 1);

  py::class_<SignedMeasure>(m, "SignedMeasure")
      .def(py::init([](const Array& points, const std::vector<Weight>& weights) {
        if (points.ndim() != 2) throw std::invalid_argument("points must be a 2-d array");
        return SignedMeasure(static_cast<int>(points.shape(1)),
                             std::vector<double>(points.data(), points.data() + points.size()), weights);
      }), py::arg("points"), py::arg("weights"))
      .def_property_readonly("dimension", &SignedMeasure::dimension)
      .def("__len__", &SignedMeasure::size)
      .def_property_readonly("points", [](const SignedMeasure& mu) {
        return to_array(mu.coords(), {static_cast<py::ssize_t>(mu.size()), mu.dimension()});
      })
      .def_property_readonly("weights", &SignedMeasure::weights)
      .def_property_readonly("total_mass", &SignedMeasure::total_mass)
      .def("cumulative_at", [](const SignedMeasure& mu, const std::vector<double>& x) { return cumulative_at(mu, x); })
      .def("__add__", [](const SignedMeasure& a, const SignedMeasure& b) { return a + b; })
      .def("__sub__", [](const SignedMeasure& a, const SignedMeasure& b) { return a - b; })
      .def("__neg__", [](const SignedMeasure& a) { return -a; })
      .def("__eq__", [](const SignedMeasure& a, const SignedMeasure& b) { return a == b; })
      .def("to_json", [](const SignedMeasure& mu) { return io::measure_to_json(mu).dump(); });

  m.def("hilbert_signed_measure", [](const FilteredComplex& c, int degree, const GridSpec& grid, std::uint32_t field) {
    const int degrees[] = {degree};
    return hilbert_signed_measure(hilbert_function(c, degrees, grid, FieldSpec(field)), degree);
  }, py::arg("complex"), py::arg("degree"), py::arg("grid"), py::arg("field") = 11);
  m.def("euler_signed_measure", &euler_signed_measure, py::arg("complex"), py::arg("grid"));
  m.def("interior_part", &interior_part, py::arg("measure"), py::arg("grid"));

  m.def("kr_distance", [](const SignedMeasure& a, const SignedMeasure& b, const std::string& p) {
    return kr_distance(a, b, parse_ground_norm(p));
  }, py::arg("mu"), py::arg("nu"), py::arg("p") = "2");
  m.def("sliced_wasserstein", [](const SignedMeasure& a, const SignedMeasure& b, int directions, double sigma,
                                 std::uint64_t seed) {
    return sliced_wasserstein(a, b, SWConfig::sample(a.dimension(), directions, sigma, seed));
  }, py::arg("mu"), py::arg("nu"), py::arg("directions") = 50, py::arg("sigma") = 1.0, py::arg("seed") = 0);
  m.def("sw_gram", [](const std::vector<SignedMeasure>& family, int directions, double sigma, std::uint64_t seed,
                      int threads) {
    if (family.empty()) throw std::invalid_argument("at least one measure is required");
    const auto g = sw_gram(family, SWConfig::sample(family.front().dimension(), directions, sigma, seed), threads);
    return to_array(g.entries, {static_cast<py::ssize_t>(g.size), static_cast<py::ssize_t>(g.size)});
  }, py::arg("measures"), py::arg("directions") = 50, py::arg("sigma") = 1.0, py::arg("seed") = 0,
     py::arg("threads") = 1);

  m.def("gaussian_convolution", [](const SignedMeasure& mu, const GridSpec& grid, const std::vector<double>& bandwidths) {
    const auto bw = bandwidths.empty() ? default_bandwidths(grid) : bandwidths;
    const auto img = gaussian_convolution(mu, grid, KernelSpec::gaussian_bandwidths(bw));
    const auto shape = grid.shape();
    return to_array(img.values, std::vector<py::ssize_t>(shape.begin(), shape.end()));
  }, py::arg("measure"), py::arg("grid"), py::arg("bandwidths") = std::vector<double>{});

  m.def("featurize", [](const std::vector<fs::path>& inputs, const fs::path& out, const std::string& config_ini,
                        int threads, bool keep_going) {
    const auto cfg = PipelineConfig::from_ini(config_ini);
    const auto report = run_pipeline(inputs, cfg, out, {threads, keep_going});
    return report.failures();
  }, py::arg("inputs"), py::arg("out"), py::arg("config") = "", py::arg("threads") = 1, py::arg("keep_going") = false,
     "Runs the pipeline; `config` is an INI document. Returns the number of failed samples.");
  m.def("default_config", [] { return PipelineConfig().to_ini(); });
}
