// Python bindings. Structured results cross the boundary as JSON documents
// decoded with the json module, so Python sees the same shapes the CLI emits.

#include <fstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "proofminer/error.hpp"
#include "proofminer/features.hpp"
#include "proofminer/kmeans.hpp"
#include "proofminer/library.hpp"
#include "proofminer/premiss.hpp"
#include "proofminer/recurrent.hpp"
#include "proofminer/term_tree.hpp"

namespace py = pybind11;
namespace pm = proofminer;
using nlohmann::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

pm::TypedLibrary load(const std::string& text) { return pm::resolve_types(pm::parse_library(text)); }

py::object features(const std::string& text, int granularity, std::uint64_t seed, bool standardize) {
  const auto r = pm::recurrent_cluster(load(text), granularity, seed);
  json rows = json::array();
  const auto vectors = standardize ? pm::standardize(r.vectors) : r.vectors;
  for (std::size_t i = 0; i < vectors.size(); ++i) rows.push_back({{"name", r.names[i]}, {"values", vectors[i]}});
  return to_py({{"depth", r.dims.depth},
                {"width", r.dims.width},
                {"density", pm::density(r.matrices)},
                {"standardized", standardize},
                {"columns", pm::column_labels(r.dims.depth, r.dims.width)},
                {"rows", rows}});
}

py::object cluster(const std::string& text, int granularity, std::uint64_t seed) {
  return to_py(pm::clustering_to_json(pm::recurrent_cluster(load(text), granularity, seed).clustering()));
}

py::object inspect(const std::string& text, const std::string& name) {
  const auto lib = load(text);
  auto i = lib.index_of(name);
  if (!i) throw pm::UnknownName("unknown object '" + name + "'");
  const auto tree = pm::build_term_tree(*lib[*i].mined_term());
  json nodes = json::array();
  for (const auto& n : tree.nodes())
    nodes.push_back({{"depth", n.depth}, {"index", n.level_index}, {"parent", tree.parent_level_index(n)},
                     {"label", n.label_string()}, {"gallina", n.gallina()}});
  return to_py({{"name", name}, {"depth", tree.depth()}, {"width", tree.width()}, {"nodes", nodes}});
}

py::object kmeans(const std::vector<pm::FeatureVector>& vectors, std::size_t k, std::uint64_t seed) {
  const auto m = pm::kmeans(vectors, k, seed);
  return to_py({{"k", m.k},
                {"assignment", m.assignment},
                {"proximities", m.proximities},
                {"centroids", m.centroids},
                {"radii", m.radii},
                {"objective_trace", m.objective_trace},
                {"iterations", m.iterations}});
}

// `checker` takes the request dict and returns True (accept) or False.
py::object suggest(const std::string& text, const std::string& target, const py::function& checker,
                   int granularity, std::uint64_t seed, std::size_t budget, const py::object& model) {
  const auto lib = load(text);
  const pm::NamedClustering clustering = model.is_none()
                                             ? pm::recurrent_cluster(lib, granularity, seed).clustering()
                                             : pm::clustering_from_json(from_py(model));
  pm::CallbackChecker cb([&](const pm::CheckRequest& req) {
    return checker(to_py(pm::check_request_json(req))).cast<bool>() ? pm::CheckOutcome::kAccepted
                                                                    : pm::CheckOutcome::kRejected;
  });
  return to_py(pm::report_to_json(pm::suggest(target, lib.source(), clustering, cb, {budget, ""})));
}

py::object suggest_with_command(const std::string& library_path, const std::string& target,
                                const std::string& command, int granularity, std::uint64_t seed,
                                std::size_t budget, long timeout_ms) {
  std::string text;
  {
    std::ifstream in(library_path, std::ios::binary);
    if (!in) throw pm::Error("cannot read '" + library_path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const auto lib = load(text);
  const auto clustering = pm::recurrent_cluster(lib, granularity, seed).clustering();
  pm::CheckerConfig config{command, std::chrono::milliseconds(timeout_ms), budget};
  return to_py(pm::report_to_json(pm::suggest(target, lib.source(), clustering, config, library_path)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Recurrent clustering and premiss selection for proof libraries";

  auto base = py::register_exception<pm::Error>(m, "Error", PyExc_RuntimeError);
  auto parse = py::register_exception<pm::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<pm::TypeResolutionError>(m, "TypeResolutionError", base.ptr());
  py::register_exception<pm::GranularityRange>(m, "GranularityRange", base.ptr());
  py::register_exception<pm::TargetNotClustered>(m, "TargetNotClustered", base.ptr());
  py::register_exception<pm::CheckerFailure>(m, "CheckerFailure", base.ptr());
  (void)parse;

  m.def("sort_value", &pm::sort_value, py::arg("ordinal"));
  m.def("object_value", &pm::object_value, py::arg("cluster"), py::arg("proximity"));
  m.def("choose_k", &pm::choose_k, py::arg("n_objects"), py::arg("granularity"));
  m.def("canonical_library", [](const std::string& text) { return pm::serialize_library(pm::parse_library(text)); },
        py::arg("text"), "Parse a library and serialize it back in canonical form.");
  m.def("features", &features, py::arg("text"), py::arg("granularity") = 3, py::arg("seed") = 0,
        py::arg("standardize") = false);
  m.def("cluster", &cluster, py::arg("text"), py::arg("granularity") = 3, py::arg("seed") = 0);
  m.def("inspect", &inspect, py::arg("text"), py::arg("name"));
  m.def("kmeans", &kmeans, py::arg("vectors"), py::arg("k"), py::arg("seed") = 0);
  m.def("suggest", &suggest, py::arg("text"), py::arg("target"), py::arg("checker"), py::arg("granularity") = 3,
        py::arg("seed") = 0, py::arg("budget") = 1000, py::arg("model") = py::none());
  m.def("suggest_with_command", &suggest_with_command, py::arg("library_path"), py::arg("target"),
        py::arg("command"), py::arg("granularity") = 3, py::arg("seed") = 0, py::arg("budget") = 1000,
        py::arg("timeout_ms") = 10000);
}
