#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "awpkit/adversarial.hpp"
#include "awpkit/baselines.hpp"
#include "awpkit/discrepancy.hpp"
#include "awpkit/engine.hpp"
#include "awpkit/harness.hpp"
#include "awpkit/io.hpp"
#include "awpkit/oracle.hpp"

namespace py = pybind11;
using namespace awpkit;

namespace {

using Masses = std::map<std::string, double>;

WeightTable to_table(const Masses& masses, bool normalize) {
  return WeightTable(MassTable::Map(masses.begin(), masses.end()), normalize);
}

Masses to_dict(const MassTable& t) { return Masses(t.masses().begin(), t.masses().end()); }

py::dict result_dict(const PruningResult& r) {
  py::dict d;
  d["pruning"] = std::vector<NodeId>(r.pruning.begin(), r.pruning.end());
  d["node_weights"] = r.node_weights;
  d["w_p"] = to_dict(r.w_p);
  d["w_p_refined"] = to_dict(r.w_p_refined);
  d["basic_queries"] = r.ledger.basic_queries;
  d["node_queries"] = r.ledger.node_queries;
  d["splits"] = r.splits;
  d["stop"] = std::string(to_string(r.stop));
  return d;
}

std::string trace_text(const HierTree& tree, const PruningResult& r) {
  std::ostringstream out;
  write_trace(out, tree, r.trace);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_awpkit, m) {
  m.doc() = "Adaptive weighted pruning over hierarchical trees";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());

  py::class_<HierTree>(m, "Tree")
      .def_static("read", &read_hwt_file, py::arg("path"))
      .def_static("parse", [](const std::string& text) {
        std::istringstream in(text);
        return read_hwt(in);
      }, py::arg("text"))
      .def_static("balanced", [](const std::vector<std::string>& labels) {
        TreeBuilder b;
        b.add_balanced(labels);
        return std::move(b).build();
      }, py::arg("labels"))
      .def("write", &write_hwt_file, py::arg("path"))
      .def("dumps", [](const HierTree& t) {
        std::ostringstream out;
        write_hwt(out, t);
        return out.str();
      })
      .def_property_readonly("root", &HierTree::root)
      .def_property_readonly("node_count", &HierTree::node_count)
      .def_property_readonly("height", &HierTree::height)
      .def("leaf_count", py::overload_cast<>(&HierTree::leaf_count, py::const_))
      .def("is_leaf", &HierTree::is_leaf)
      .def("left", &HierTree::left)
      .def("right", &HierTree::right)
      .def("parent", &HierTree::parent)
      .def("label", &HierTree::label)
      .def("leaves_under", &HierTree::leaves_under)
      .def("leaf_labels", [](const HierTree& t) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < t.leaf_count(); ++i) out.push_back(t.leaf_label(i));
        return out;
      });

  m.def("read_weights", [](const std::filesystem::path& p, bool normalize) {
    return to_dict(read_weights_file(p, normalize));
  }, py::arg("path"), py::arg("normalize") = false);
  m.def("make_labels", &make_labels, py::arg("n"));

  m.def("node_discrepancy", [](const HierTree& t, NodeId v, const Masses& w) {
    return node_discrepancy(t, v, to_table(w, false));
  }, py::arg("tree"), py::arg("node"), py::arg("weights"));
  m.def("pruning_discrepancy", [](const HierTree& t, const std::vector<NodeId>& p,
                                  const Masses& w) {
    return pruning_discrepancy(t, Pruning(p), to_table(w, false));
  }, py::arg("tree"), py::arg("pruning"), py::arg("weights"));
  m.def("optimal_pruning", [](const HierTree& t, std::size_t k, const Masses& w) {
    auto o = optimal_pruning(t, k, to_table(w, false));
    return py::make_tuple(std::vector<NodeId>(o.pruning.begin(), o.pruning.end()),
                          o.discrepancy);
  }, py::arg("tree"), py::arg("k"), py::arg("weights"));
  m.def("split_quality", [](const HierTree& t, const Masses& w) {
    return split_quality(t, to_table(w, false));
  }, py::arg("tree"), py::arg("weights"));
  m.def("tv_distance", [](const Masses& a, const Masses& b) {
    return tv_distance(to_table(a, false), to_table(b, false));
  }, py::arg("a"), py::arg("b"));

  m.def("run_awp", [](const HierTree& t, const Masses& w, std::size_t k, double delta,
                      double beta, std::uint64_t seed, const std::string& radius,
                      std::optional<std::uint64_t> max_basic, bool trace) {
    Oracle oracle(t, to_table(w, false));
    EngineConfig cfg;
    cfg.k = k;
    cfg.delta = delta;
    cfg.beta = beta;
    cfg.seed = seed;
    cfg.radius_mode = parse_radius_mode(radius);
    cfg.strict_bernstein = strict_bernstein_from_env();
    cfg.max_basic_queries = max_basic;
    PruningResult r;
    {
      py::gil_scoped_release release;
      r = run_awp(oracle, cfg);
    }
    auto d = result_dict(r);
    if (trace) d["trace"] = trace_text(t, r);
    return d;
  }, py::arg("tree"), py::arg("weights"), py::arg("k"), py::arg("delta") = 0.05,
     py::arg("beta") = 4.0, py::arg("seed") = 0, py::arg("radius") = "min",
     py::arg("max_basic") = std::optional<std::uint64_t>(1000000), py::arg("trace") = false);

  m.def("run_baseline", [](const std::string& name, const HierTree& t, const Masses& w,
                           std::size_t k, std::uint64_t basic, std::uint64_t node,
                           std::uint64_t seed) {
    Oracle oracle(t, to_table(w, false));
    const Budget budget{basic, node};
    const auto a = parse_algorithm(name);
    PruningResult r;
    switch (a) {
      case Algorithm::kWeight: r = run_weight(oracle, k, budget, seed); break;
      case Algorithm::kUniform: r = run_uniform(oracle, k, budget, seed); break;
      case Algorithm::kEmpirical: r = run_empirical(oracle, k, budget, seed); break;
      case Algorithm::kAwp: throw ArgumentError("use run_awp for awp");
    }
    return result_dict(r);
  }, py::arg("name"), py::arg("tree"), py::arg("weights"), py::arg("k"), py::arg("basic"),
     py::arg("node"), py::arg("seed") = 0);

  m.def("construction", [](const std::string& name, int n, int k) {
    InstanceSpec spec;
    spec.tree_source = TreeSource::kConstruction;
    spec.construction = name;
    spec.n = static_cast<std::size_t>(n);
    spec.construction_k = k;
    auto inst = make_instance(spec);
    return py::make_tuple(inst.tree, to_dict(inst.truth));
  }, py::arg("name"), py::arg("n") = 8, py::arg("k") = 3);

  m.def("synthetic", [](std::size_t n, std::size_t dims, std::size_t bins, double ratio,
                        const std::string& bin_by, std::uint64_t seed) {
    InstanceSpec spec;
    spec.tree_source = TreeSource::kMedianSplit;
    spec.n = n;
    spec.dims = dims;
    spec.bins = bins;
    spec.ratio = ratio;
    spec.bin_by = parse_bin_by(bin_by);
    spec.seed = seed;
    auto inst = make_instance(spec);
    return py::make_tuple(inst.tree, to_dict(inst.truth));
  }, py::arg("n") = 1024, py::arg("dims") = 4, py::arg("bins") = 10, py::arg("ratio") = 4.0,
     py::arg("bin_by") = "shuffle", py::arg("seed") = 0);
}
