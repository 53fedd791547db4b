#include <edgepost/edgepost.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <bit>
#include <cmath>
#include <sstream>

namespace py = pybind11;
using namespace edgepost;

namespace {

LatticeTable table_from_logs(const std::vector<double>& logs) {
  const std::size_t size = logs.size();
  if (size == 0 || (size & (size - 1)) != 0)
    throw PreconditionError("table length must be a power of two, got " + std::to_string(size));
  LatticeTable t(static_cast<unsigned>(std::countr_zero(size)));
  for (std::size_t i = 0; i < size; ++i) t[i] = LogWeight::from_log(logs[i]);
  return t;
}

std::vector<double> table_to_logs(const LatticeTable& t) {
  std::vector<double> out;
  out.reserve(t.size());
  for (LogWeight w : t.entries()) out.push_back(w.log());
  return out;
}

py::list matrix(const EdgePosteriors& p) {
  py::list rows;
  for (unsigned u = 0; u < p.n; ++u) {
    py::list row;
    for (unsigned v = 0; v < p.n; ++v) row.append(p(u, v));
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact edge posterior probabilities for Bayesian network structure";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
  py::register_exception<IoError>(m, "IoError", error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", error.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](std::vector<std::vector<Dataset::value_type>> rows, std::vector<unsigned> arities,
                       std::optional<std::vector<std::string>> names) {
             unsigned n = arities.size();
             std::vector<std::string> labels;
             if (names) {
               labels = *names;
             } else {
               for (unsigned i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
             }
             return Dataset::from_rows(std::move(labels), std::move(arities), rows);
           }),
           py::arg("rows"), py::arg("arities"), py::arg("names") = py::none(),
           "Build a dataset from records (one list of states per record).")
      .def_static("empty", &Dataset::empty, py::arg("n"), py::arg("arity") = 2)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("m", &Dataset::m)
      .def_property_readonly("names", &Dataset::names)
      .def_property_readonly("arities", &Dataset::arities)
      .def("column",
           [](const Dataset& d, unsigned i) {
             auto c = d.column(i);
             return std::vector<Dataset::value_type>(c.begin(), c.end());
           })
      .def("prefix", &Dataset::prefix)
      .def("to_csv", [](const Dataset& d) {
        std::ostringstream out;
        write_dataset(out, d);
        return out.str();
      });

  m.def(
      "parse_dataset",
      [](const std::string& text, std::optional<std::vector<unsigned>> arities) {
        std::istringstream in(text);
        return parse_dataset(in, arities);
      },
      py::arg("text"), py::arg("arities") = py::none());
  m.def("load_dataset", &load_dataset, py::arg("path"), py::arg("arities") = py::none());

  py::class_<PriorSpec>(m, "PriorSpec")
      .def(py::init([](unsigned k, const std::string& rho, const std::string& score, double ess) {
             PriorSpec s;
             s.k = k;
             s.rho = parse_rho_family(rho);
             s.score.family = parse_score_family(score);
             s.score.ess = ess;
             s.validate();
             return s;
           }),
           py::arg("k"), py::arg("rho") = "cardinality_uniform", py::arg("score") = "k2", py::arg("ess") = 1.0)
      .def_readwrite("k", &PriorSpec::k)
      .def_property_readonly("rho", [](const PriorSpec& s) { return to_string(s.rho); })
      .def_property_readonly("score", [](const PriorSpec& s) { return to_string(s.score.family); })
      .def_property_readonly("ess", [](const PriorSpec& s) { return s.score.ess; });

  py::class_<EdgePosteriors>(m, "EdgePosteriors")
      .def_readonly("n", &EdgePosteriors::n)
      .def_readonly("names", &EdgePosteriors::names)
      .def_property_readonly("log_marginal", [](const EdgePosteriors& p) { return p.log_marginal.log(); })
      .def_readonly("elapsed_ms", &EdgePosteriors::elapsed_ms)
      .def_property_readonly("matrix", &matrix)
      .def("__call__", &EdgePosteriors::operator(), py::arg("u"), py::arg("v"))
      .def("to_json", &posteriors_to_json)
      .def_static("from_json", &posteriors_from_json);

  m.def(
      "edge_posteriors",
      [](const Dataset& data, const PriorSpec& spec, unsigned threads, bool allow_large_n) {
        EngineOptions options;
        options.threads = threads;
        options.max_nodes = allow_large_n ? kExtendedMaxNodes : kDefaultMaxNodes;
        py::gil_scoped_release release;
        return edge_posteriors(data, spec, options);
      },
      py::arg("data"), py::arg("prior"), py::arg("threads") = 1, py::arg("allow_large_n") = false,
      "All directed edge posteriors in O(n 2^n) time.");
  m.def("brute_posteriors", &brute_posteriors, py::arg("data"), py::arg("prior"),
        "Reference posteriors by enumerating every node order (n <= 6).");

  m.def(
      "downward_transform",
      [](const std::vector<double>& logs, unsigned k) {
        return table_to_logs(downward_transform_truncated(table_from_logs(logs), k));
      },
      py::arg("log_values"), py::arg("k"), "Superset sums for sets of size <= k, in the log domain.");
  m.def(
      "upward_transform",
      [](const std::vector<double>& logs, unsigned k) {
        return table_to_logs(upward_transform_truncated(table_from_logs(logs), k));
      },
      py::arg("log_values"), py::arg("k"), "Subset sums of a table supported on sets of size <= k.");
  m.def("naive_downward", [](const std::vector<double>& logs) { return table_to_logs(naive_downward(table_from_logs(logs))); });
  m.def("naive_upward", [](const std::vector<double>& logs) { return table_to_logs(naive_upward(table_from_logs(logs))); });

  py::class_<GroundTruthNetwork>(m, "Network")
      .def_readonly("n", &GroundTruthNetwork::n)
      .def_readonly("k", &GroundTruthNetwork::k)
      .def_readonly("r", &GroundTruthNetwork::r)
      .def_readonly("order", &GroundTruthNetwork::order)
      .def_readonly("seed", &GroundTruthNetwork::seed)
      .def_property_readonly("parents",
                             [](const GroundTruthNetwork& net) {
                               std::vector<std::vector<unsigned>> out;
                               for (NodeSet p : net.parents) out.push_back(p.members());
                               return out;
                             })
      .def_property_readonly("edge_count", &GroundTruthNetwork::edge_count)
      .def("to_json", &network_to_json)
      .def_static("from_json", &network_from_json);

  m.def("generate_network", &generate_network, py::arg("n"), py::arg("k"), py::arg("r"), py::arg("seed"));
  m.def("sample_data", &sample_data, py::arg("network"), py::arg("m"), py::arg("seed"));

  py::class_<RocCurve>(m, "RocCurve")
      .def_readonly("auc", &RocCurve::auc)
      .def_property_readonly("points", [](const RocCurve& c) {
        std::vector<std::tuple<double, double, double>> out;
        for (const RocPoint& p : c.points) out.emplace_back(p.fpr, p.tpr, p.threshold);
        return out;
      });

  m.def("roc", &roc, py::arg("network"), py::arg("posteriors"));
  m.def(
      "roc_from_scores",
      [](const std::vector<double>& scores, const std::vector<bool>& labels) {
        if (scores.size() != labels.size()) throw DimensionMismatch("scores and labels differ in length");
        auto flags = std::make_unique<bool[]>(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) flags[i] = labels[i];
        return roc_from_scores(scores, std::span<const bool>(flags.get(), labels.size()));
      },
      py::arg("scores"), py::arg("labels"));
  m.def("uniform_noise_posteriors", &uniform_noise_posteriors, py::arg("n"), py::arg("seed"));
}
