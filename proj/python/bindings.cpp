// Copyright 2026 The qdeepclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "qdc/allpair.hpp"
#include "qdc/cli.hpp"
#include "qdc/cost_model.hpp"
#include "qdc/dataset.hpp"
#include "qdc/error.hpp"
#include "qdc/metrics.hpp"
#include "qdc/pipeline.hpp"
#include "qdc/qkmeans.hpp"
#include "qdc/serialize.hpp"

namespace py = pybind11;

namespace qdc {
namespace {

// JSON crosses the boundary as text; the Python package decodes it.
json parse(const std::string& text) { return text.empty() ? json::object() : json::parse(text); }

ShotPlan plan_of(std::uint64_t shots, std::uint64_t seed) {
  return shots == 0 ? ShotPlan::exact() : ShotPlan::sampled(shots, seed);
}

std::string cluster_json(const ClusterResult& r) { return to_json(r).dump(); }

class PyMulticlass {
 public:
  PyMulticlass(const RMatrix& x, const std::vector<int>& labels, int g, const std::string& kernel, double eta,
               std::optional<double> eps_k)
      : model_(train_multiclass(x, labels, g, kernel_from_json(parse(kernel)), eta, eps_k,
                                InversionMode::exact_spectral())) {}

  std::vector<int> predict(const RMatrix& x, std::uint64_t shots, std::uint64_t seed, bool oracle) const {
    AllPairOptions opt;
    opt.oracle = oracle;
    const ShotPlan plan = plan_of(shots, seed);
    std::vector<int> out;
    for (Index i = 0; i < x.rows(); ++i) {
      const ShotPlan p = plan.is_sampled() ? plan.derive(static_cast<std::uint64_t>(i)) : plan;
      out.push_back(classify_all_pairs(model_, x.row(i).transpose(), p, opt));
    }
    return out;
  }

  int g() const { return model_.g; }
  std::string to_json_text() const { return to_json(model_).dump(); }

 private:
  MulticlassSVMModel model_;
};

std::tuple<int, std::string, std::string> cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qdc");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace
}  // namespace qdc

PYBIND11_MODULE(_qdc, m) {
  using namespace qdc;
  m.doc() = "Quantum deep clustering simulator core";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string text = std::string(to_string(e.code())) + ": " + e.what();
      PyErr_SetString(error.ptr(), text.c_str());
    }
  });

  m.def(
      "generate_blobs",
      [](int k, int per_blob, int dim, double std, double separation, std::uint64_t seed) {
        const Dataset d = generate_blobs(BlobSpec{k, per_blob, dim, std, separation, seed});
        return py::make_tuple(d.x, *d.labels);
      },
      py::arg("k") = 3, py::arg("per_blob") = 20, py::arg("dim") = 8, py::arg("std") = 1.0,
      py::arg("separation") = 6.0, py::arg("seed") = 1);

  m.def(
      "quantum_distance",
      [](const RVector& x, const RVector& y, std::uint64_t shots, std::uint64_t seed) {
        return quantum_distance(x, y, plan_of(shots, seed));
      },
      py::arg("x"), py::arg("y"), py::arg("shots") = 0, py::arg("seed") = 0);

  m.def(
      "adiabatic_distribution",
      [](const RVector& d, double t_anneal, int steps) { return adiabatic_distribution(d, {t_anneal, steps}); },
      py::arg("distances"), py::arg("t_anneal") = 50.0, py::arg("steps") = 400);

  m.def(
      "qkmeans",
      [](const RMatrix& x, int k, const std::vector<Index>& seeds, int iters, std::uint64_t shots, std::uint64_t seed) {
        QKMeansOptions opt;
        opt.iters = iters;
        opt.plan = plan_of(shots, seed);
        return cluster_json(qkmeans_run(x, k, seeds, opt).first);
      },
      py::arg("x"), py::arg("k"), py::arg("seeds"), py::arg("iters") = 20, py::arg("shots") = 0, py::arg("seed") = 0);

  m.def(
      "lloyd",
      [](const RMatrix& x, int k, const std::vector<Index>& seeds, int iters) {
        return cluster_json(lloyd_classical(x, k, seeds, iters));
      },
      py::arg("x"), py::arg("k"), py::arg("seeds"), py::arg("iters") = 20);

  py::class_<PyMulticlass>(m, "MulticlassSVM")
      .def(py::init<const RMatrix&, const std::vector<int>&, int, const std::string&, double, std::optional<double>>(),
           py::arg("x"), py::arg("labels"), py::arg("g"), py::arg("kernel") = R"({"kind": "linear"})",
           py::arg("eta") = 10.0, py::arg("eps_k") = py::none())
      .def("predict", &PyMulticlass::predict, py::arg("x"), py::arg("shots") = 0, py::arg("seed") = 0,
           py::arg("oracle") = false)
      .def_property_readonly("g", &PyMulticlass::g)
      .def("to_json", &PyMulticlass::to_json_text);

  m.def(
      "run_pipeline",
      [](const std::string& config, const RMatrix& x, std::optional<std::vector<int>> labels) {
        Dataset d;
        d.x = x;
        d.labels = std::move(labels);
        for (Index c = 0; c < x.cols(); ++c) d.columns.push_back("x" + std::to_string(c));
        const PipelineResult r = run_pipeline(pipeline_config_from_json(parse(config)), d);
        json epochs = json::array();
        for (const EpochReport& e : r.epochs) epochs.push_back(to_json(e));
        return json{{"summary", r.summary}, {"epochs", epochs}}.dump();
      },
      py::arg("config"), py::arg("x"), py::arg("labels") = py::none());

  m.def(
      "cost_report",
      [](const std::string& params) {
        const CostParams p = cost_params_from_json(parse(params));
        return json{{"params", to_json(p)}, {"report", to_json(cost_report(p))}}.dump();
      },
      py::arg("params") = "");

  m.def("purity", &purity, py::arg("clusters"), py::arg("truth"));
  m.def("nmi", &nmi, py::arg("clusters"), py::arg("truth"));

  m.def("norm_audit", [] {
    const NormAuditStats s = norm_audit();
    return py::make_tuple(s.states, s.max_deviation);
  });
  m.def("reset_norm_audit", &reset_norm_audit);

  m.def("cli", &cli, py::arg("args"), "Run a qdc subcommand; returns (exit code, stdout, stderr).");
}
