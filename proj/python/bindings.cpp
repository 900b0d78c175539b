#include "ghom/cell_graph.hpp"
#include "ghom/error.hpp"
#include "ghom/harness.hpp"
#include "ghom/tensor.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <optional>

namespace py = pybind11;
using namespace ghom;

namespace {

py::dict tensor_dict(const EffectiveTensor& t) {
    py::dict d;
    const Mat2& a = t.a_hom;
    d["a_hom"] = std::vector<std::vector<double>>{{a.a11, a.a12}, {a.a21, a.a22}};
    const auto ev = t.eigenvalues();
    d["eigenvalues"] = std::vector<double>{ev[0], ev[1]};
    std::vector<std::pair<double, double>> slopes;
    for (const auto& b : t.slopes) slopes.emplace_back(b.x, b.y);
    d["slopes"] = slopes;
    d["cell_length"] = t.total_length;
    return d;
}

ExperimentConfig config_with(const std::filesystem::path& path, const std::optional<std::filesystem::path>& outdir,
                             const std::string& mode) {
    auto cfg = load_config(path);
    if (outdir) cfg.outdir = *outdir;
    cfg.dirichlet_mode = parse_dirichlet_mode(mode);
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_ghom, m) {
    m.doc() = "Effective tensors and lattice/homogenized heat simulations";
    py::register_exception<Error>(m, "GhomError", PyExc_ValueError);

    m.def("tensor", [](const std::filesystem::path& pattern) { return tensor_dict(compute_tensor(load_pattern(pattern))); },
          py::arg("pattern"), "Effective tensor of a pattern file.");

    m.def("validate",
          [](const std::filesystem::path& pattern) {
              const auto p = load_pattern(pattern);
              std::vector<std::tuple<std::string, bool, std::string>> out;
              for (const auto& c : validate(p, periodic_identification(p)).checks) out.emplace_back(c.name, c.ok, c.detail);
              return out;
          },
          py::arg("pattern"), "List of (check, ok, detail).");

    m.def("simulate",
          [](const std::filesystem::path& config, double delta, const std::string& mode) {
              const auto cfg = config_with(config, std::nullopt, mode);
              SimulationResult r;
              {
                  py::gil_scoped_release release;
                  r = run_simulation(cfg, delta);
              }
              py::dict d;
              d["delta"] = r.delta;
              d["error"] = r.error;
              d["gradient_plain"] = r.gradient.plain;
              d["gradient_corrected"] = r.gradient.corrected;
              d["scaled_norm"] = r.scaled_norm;
              d["nodes_graph"] = r.nodes_graph;
              d["nodes_2d"] = r.nodes_2d;
              d["seconds"] = r.seconds;
              return d;
          },
          py::arg("config"), py::arg("delta"), py::arg("dirichlet_mode") = "eliminate");

    m.def("converge",
          [](const std::filesystem::path& config, std::optional<std::filesystem::path> outdir, const std::string& mode) {
              const auto cfg = config_with(config, outdir, mode);
              ConvergenceStudy study;
              {
                  py::gil_scoped_release release;
                  study = convergence_study(cfg);
              }
              py::list rows;
              for (const auto& r : study.rows) {
                  py::dict d;
                  d["delta"] = r.delta;
                  d["error"] = r.error;
                  d["order"] = r.order ? py::cast(*r.order) : py::none();
                  d["nodes_graph"] = r.nodes_graph;
                  d["nodes_2d"] = r.nodes_2d;
                  d["seconds"] = r.seconds;
                  rows.append(d);
              }
              py::dict out;
              out["tensor"] = tensor_dict(study.tensor);
              out["rows"] = rows;
              out["fitted_order"] = study.fitted_order;
              return out;
          },
          py::arg("config"), py::arg("outdir") = py::none(), py::arg("dirichlet_mode") = "eliminate");

    m.def("observed_order", &observed_order, py::arg("delta_a"), py::arg("error_a"), py::arg("delta_b"),
          py::arg("error_b"));
    m.def("fitted_order",
          [](const std::vector<double>& deltas, const std::vector<double>& errors) { return fitted_order(deltas, errors); },
          py::arg("deltas"), py::arg("errors"));
}
