#pragma once

#include "ghom/cell_graph.hpp"
#include "ghom/fem2d.hpp"
#include "ghom/graph_fem.hpp"
#include "ghom/lattice.hpp"
#include "ghom/linalg.hpp"
#include "ghom/tensor.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ghom {

/// One experiment: lattice vs homogenized heat conduction on (0,L1)x(0,L2).
struct ExperimentConfig {
    std::filesystem::path pattern;
    double l1 = 1.0;
    double l2 = 1.0;
    std::vector<double> deltas{0.25, 0.125, 0.0625};
    double t_final = 2.0;
    double dt = 0.002;
    std::size_t degree_graph = 2;
    std::size_t splits = 3;
    std::size_t nx = 4;
    std::size_t ny = 4;
    std::size_t degree_2d = 6;
    double source_amp = 4.0;
    double source_k = 196.0;
    double source_cx = 0.5;
    double source_cy = 0.5;
    double source_lambda = 3.0;
    double a_const = 1.0;
    double rho_cp = 1.0;
    DirichletSpec dirichlet = DirichletSpec::whole_boundary();
    std::filesystem::path outdir;

    /// Not a file key; selectable from the API and the CLI.
    DirichletMode dirichlet_mode = DirichletMode::eliminate;

    SourceSpec source() const;
    /// Throws Error when a value is out of range or a delta does not tile the domain.
    void check() const;
};

/// `key = value` lines, `#` comments. Relative pattern/outdir paths are
/// resolved against `base_dir`. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_text(const ExperimentConfig& cfg);

/// sqrt((Ud - Up)^T M (Ud - Up) / (Ud^T M Ud)).
double relative_error(std::span<const double> lattice_solution, std::span<const double> projected,
                      const SparseMatrix& mass);

struct HomogenizedSolution {
    QuadFeSpace space;
    Vector final_state;
    double seconds = 0.0;
};

HomogenizedSolution solve_homogenized(const ExperimentConfig& cfg, const Mat2& a_hom);

struct GradientErrors {
    double plain = 0.0;      ///< sqrt(delta) || d_s(u^delta - u^0) ||
    double corrected = 0.0;  ///< sqrt(delta) || d_s(u^delta - u^0 - delta u^1) ||
};

/// Broken edge-wise derivative errors at one time level. The first-order
/// term u^1 = grad u^0 . phi(x/delta) contributes grad u^0 . d_s phi along
/// every edge; its slow-variable derivative is dropped.
GradientErrors corrector_gradient_error(const UnitCellPattern& pattern, const LatticeMesh& mesh,
                                        const GraphFeSpace& space, std::span<const double> lattice_solution,
                                        const QuadFeSpace& hom_space, std::span<const double> hom_solution,
                                        const CorrectorField& corrector);

struct SimulationResult {
    double delta = 0.0;
    LatticeMesh mesh;
    GraphFeSpace space;
    SparseMatrix mass;            ///< unconstrained lattice mass matrix
    Vector lattice_solution;      ///< U^delta at t_final, all nodes
    Vector projected;             ///< homogenized solution at the lattice nodes
    double error = 0.0;
    GradientErrors gradient;
    double scaled_norm = 0.0;     ///< sqrt(delta * U^T M U / rho_cp)
    std::size_t nodes_graph = 0;
    std::size_t nodes_2d = 0;
    double seconds = 0.0;
};

/// tensor -> lattice -> assembly -> Crank-Nicolson (both models) -> projection -> error.
/// A precomputed homogenized solution may be passed to share it across deltas.
SimulationResult run_simulation(const ExperimentConfig& cfg, double delta,
                                const HomogenizedSolution* homogenized = nullptr);

struct ConvergenceRow {
    double delta = 0.0;
    double error = 0.0;
    std::optional<double> order;  ///< against the previous row
    std::size_t nodes_graph = 0;
    std::size_t nodes_2d = 0;
    double seconds = 0.0;
    double scaled_norm = 0.0;
    GradientErrors gradient;
};

struct ConvergenceStudy {
    EffectiveTensor tensor;
    std::vector<ConvergenceRow> rows;
    double fitted_order = 0.0;
};

/// log(E_a / E_b) / log(delta_a / delta_b)
double observed_order(double delta_a, double error_a, double delta_b, double error_b);
/// Least-squares slope of log E against log delta.
double fitted_order(std::span<const double> deltas, std::span<const double> errors);

/// Runs every delta of the config. When cfg.outdir is set, writes
/// convergence.csv, tensor.txt, solution_2d.csv and solution_graph_<delta>.csv.
ConvergenceStudy convergence_study(const ExperimentConfig& cfg);

/// key=value report: A_hom (17 significant digits), eigenvalues, slopes, |cell|.
std::string format_tensor_report(const EffectiveTensor& tensor);
/// A11,A12,A21,A22,lambda_min,lambda_max,total_length
std::string format_tensor_csv(const EffectiveTensor& tensor);

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceStudy& study);

/// Formats a delta for file names (e.g. 0.0625).
std::string delta_label(double delta);

} // namespace ghom
