#include "ghom/cell_graph.hpp"
#include "ghom/error.hpp"
#include "ghom/harness.hpp"
#include "ghom/tensor.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

int run_tensor(const std::string& pattern_file, bool csv) {
    const ghom::UnitCellPattern pattern = ghom::load_pattern(pattern_file);
    const ghom::EffectiveTensor tensor = ghom::compute_tensor(pattern);
    if (csv)
        std::cout << ghom::format_tensor_csv(tensor) << "\n";
    else
        std::cout << ghom::format_tensor_report(tensor);
    return 0;
}

int run_validate(const std::string& pattern_file) {
    const ghom::UnitCellPattern pattern = ghom::load_pattern(pattern_file);
    ghom::PeriodicStructure periodic;
    try {
        periodic = ghom::periodic_identification(pattern);
    } catch (const ghom::Error& e) {
        std::cout << "periodic: FAIL " << e.what() << "\n";
        return 1;
    }
    const ghom::ValidationReport report = ghom::validate(pattern, periodic);
    for (const auto& c : report.checks) {
        std::cout << c.name << ": " << (c.ok ? "ok" : "FAIL");
        if (!c.ok && !c.detail.empty()) std::cout << " " << c.detail;
        std::cout << "\n";
    }
    return report.ok() ? 0 : 1;
}

int run_simulate(ghom::ExperimentConfig cfg, double delta, const std::string& outdir) {
    if (!outdir.empty()) cfg.outdir = outdir;
    if (cfg.outdir.empty()) cfg.outdir = ".";
    cfg.deltas = {delta};
    cfg.check();

    const ghom::UnitCellPattern pattern = ghom::load_pattern(cfg.pattern);
    const ghom::EffectiveTensor tensor = ghom::compute_tensor(pattern);
    const ghom::HomogenizedSolution hom = ghom::solve_homogenized(cfg, tensor.a_hom);
    const ghom::SimulationResult r = ghom::run_simulation(cfg, delta, &hom);

    std::filesystem::create_directories(cfg.outdir);
    ghom::write_nodal_csv(cfg.outdir / ("solution_graph_" + ghom::delta_label(delta) + ".csv"), r.space.nodes,
                          r.lattice_solution);
    ghom::write_grid_csv(cfg.outdir / "solution_2d.csv", hom.space, hom.final_state, 64);
    std::ofstream(cfg.outdir / "tensor.txt") << ghom::format_tensor_report(tensor);

    std::cout << std::setprecision(17);
    std::cout << "delta=" << delta << "\n";
    std::cout << "error=" << r.error << "\n";
    std::cout << "gradient_plain=" << r.gradient.plain << "\n";
    std::cout << "gradient_corrected=" << r.gradient.corrected << "\n";
    std::cout << "scaled_norm=" << r.scaled_norm << "\n";
    std::cout << "nodes_graph=" << r.nodes_graph << "\n";
    std::cout << "nodes_2d=" << r.nodes_2d << "\n";
    std::cout << "seconds=" << r.seconds << "\n";
    return 0;
}

int run_converge(ghom::ExperimentConfig cfg, const std::string& outdir) {
    if (!outdir.empty()) cfg.outdir = outdir;
    if (cfg.outdir.empty()) cfg.outdir = ".";
    const ghom::ConvergenceStudy study = ghom::convergence_study(cfg);
    std::printf("%-12s %-24s %-10s %-12s %-9s %s\n", "delta", "error", "order", "nodes_graph", "nodes_2d", "seconds");
    for (const auto& r : study.rows) {
        std::printf("%-12.6g %-24.17g ", r.delta, r.error);
        if (r.order)
            std::printf("%-10.4f ", *r.order);
        else
            std::printf("%-10s ", "-");
        std::printf("%-12zu %-9zu %.3f\n", r.nodes_graph, r.nodes_2d, r.seconds);
    }
    std::printf("fitted_order=%.6f\n", study.fitted_order);
    std::printf("wrote %s\n", (cfg.outdir / "convergence.csv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homogenization of periodic graph lattices"};
    app.name("ghom");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string pattern_file, config_file, outdir, mode = "eliminate";
    bool csv = false;
    double delta = 0.0;

    auto* tensor = app.add_subcommand("tensor", "Effective conductivity tensor of a unit cell");
    tensor->add_option("--pattern", pattern_file, "Pattern file")->required()->check(CLI::ExistingFile);
    tensor->add_flag("--csv", csv, "One-line CSV: A11,A12,A21,A22,lambda_min,lambda_max,cell_length");

    auto* validate = app.add_subcommand("validate", "Check that a unit cell is admissible");
    validate->add_option("--pattern", pattern_file, "Pattern file")->required()->check(CLI::ExistingFile);

    auto* simulate = app.add_subcommand("simulate", "Lattice and homogenized runs at one period");
    simulate->add_option("--config", config_file, "Config file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--delta", delta, "Period")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--outdir", outdir, "Override the output directory");
    simulate->add_option("--dirichlet-mode", mode, "eliminate or penalty")
        ->check(CLI::IsMember({"eliminate", "penalty"}));

    auto* converge = app.add_subcommand("converge", "Error against the period for every delta of the config");
    converge->add_option("--config", config_file, "Config file")->required()->check(CLI::ExistingFile);
    converge->add_option("--outdir", outdir, "Override the output directory");
    converge->add_option("--dirichlet-mode", mode, "eliminate or penalty")
        ->check(CLI::IsMember({"eliminate", "penalty"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*tensor) return run_tensor(pattern_file, csv);
        if (*validate) return run_validate(pattern_file);
        ghom::ExperimentConfig cfg = ghom::load_config(config_file);
        cfg.dirichlet_mode = ghom::parse_dirichlet_mode(mode);
        if (*simulate) return run_simulate(cfg, delta, outdir);
        return run_converge(cfg, outdir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
