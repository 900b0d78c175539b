#include "ghom/harness.hpp"

#include "ghom/error.hpp"
#include "ghom/quadrature.hpp"
#include "ghom/timestep.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace ghom {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, std::size_t line) {
    const auto slash = text.find('/');
    if (slash != std::string::npos)
        return parse_number(trim(text.substr(0, slash)), line) / parse_number(trim(text.substr(slash + 1)), line);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + text + "'");
    }
    if (used != text.size()) throw ParseError(line, "expected a number, got '" + text + "'");
    return value;
}

std::size_t parse_count(const std::string& text, std::size_t line) {
    const double v = parse_number(text, line);
    if (v < 0 || v != std::floor(v)) throw ParseError(line, "expected a non-negative integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

bool is_integer_ratio(double a, double b) {
    const double r = a / b;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r)) && std::round(r) >= 1;
}

std::string g17(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

SourceSpec ExperimentConfig::source() const {
    return SourceSpec::gaussian(source_amp, source_k, {source_cx, source_cy}, source_lambda);
}

void ExperimentConfig::check() const {
    if (!(l1 > 0) || !(l2 > 0)) throw Error("config: L1 and L2 must be positive");
    if (deltas.empty()) throw Error("config: no deltas");
    for (double d : deltas) {
        if (!(d > 0)) throw Error("config: deltas must be positive");
        if (!is_integer_ratio(l1, d) || !is_integer_ratio(l2, d))
            throw Error("config: delta " + g17(d) + " does not divide L1 and L2 into whole cells");
    }
    if (!(t_final > 0) || !(dt > 0)) throw Error("config: t_final and dt must be positive");
    if (!is_integer_ratio(t_final, dt)) throw Error("config: t_final / dt is not an integer");
    if (degree_graph < 1 || degree_graph > 3) throw Error("config: degree_graph must be 1, 2 or 3");
    if (splits < 1) throw Error("config: splits must be at least 1");
    if (nx < 1 || ny < 1 || degree_2d < 1) throw Error("config: nx, ny and degree_2d must be positive");
    if (!(a_const > 0) || !(rho_cp > 0)) throw Error("config: a_const and rho_cp must be positive");
    if (source_k < 0) throw Error("config: source_k must be non-negative");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line = 0;
    std::map<std::string, std::size_t> seen;
    while (std::getline(in, raw)) {
        ++line;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string body = trim(raw);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");
        if (seen.count(key)) throw ParseError(line, "duplicate key '" + key + "'");
        seen[key] = line;

        if (key == "pattern") {
            std::filesystem::path p(value);
            cfg.pattern = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (key == "outdir") {
            std::filesystem::path p(value);
            cfg.outdir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
        } else if (key == "L1") {
            cfg.l1 = parse_number(value, line);
        } else if (key == "L2") {
            cfg.l2 = parse_number(value, line);
        } else if (key == "deltas") {
            cfg.deltas.clear();
            std::string item;
            std::istringstream items(value);
            while (std::getline(items, item, ',')) {
                std::istringstream words(item);
                std::string w;
                while (words >> w) cfg.deltas.push_back(parse_number(w, line));
            }
            if (cfg.deltas.empty()) throw ParseError(line, "empty delta list");
        } else if (key == "t_final") {
            cfg.t_final = parse_number(value, line);
        } else if (key == "dt") {
            cfg.dt = parse_number(value, line);
        } else if (key == "degree_graph") {
            cfg.degree_graph = parse_count(value, line);
        } else if (key == "splits") {
            cfg.splits = parse_count(value, line);
        } else if (key == "nx") {
            cfg.nx = parse_count(value, line);
        } else if (key == "ny") {
            cfg.ny = parse_count(value, line);
        } else if (key == "degree_2d") {
            cfg.degree_2d = parse_count(value, line);
        } else if (key == "source_amp") {
            cfg.source_amp = parse_number(value, line);
        } else if (key == "source_k") {
            cfg.source_k = parse_number(value, line);
        } else if (key == "source_cx") {
            cfg.source_cx = parse_number(value, line);
        } else if (key == "source_cy") {
            cfg.source_cy = parse_number(value, line);
        } else if (key == "source_lambda") {
            cfg.source_lambda = parse_number(value, line);
        } else if (key == "a_const") {
            cfg.a_const = parse_number(value, line);
        } else if (key == "rho_cp") {
            cfg.rho_cp = parse_number(value, line);
        } else if (key == "dirichlet") {
            try {
                cfg.dirichlet = DirichletSpec::parse(value);
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(line, e.what());
            }
        } else {
            throw ParseError(line, "unknown key '" + key + "'");
        }
    }
    if (cfg.pattern.empty()) throw ParseError(line, "missing key 'pattern'");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

std::string to_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "pattern = " << cfg.pattern.string() << "\n";
    out << "L1 = " << cfg.l1 << "\nL2 = " << cfg.l2 << "\n";
    out << "deltas = ";
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) out << (i ? ", " : "") << cfg.deltas[i];
    out << "\nt_final = " << cfg.t_final << "\ndt = " << cfg.dt << "\n";
    out << "degree_graph = " << cfg.degree_graph << "\nsplits = " << cfg.splits << "\n";
    out << "nx = " << cfg.nx << "\nny = " << cfg.ny << "\ndegree_2d = " << cfg.degree_2d << "\n";
    out << "source_amp = " << cfg.source_amp << "\nsource_k = " << cfg.source_k << "\n";
    out << "source_cx = " << cfg.source_cx << "\nsource_cy = " << cfg.source_cy << "\n";
    out << "source_lambda = " << cfg.source_lambda << "\n";
    out << "a_const = " << cfg.a_const << "\nrho_cp = " << cfg.rho_cp << "\n";
    out << "dirichlet = " << cfg.dirichlet.to_string() << "\n";
    if (!cfg.outdir.empty()) out << "outdir = " << cfg.outdir.string() << "\n";
    return out.str();
}

double relative_error(std::span<const double> lattice_solution, std::span<const double> projected,
                      const SparseMatrix& mass) {
    if (lattice_solution.size() != projected.size() || lattice_solution.size() != mass.dimension())
        throw Error("relative_error: dimension mismatch");
    const double reference = quadratic_form(mass, lattice_solution);
    if (!(reference > 0)) throw Error("reference solution vanishes");
    Vector diff(lattice_solution.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = lattice_solution[i] - projected[i];
    return std::sqrt(std::max(0.0, quadratic_form(mass, diff)) / reference);
}

namespace {

Vector run_constrained(const SparseMatrix& mass, const SparseMatrix& stiffness,
                       std::span<const std::size_t> dirichlet_nodes, DirichletMode mode,
                       const std::function<Vector(double)>& full_load, const ExperimentConfig& cfg) {
    const Vector zero(mass.dimension(), 0.0);
    ConstrainedSystem sys = apply_dirichlet(mass, stiffness, zero, dirichlet_nodes, mode);
    TransientSystem ts;
    ts.mass = sys.mass;
    ts.stiffness = sys.stiffness;
    ts.initial = Vector(sys.mass.dimension(), 0.0);
    ts.dt = cfg.dt;
    ts.t_final = cfg.t_final;
    ts.load = [&](double t) {
        Vector full = full_load(t);
        if (sys.mode == DirichletMode::penalty) {
            for (std::size_t i : dirichlet_nodes) full[i] = 0.0;
            return full;
        }
        return sys.restrict_vector(full);
    };
    return sys.expand(crank_nicolson_run(ts));
}

}  // namespace

HomogenizedSolution solve_homogenized(const ExperimentConfig& cfg, const Mat2& a_hom) {
    const auto start = Clock::now();
    QuadFeSpace space(cfg.l1, cfg.l2, cfg.nx, cfg.ny, cfg.degree_2d, cfg.dirichlet);
    HomogenizedProblem problem;
    problem.a_hom = a_hom;
    problem.conductivity = CoefficientField::constant(cfg.a_const);
    problem.rho_cp = cfg.rho_cp;
    problem.source = cfg.source();
    const MatrixPair mats = assemble_2d(space, problem);
    Vector final_state = run_constrained(
        mats.mass, mats.stiffness, space.dirichlet_nodes(), cfg.dirichlet_mode,
        [&](double t) { return assemble_load_2d(space, problem.source, t); }, cfg);
    return {std::move(space), std::move(final_state), seconds_since(start)};
}

GradientErrors corrector_gradient_error(const UnitCellPattern& pattern, const LatticeMesh& mesh,
                                        const GraphFeSpace& space, std::span<const double> lattice_solution,
                                        const QuadFeSpace& hom_space, std::span<const double> hom_solution,
                                        const CorrectorField& corrector) {
    if (pattern.has_length_overrides())
        throw Error("corrector_gradient_error: pattern has length overrides, true positions are required");
    if (lattice_solution.size() != space.node_count()) throw Error("corrector_gradient_error: dimension mismatch");
    if (corrector.edges.size() != pattern.edge_count())
        throw Error("corrector_gradient_error: corrector does not match the pattern");

    const LagrangeBasis1D basis(space.degree);
    const QuadratureRule rule = gauss_legendre(space.degree + 2);
    const std::size_t nq = rule.points.size();

    std::vector<Vec2> points;
    points.reserve(space.elements.size() * nq);
    for (const GraphElement& e : space.elements)
        for (double xi : rule.points) points.push_back(e.start + xi * (e.end - e.start));
    const std::vector<Vec2> grads = evaluate_gradient_at_points(hom_space, hom_solution, points);

    double plain = 0.0;
    double corrected = 0.0;
    for (std::size_t k = 0; k < space.elements.size(); ++k) {
        const GraphElement& e = space.elements[k];
        const Vec2 t = e.tangent();
        const Vec2 slope = corrector.edges[mesh.edges[e.lattice_edge].pattern_edge].slope;
        for (std::size_t q = 0; q < nq; ++q) {
            double du = 0.0;
            for (std::size_t a = 0; a < e.nodes.size(); ++a)
                du += lattice_solution[e.nodes[a]] * basis.derivative(a, rule.points[q]);
            du /= e.length;
            const Vec2 g = grads[k * nq + q];
            const double r0 = du - dot(g, t);
            const double r1 = r0 - dot(g, slope);
            const double w = rule.weights[q] * e.length;
            plain += w * r0 * r0;
            corrected += w * r1 * r1;
        }
    }
    return {std::sqrt(mesh.delta * plain), std::sqrt(mesh.delta * corrected)};
}

SimulationResult run_simulation(const ExperimentConfig& cfg, double delta, const HomogenizedSolution* homogenized) {
    cfg.check();
    const auto start = Clock::now();
    const UnitCellPattern pattern = load_pattern(cfg.pattern);
    const PeriodicStructure periodic = require_valid(pattern);
    const EffectiveTensor tensor = solve_tensor(build_incidence_system(pattern, periodic), pattern.total_length());

    std::optional<HomogenizedSolution> own;
    if (!homogenized) {
        own.emplace(solve_homogenized(cfg, tensor.a_hom));
        homogenized = &*own;
    }

    SimulationResult result;
    result.delta = delta;
    result.mesh = mark_dirichlet(build_lattice(pattern, cfg.l1, cfg.l2, delta), cfg.dirichlet);
    result.space = build_space(result.mesh, cfg.degree_graph, cfg.splits);
    result.mass = assemble_mass(result.space, cfg.rho_cp);
    const SparseMatrix stiffness = assemble_stiffness(result.space, CoefficientField::constant(cfg.a_const));
    const SourceSpec source = cfg.source();
    result.lattice_solution = run_constrained(
        result.mass, stiffness, result.space.dirichlet_nodes, cfg.dirichlet_mode,
        [&](double t) { return assemble_load(result.space, source, t); }, cfg);

    result.projected = evaluate_at_points(homogenized->space, homogenized->final_state, result.space.nodes);
    result.error = relative_error(result.lattice_solution, result.projected, result.mass);
    result.scaled_norm = std::sqrt(delta * quadratic_form(result.mass, result.lattice_solution) / cfg.rho_cp);
    result.gradient = corrector_gradient_error(pattern, result.mesh, result.space, result.lattice_solution,
                                               homogenized->space, homogenized->final_state,
                                               corrector_slopes(tensor, pattern, periodic));
    result.nodes_graph = result.space.node_count();
    result.nodes_2d = homogenized->space.node_count();
    result.seconds = seconds_since(start) + (own ? 0.0 : homogenized->seconds);
    return result;
}

double observed_order(double delta_a, double error_a, double delta_b, double error_b) {
    return std::log(error_a / error_b) / std::log(delta_a / delta_b);
}

double fitted_order(std::span<const double> deltas, std::span<const double> errors) {
    if (deltas.size() != errors.size() || deltas.size() < 2) throw Error("fitted_order: need at least two points");
    const double n = static_cast<double>(deltas.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double x = std::log(deltas[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw Error("fitted_order: deltas must differ");
    return (n * sxy - sx * sy) / denom;
}

std::string delta_label(double delta) {
    std::ostringstream out;
    out << std::setprecision(12) << delta;
    return out.str();
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceStudy& study) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << std::setprecision(17) << "delta,error,order,nodes_graph,nodes_2d,seconds\n";
    for (const ConvergenceRow& r : study.rows) {
        out << r.delta << ',' << r.error << ',';
        if (r.order)
            out << *r.order;
        else
            out << "nan";
        out << ',' << r.nodes_graph << ',' << r.nodes_2d << ',' << r.seconds << '\n';
    }
}

std::string format_tensor_report(const EffectiveTensor& tensor) {
    const Mat2& a = tensor.a_hom;
    const auto ev = tensor.eigenvalues();
    std::ostringstream out;
    out << "A11=" << g17(a.a11) << " A12=" << g17(a.a12) << " A21=" << g17(a.a21) << " A22=" << g17(a.a22) << "\n";
    out << "lambda_min=" << g17(ev[0]) << " lambda_max=" << g17(ev[1]) << "\n";
    for (std::size_t j = 0; j < tensor.slopes.size(); ++j)
        out << "b" << j + 1 << "=" << g17(tensor.slopes[j].x) << "," << g17(tensor.slopes[j].y) << "\n";
    out << "cell_length=" << g17(tensor.total_length) << "\n";
    return out.str();
}

std::string format_tensor_csv(const EffectiveTensor& tensor) {
    const Mat2& a = tensor.a_hom;
    const auto ev = tensor.eigenvalues();
    std::ostringstream out;
    out << g17(a.a11) << ',' << g17(a.a12) << ',' << g17(a.a21) << ',' << g17(a.a22) << ',' << g17(ev[0]) << ','
        << g17(ev[1]) << ',' << g17(tensor.total_length);
    return out.str();
}

ConvergenceStudy convergence_study(const ExperimentConfig& cfg) {
    cfg.check();
    if (cfg.deltas.size() < 2) throw Error("convergence_study: need at least two deltas");
    const UnitCellPattern pattern = load_pattern(cfg.pattern);
    const PeriodicStructure periodic = require_valid(pattern);

    ConvergenceStudy study;
    study.tensor = solve_tensor(build_incidence_system(pattern, periodic), pattern.total_length());
    const HomogenizedSolution hom = solve_homogenized(cfg, study.tensor.a_hom);

    const bool write = !cfg.outdir.empty();
    if (write) std::filesystem::create_directories(cfg.outdir);

    auto one = [&](double delta) {
        SimulationResult r = run_simulation(cfg, delta, &hom);
        if (write)
            write_nodal_csv(cfg.outdir / ("solution_graph_" + delta_label(delta) + ".csv"), r.space.nodes,
                            r.lattice_solution);
        ConvergenceRow row;
        row.delta = delta;
        row.error = r.error;
        row.nodes_graph = r.nodes_graph;
        row.nodes_2d = r.nodes_2d;
        row.seconds = r.seconds;
        row.scaled_norm = r.scaled_norm;
        row.gradient = r.gradient;
        return row;
    };

    if (std::thread::hardware_concurrency() > 1) {
        std::vector<std::future<ConvergenceRow>> jobs;
        for (double d : cfg.deltas) jobs.push_back(std::async(std::launch::async, one, d));
        for (auto& j : jobs) study.rows.push_back(j.get());
    } else {
        for (double d : cfg.deltas) study.rows.push_back(one(d));
    }

    std::vector<double> ds, es;
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        ConvergenceRow& r = study.rows[i];
        if (!std::isfinite(r.error)) throw Error("convergence_study: non-finite error at delta " + g17(r.delta));
        if (i > 0) r.order = observed_order(study.rows[i - 1].delta, study.rows[i - 1].error, r.delta, r.error);
        ds.push_back(r.delta);
        es.push_back(r.error);
    }
    study.fitted_order = fitted_order(ds, es);

    if (write) {
        write_convergence_csv(cfg.outdir / "convergence.csv", study);
        std::ofstream t(cfg.outdir / "tensor.txt");
        t << format_tensor_report(study.tensor);
        write_grid_csv(cfg.outdir / "solution_2d.csv", hom.space, hom.final_state, 64);
    }
    return study;
}

}  // namespace ghom
