#include "ghom/timestep.hpp"

#include "ghom/error.hpp"

#include <cmath>
#include <string>

namespace ghom {

std::size_t TransientSystem::step_count() const {
    if (!(dt > 0.0) || !(t_final > 0.0)) throw Error("time step and final time must be positive");
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded))
        throw Error("final time must be an integer multiple of the time step");
    return static_cast<std::size_t>(rounded);
}

Vector crank_nicolson_run(const TransientSystem& system, const StepObserver& observer,
                          const CrankNicolsonOptions& options) {
    const std::size_t n = system.mass.dimension();
    if (system.stiffness.dimension() != n || system.initial.size() != n)
        throw Error("crank_nicolson_run: dimension mismatch");
    const std::size_t steps = system.step_count();
    const double half = 0.5 * system.dt;

    const SparseMatrix lhs = SparseMatrix::linear_combination(1.0, system.mass, half, system.stiffness);
    const SparseMatrix rhs_op = SparseMatrix::linear_combination(1.0, system.mass, -half, system.stiffness);

    const auto load_at = [&](double t) {
        if (!system.load) return Vector(n, 0.0);
        Vector l = system.load(t);
        if (l.size() != n) throw Error("crank_nicolson_run: load vector has wrong length");
        return l;
    };

    Vector u = system.initial;
    Vector load_now = load_at(0.0);
    if (observer) observer(0, 0.0, u);
    const std::size_t every = std::max<std::size_t>(1, options.snapshot_every);

    for (std::size_t step = 0; step < steps; ++step) {
        const double t_next = static_cast<double>(step + 1) * system.dt;
        const Vector load_next = load_at(t_next);
        Vector rhs = spmv(rhs_op, u);
        for (std::size_t i = 0; i < n; ++i) rhs[i] += half * (load_next[i] + load_now[i]);
        try {
            u = cg_solve(lhs, rhs, options.cg_tolerance, 0, std::span<const double>(u)).solution;
        } catch (const SolverError& e) {
            throw SolverError("Crank-Nicolson step " + std::to_string(step + 1) + ": " + e.what(), e.residual());
        }
        load_now = load_next;
        if (observer && ((step + 1) % every == 0 || step + 1 == steps)) observer(step + 1, t_next, u);
    }
    return u;
}

} // namespace ghom
