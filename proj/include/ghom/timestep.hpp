#pragma once

#include "ghom/linalg.hpp"

#include <cstddef>
#include <functional>
#include <span>

namespace ghom {

/// M dU/dt + K U = L(t), U(0) = U0 on [0, t_final] with uniform steps.
struct TransientSystem {
    SparseMatrix mass;
    SparseMatrix stiffness;
    /// Assembled load vector at time t; empty means zero load.
    std::function<Vector(double)> load;
    Vector initial;
    double dt = 0.0;
    double t_final = 0.0;

    /// Throws unless t_final / dt is an integer to 1e-9.
    std::size_t step_count() const;
};

struct CrankNicolsonOptions {
    double cg_tolerance = 1e-10;
    /// Observer cadence in steps; step 0 and the final step are always reported.
    std::size_t snapshot_every = 1;
};

/// Receives (n, t_n, U_n).
using StepObserver = std::function<void(std::size_t, double, std::span<const double>)>;

/// (M + dt/2 K) U_{n+1} = (M - dt/2 K) U_n + dt/2 (L_{n+1} + L_n), solved by
/// Jacobi-PCG warm-started from U_n. Returns U_N.
Vector crank_nicolson_run(const TransientSystem& system, const StepObserver& observer = {},
                          const CrankNicolsonOptions& options = {});

} // namespace ghom
