#pragma once

#include "ghom/cell_graph.hpp"
#include "ghom/geometry.hpp"
#include "ghom/linalg.hpp"

#include <cstddef>
#include <vector>

namespace ghom {

/// Block incidence system of the periodic cell graph.
///
/// With b the stacked per-edge slopes of q = phi + id and Q stacked values at
/// the interior vertices, the cell problem reduces to
///
///     incidence * b = 0                               (Kirchhoff)
///     incidence^T * Q + diag(lengths) * b = shifts     (edge-wise Newton-Leibniz)
///
/// The 2x2 block (i, j) of `incidence` is +I when edge j ends at the
/// (representative of the) i-th interior vertex, -I when it starts there, and
/// 0 otherwise; a loop of the periodic graph contributes +I - I = 0.
struct IncidenceSystem {
    DenseMatrix incidence;         ///< 2 N_V' x 2 N_E
    Vector length_diagonal;        ///< 2 N_E entries, l_j duplicated
    Vector shifts;                 ///< 2 N_E entries, eta(end) - eta(start) per edge

    std::size_t interior_count() const { return incidence.rows() / 2; }
    std::size_t edge_count() const { return incidence.cols() / 2; }
    DenseMatrix length_matrix() const;
};

IncidenceSystem build_incidence_system(const UnitCellPattern& pattern, const PeriodicStructure& periodic);

struct EffectiveTensor {
    Mat2 a_hom;
    std::vector<Vec2> slopes;     ///< b_j, derivative of q along edge j
    std::vector<Vec2> node_values;///< Q_i per interior vertex (one particular solution)
    double total_length = 0.0;

    std::array<double, 2> eigenvalues() const { return a_hom.symmetric_eigenvalues(); }
};

/// Solves the reduced system incidence L^-1 incidence^T Q = incidence L^-1 shifts with both
/// components of interior vertex `pinned_vertex` fixed to zero, then recovers
/// b = L^-1 (shifts - incidence^T Q) and A_hom = sum_j l_j b_j b_j^T / |cell|.
EffectiveTensor solve_tensor(const IncidenceSystem& system, double total_length, std::size_t pinned_vertex = 0);

/// Convenience: validation, incidence assembly and solve.
EffectiveTensor compute_tensor(const UnitCellPattern& pattern);

/// Kirchhoff residual ||incidence * b||_inf.
double kirchhoff_residual(const IncidenceSystem& system, const EffectiveTensor& tensor);

/// Corrector phi = q - id, affine along every edge.
struct CorrectorField {
    struct EdgeData {
        Vec2 start_value;  ///< phi at the start vertex
        Vec2 end_value;    ///< phi at the end vertex
        Vec2 slope;        ///< d phi / ds along the edge orientation
        double length = 0.0;
    };
    std::vector<EdgeData> edges;

    /// phi at arc length s from the start of edge j.
    Vec2 value(std::size_t edge, double s) const { return edges[edge].start_value + s * edges[edge].slope; }
};

struct CanonicalSolution {
    CorrectorField corrector;
    Mat2 a_hom;
    /// phi at the representative of every vertex (pinned vertex = 0).
    std::vector<Vec2> vertex_values;
};

/// Independent route: one P1 element per edge for the periodic cell problem
/// int phi' psi' = -int t psi'. Solutions are edge-wise affine, so the
/// discretisation is exact.
CanonicalSolution solve_canonical_fem(const UnitCellPattern& pattern, const PeriodicStructure& periodic,
                                      std::size_t pinned_vertex = 0);

/// Corrector built from the algebraic solution: slope_j = b_j - t_j, vertex
/// values phi(v) = q(v) - v with q = -Q on interior vertices (the system
/// above determines Q up to a constant and with opposite sign to q).
CorrectorField corrector_slopes(const EffectiveTensor& tensor, const UnitCellPattern& pattern,
                                const PeriodicStructure& periodic);

} // namespace ghom
