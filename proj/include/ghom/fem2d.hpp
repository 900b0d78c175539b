#pragma once

#include "ghom/cell_graph.hpp"
#include "ghom/geometry.hpp"
#include "ghom/graph_fem.hpp"
#include "ghom/lattice.hpp"
#include "ghom/linalg.hpp"
#include "ghom/quadrature.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ghom {

/// Uniform nx x ny rectangle mesh of (0,L1)x(0,L2) with tensor-product
/// Lagrange elements of degree q. Node (i, j) of the global (nx q + 1) x
/// (ny q + 1) grid has index j * (nx q + 1) + i.
class QuadFeSpace {
public:
    QuadFeSpace(double l1, double l2, std::size_t nx, std::size_t ny, std::size_t degree,
                const DirichletSpec& dirichlet = DirichletSpec::whole_boundary());

    double l1() const { return l1_; }
    double l2() const { return l2_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t degree() const { return basis_.degree(); }
    double cell_width() const { return hx_; }
    double cell_height() const { return hy_; }
    const LagrangeBasis1D& basis() const { return basis_; }

    std::size_t nodes_x() const { return nx_ * degree() + 1; }
    std::size_t nodes_y() const { return ny_ * degree() + 1; }
    std::size_t node_count() const { return nodes_x() * nodes_y(); }
    Vec2 node(std::size_t index) const;
    /// Global node of local node (a, b) in cell (cx, cy).
    std::size_t cell_node(std::size_t cx, std::size_t cy, std::size_t a, std::size_t b) const {
        return (cy * degree() + b) * nodes_x() + cx * degree() + a;
    }
    const std::vector<std::size_t>& dirichlet_nodes() const { return dirichlet_nodes_; }

    struct Location {
        std::size_t cx, cy;
        double xi, eta;
    };
    /// Cell and local coordinates of p; throws if p is outside the closed
    /// rectangle by more than 1e-12.
    Location locate(Vec2 p) const;

private:
    double l1_, l2_;
    std::size_t nx_, ny_;
    double hx_, hy_;
    LagrangeBasis1D basis_;
    std::vector<std::size_t> dirichlet_nodes_;
};

struct HomogenizedProblem {
    Mat2 a_hom = Mat2::identity();
    CoefficientField conductivity = CoefficientField::constant(1.0);
    double rho_cp = 1.0;
    SourceSpec source = SourceSpec::zero();
    /// Initial temperature; empty means zero.
    std::function<double(Vec2)> initial;
};

struct MatrixPair {
    SparseMatrix mass;
    SparseMatrix stiffness;
};

/// rho c_p int u v and int a (A_hom grad u) . grad v with (q+1)^2 Gauss points
/// per cell. Throws if A_hom is not SPD.
MatrixPair assemble_2d(const QuadFeSpace& space, const HomogenizedProblem& problem);

Vector assemble_load_2d(const QuadFeSpace& space, const SourceSpec& f, double t);

/// Cell average of a macroscopic source over the pattern; sources without
/// fast-variable dependence come back unchanged.
SourceSpec homogenize_source(const SourceSpec& f, const UnitCellPattern& pattern);

Vector evaluate_at_points(const QuadFeSpace& space, std::span<const double> coefficients, std::span<const Vec2> points);
std::vector<Vec2> evaluate_gradient_at_points(const QuadFeSpace& space, std::span<const double> coefficients,
                                              std::span<const Vec2> points);

Vector interpolate(const QuadFeSpace& space, const std::function<double(Vec2)>& g);

/// ||u_h - g||_{L2} with (q+3)^2 Gauss points per cell.
double l2_error(const QuadFeSpace& space, std::span<const double> coefficients, const std::function<double(Vec2)>& g);

/// x,y,value samples on a (resolution+1)^2 grid.
void write_grid_csv(const std::filesystem::path& path, const QuadFeSpace& space, std::span<const double> coefficients,
                    std::size_t resolution);

} // namespace ghom
