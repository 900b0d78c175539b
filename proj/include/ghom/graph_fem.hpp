#pragma once

#include "ghom/geometry.hpp"
#include "ghom/lattice.hpp"
#include "ghom/linalg.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ghom {

/// Scalar conductivity a(x) over the macroscopic domain.
class CoefficientField {
public:
    using Function = std::function<double(Vec2)>;

    static CoefficientField constant(double value);
    static CoefficientField custom(Function fn);

    double operator()(Vec2 x) const { return fn_(x); }

private:
    explicit CoefficientField(Function fn) : fn_(std::move(fn)) {}
    Function fn_;
};

/// Heat source f(t, x). The Gaussian form is A exp(-k |x - c|^2) exp(-lambda t).
class SourceSpec {
public:
    using Function = std::function<double(double, Vec2)>;

    struct Gaussian {
        double amplitude = 0.0;
        double decay = 0.0;
        Vec2 center;
        double time_rate = 0.0;
    };

    static SourceSpec zero();
    static SourceSpec constant(double value);
    static SourceSpec gaussian(double amplitude, double decay, Vec2 center, double time_rate);
    static SourceSpec custom(Function fn);

    double operator()(double t, Vec2 x) const;
    bool is_zero() const { return kind_ == Kind::zero; }
    const Gaussian& gaussian_parameters() const { return gaussian_; }

private:
    enum class Kind { zero, constant, gaussian, custom };
    Kind kind_ = Kind::zero;
    double constant_ = 0.0;
    Gaussian gaussian_;
    Function fn_;
};

struct GraphElement {
    std::vector<std::size_t> nodes;  ///< p+1 global nodes ordered from start to end
    Vec2 start;
    Vec2 end;
    double length = 0.0;
    std::size_t lattice_edge = 0;

    Vec2 tangent() const { return (end - start) / length; }
};

/// Continuous degree-p Lagrange space on the lattice. Each lattice edge is
/// split into `splits` sub-edges; nodes at lattice vertices are shared, the
/// first vertex_count nodes are the lattice vertices themselves.
struct GraphFeSpace {
    std::size_t degree = 0;
    std::size_t splits = 0;
    std::size_t vertex_count = 0;
    std::vector<Vec2> nodes;
    std::vector<GraphElement> elements;
    std::vector<std::size_t> dirichlet_nodes;

    std::size_t node_count() const { return nodes.size(); }
};

GraphFeSpace build_space(const LatticeMesh& mesh, std::size_t degree, std::size_t splits);

/// rho c_p int phi_i phi_j ds, Gauss-Legendre with p+1 points per sub-edge.
SparseMatrix assemble_mass(const GraphFeSpace& space, double rho_cp);
/// int a phi_i' phi_j' ds. Throws if a <= 0 at a quadrature point.
SparseMatrix assemble_stiffness(const GraphFeSpace& space, const CoefficientField& a);
/// int f(t, .) phi_i ds.
Vector assemble_load(const GraphFeSpace& space, const SourceSpec& f, double t);

/// Nodal interpolant of g.
Vector interpolate(const GraphFeSpace& space, const std::function<double(Vec2)>& g);

enum class DirichletMode { eliminate, penalty };
DirichletMode parse_dirichlet_mode(std::string_view name);

/// Homogeneous Dirichlet treatment. With `eliminate` the matrices and load
/// are restricted to the free nodes; with `penalty` K_ii += 1e10 max|K_ii|
/// on constrained rows and all nodes stay.
struct ConstrainedSystem {
    SparseMatrix mass;
    SparseMatrix stiffness;
    Vector load;
    std::vector<std::size_t> free_dofs;
    std::size_t full_size = 0;
    DirichletMode mode = DirichletMode::eliminate;
    double penalty = 0.0;

    Vector restrict_vector(std::span<const double> full) const;
    Vector expand(std::span<const double> reduced) const;
};

ConstrainedSystem apply_dirichlet(const SparseMatrix& mass, const SparseMatrix& stiffness, std::span<const double> load,
                                  std::span<const std::size_t> dirichlet_nodes,
                                  DirichletMode mode = DirichletMode::eliminate);

/// node,x,y,value rows with a header.
void write_nodal_csv(const std::filesystem::path& path, std::span<const Vec2> positions, std::span<const double> values);

} // namespace ghom
