#include "ghom/graph_fem.hpp"

#include "ghom/error.hpp"
#include "ghom/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace ghom {

CoefficientField CoefficientField::constant(double value) {
    return CoefficientField([value](Vec2) { return value; });
}

CoefficientField CoefficientField::custom(Function fn) { return CoefficientField(std::move(fn)); }

SourceSpec SourceSpec::zero() { return {}; }

SourceSpec SourceSpec::constant(double value) {
    SourceSpec s;
    s.kind_ = Kind::constant;
    s.constant_ = value;
    return s;
}

SourceSpec SourceSpec::gaussian(double amplitude, double decay, Vec2 center, double time_rate) {
    SourceSpec s;
    s.kind_ = Kind::gaussian;
    s.gaussian_ = {amplitude, decay, center, time_rate};
    return s;
}

SourceSpec SourceSpec::custom(Function fn) {
    SourceSpec s;
    s.kind_ = Kind::custom;
    s.fn_ = std::move(fn);
    return s;
}

double SourceSpec::operator()(double t, Vec2 x) const {
    switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::constant: return constant_;
    case Kind::gaussian: {
        const Vec2 d = x - gaussian_.center;
        return gaussian_.amplitude * std::exp(-gaussian_.decay * dot(d, d)) * std::exp(-gaussian_.time_rate * t);
    }
    case Kind::custom: return fn_(t, x);
    }
    return 0.0;
}

GraphFeSpace build_space(const LatticeMesh& mesh, std::size_t degree, std::size_t splits) {
    if (degree < 1 || degree > 3) throw Error("unsupported degree " + std::to_string(degree) + " (expected 1, 2 or 3)");
    if (splits < 1) throw Error("splits must be at least 1");

    GraphFeSpace space;
    space.degree = degree;
    space.splits = splits;
    space.vertex_count = mesh.vertex_count();
    space.nodes = mesh.vertices;
    space.nodes.reserve(mesh.vertex_count() + mesh.edge_count() * (splits * degree - 1));
    space.elements.reserve(mesh.edge_count() * splits);
    space.dirichlet_nodes = mesh.dirichlet_vertices;

    const std::size_t per_edge = splits * degree;
    std::vector<std::size_t> chain(per_edge + 1);
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const auto& edge = mesh.edges[e];
        const Vec2 a = mesh.vertices[edge.from];
        const Vec2 b = mesh.vertices[edge.to];
        chain.front() = edge.from;
        chain.back() = edge.to;
        for (std::size_t k = 1; k < per_edge; ++k) {
            const double s = static_cast<double>(k) / static_cast<double>(per_edge);
            space.nodes.push_back(a + s * (b - a));
            chain[k] = space.nodes.size() - 1;
        }
        const double h = edge.length / static_cast<double>(splits);
        for (std::size_t k = 0; k < splits; ++k) {
            GraphElement el;
            el.nodes.assign(chain.begin() + static_cast<std::ptrdiff_t>(k * degree),
                            chain.begin() + static_cast<std::ptrdiff_t>(k * degree + degree + 1));
            el.start = a + (static_cast<double>(k) / static_cast<double>(splits)) * (b - a);
            el.end = a + (static_cast<double>(k + 1) / static_cast<double>(splits)) * (b - a);
            el.length = h;
            el.lattice_edge = e;
            space.elements.push_back(std::move(el));
        }
    }
    return space;
}

namespace {

struct ReferenceTables {
    QuadratureRule rule;
    std::vector<std::vector<double>> value;  // [q][k]
    std::vector<std::vector<double>> slope;  // [q][k], derivative on [0,1]

    ReferenceTables(std::size_t degree, std::size_t points) : rule(gauss_legendre(points)) {
        const LagrangeBasis1D basis(degree);
        value.assign(rule.size(), std::vector<double>(degree + 1));
        slope.assign(rule.size(), std::vector<double>(degree + 1));
        for (std::size_t q = 0; q < rule.size(); ++q)
            for (std::size_t k = 0; k <= degree; ++k) {
                value[q][k] = basis.value(k, rule.points[q]);
                slope[q][k] = basis.derivative(k, rule.points[q]);
            }
    }
};

template <typename LocalKernel>
SparseMatrix assemble_matrix(const GraphFeSpace& space, LocalKernel&& kernel) {
    const std::size_t nloc = space.degree + 1;
    std::vector<Triplet> triplets;
    triplets.reserve(space.elements.size() * nloc * nloc);
    std::vector<double> local(nloc * nloc);
    for (const auto& el : space.elements) {
        std::fill(local.begin(), local.end(), 0.0);
        kernel(el, local);
        for (std::size_t i = 0; i < nloc; ++i)
            for (std::size_t j = 0; j < nloc; ++j) triplets.push_back({el.nodes[i], el.nodes[j], local[i * nloc + j]});
    }
    return SparseMatrix::from_triplets(space.node_count(), triplets);
}

} // namespace

SparseMatrix assemble_mass(const GraphFeSpace& space, double rho_cp) {
    const ReferenceTables ref(space.degree, space.degree + 1);
    const std::size_t nloc = space.degree + 1;
    return assemble_matrix(space, [&](const GraphElement& el, std::vector<double>& local) {
        for (std::size_t q = 0; q < ref.rule.size(); ++q) {
            const double w = rho_cp * ref.rule.weights[q] * el.length;
            for (std::size_t i = 0; i < nloc; ++i)
                for (std::size_t j = 0; j < nloc; ++j) local[i * nloc + j] += w * ref.value[q][i] * ref.value[q][j];
        }
    });
}

SparseMatrix assemble_stiffness(const GraphFeSpace& space, const CoefficientField& a) {
    const ReferenceTables ref(space.degree, space.degree + 1);
    const std::size_t nloc = space.degree + 1;
    return assemble_matrix(space, [&](const GraphElement& el, std::vector<double>& local) {
        for (std::size_t q = 0; q < ref.rule.size(); ++q) {
            const Vec2 x = el.start + ref.rule.points[q] * (el.end - el.start);
            const double ax = a(x);
            if (!(ax > 0.0)) throw Error("conductivity must be positive, got " + std::to_string(ax));
            // d/ds = (1/h) d/dxi
            const double w = ax * ref.rule.weights[q] / el.length;
            for (std::size_t i = 0; i < nloc; ++i)
                for (std::size_t j = 0; j < nloc; ++j) local[i * nloc + j] += w * ref.slope[q][i] * ref.slope[q][j];
        }
    });
}

Vector assemble_load(const GraphFeSpace& space, const SourceSpec& f, double t) {
    Vector load(space.node_count(), 0.0);
    if (f.is_zero()) return load;
    // sharp sources need more than p+1 points
    const ReferenceTables ref(space.degree, 2 * space.degree + 2);
    for (const auto& el : space.elements) {
        for (std::size_t q = 0; q < ref.rule.size(); ++q) {
            const Vec2 x = el.start + ref.rule.points[q] * (el.end - el.start);
            const double w = f(t, x) * ref.rule.weights[q] * el.length;
            for (std::size_t i = 0; i <= space.degree; ++i) load[el.nodes[i]] += w * ref.value[q][i];
        }
    }
    return load;
}

Vector interpolate(const GraphFeSpace& space, const std::function<double(Vec2)>& g) {
    Vector u(space.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = g(space.nodes[i]);
    return u;
}

DirichletMode parse_dirichlet_mode(std::string_view name) {
    if (name == "eliminate") return DirichletMode::eliminate;
    if (name == "penalty") return DirichletMode::penalty;
    throw Error("unknown Dirichlet mode '" + std::string(name) + "' (expected eliminate or penalty)");
}

Vector ConstrainedSystem::restrict_vector(std::span<const double> full) const {
    if (mode == DirichletMode::penalty) return Vector(full.begin(), full.end());
    Vector r(free_dofs.size());
    for (std::size_t k = 0; k < free_dofs.size(); ++k) r[k] = full[free_dofs[k]];
    return r;
}

Vector ConstrainedSystem::expand(std::span<const double> reduced) const {
    if (mode == DirichletMode::penalty) return Vector(reduced.begin(), reduced.end());
    Vector full(full_size, 0.0);
    for (std::size_t k = 0; k < free_dofs.size(); ++k) full[free_dofs[k]] = reduced[k];
    return full;
}

ConstrainedSystem apply_dirichlet(const SparseMatrix& mass, const SparseMatrix& stiffness, std::span<const double> load,
                                  std::span<const std::size_t> dirichlet_nodes, DirichletMode mode) {
    const std::size_t n = mass.dimension();
    if (stiffness.dimension() != n || load.size() != n) throw Error("apply_dirichlet: dimension mismatch");
    ConstrainedSystem sys;
    sys.full_size = n;
    sys.mode = mode;

    std::vector<bool> fixed(n, false);
    for (std::size_t i : dirichlet_nodes) {
        if (i >= n) throw Error("apply_dirichlet: Dirichlet node out of range");
        fixed[i] = true;
    }

    if (mode == DirichletMode::eliminate) {
        for (std::size_t i = 0; i < n; ++i)
            if (!fixed[i]) sys.free_dofs.push_back(i);
        sys.mass = mass.submatrix(sys.free_dofs);
        sys.stiffness = stiffness.submatrix(sys.free_dofs);
        sys.load = sys.restrict_vector(load);
        return sys;
    }

    sys.free_dofs.resize(n);
    for (std::size_t i = 0; i < n; ++i) sys.free_dofs[i] = i;
    sys.mass = mass;
    sys.stiffness = stiffness;
    sys.load.assign(load.begin(), load.end());
    if (dirichlet_nodes.empty()) return sys;
    sys.penalty = 1e10 * norm_inf(stiffness.diagonal());
    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i]) {
            sys.stiffness.add_to_diagonal(i, sys.penalty);
            sys.load[i] = 0.0;
        }
    return sys;
}

void write_nodal_csv(const std::filesystem::path& path, std::span<const Vec2> positions, std::span<const double> values) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << std::setprecision(17) << "node,x,y,value\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out << i << ',' << positions[i].x << ',' << positions[i].y << ',' << values[i] << '\n';
    if (!out) throw Error("failed to write " + path.string());
}

} // namespace ghom
