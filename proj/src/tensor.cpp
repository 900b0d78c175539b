#include "ghom/tensor.hpp"

#include "ghom/error.hpp"

namespace ghom {

DenseMatrix IncidenceSystem::length_matrix() const {
    DenseMatrix l(length_diagonal.size(), length_diagonal.size());
    for (std::size_t k = 0; k < length_diagonal.size(); ++k) l(k, k) = length_diagonal[k];
    return l;
}

IncidenceSystem build_incidence_system(const UnitCellPattern& pattern, const PeriodicStructure& periodic) {
    const std::size_t nv = periodic.interior_count();
    const std::size_t ne = pattern.edge_count();
    IncidenceSystem sys;
    sys.incidence = DenseMatrix(2 * nv, 2 * ne);
    sys.length_diagonal.resize(2 * ne);
    sys.shifts.resize(2 * ne);

    for (std::size_t j = 0; j < ne; ++j) {
        const auto& e = pattern.edge(j);
        const std::size_t enters = periodic.slot(e.to);
        const std::size_t leaves = periodic.slot(e.from);
        for (std::size_t c = 0; c < 2; ++c) {
            sys.incidence(2 * enters + c, 2 * j + c) += 1.0;
            sys.incidence(2 * leaves + c, 2 * j + c) -= 1.0;
        }
        sys.length_diagonal[2 * j] = sys.length_diagonal[2 * j + 1] = pattern.length(j);
        const Vec2 jump = periodic.shift[e.to] - periodic.shift[e.from];
        sys.shifts[2 * j] = jump.x;
        sys.shifts[2 * j + 1] = jump.y;
    }
    return sys;
}

EffectiveTensor solve_tensor(const IncidenceSystem& system, double total_length, std::size_t pinned_vertex) {
    const std::size_t nv = system.interior_count();
    const std::size_t ne = system.edge_count();
    if (pinned_vertex >= nv) throw Error("solve_tensor: pinned vertex out of range");
    const auto& a = system.incidence;

    // reduced operator A L^-1 A^T and right-hand side A L^-1 f
    DenseMatrix reduced(2 * nv, 2 * nv);
    Vector rhs(2 * nv, 0.0);
    for (std::size_t r = 0; r < 2 * nv; ++r) {
        for (std::size_t k = 0; k < 2 * ne; ++k) {
            const double ark = a(r, k);
            if (ark == 0.0) continue;
            const double scaled = ark / system.length_diagonal[k];
            rhs[r] += scaled * system.shifts[k];
            for (std::size_t c = 0; c < 2 * nv; ++c) reduced(r, c) += scaled * a(c, k);
        }
    }

    // drop the two rows/columns of the pinned vertex
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < 2 * nv; ++r)
        if (r / 2 != pinned_vertex) keep.push_back(r);
    DenseMatrix pinned(keep.size(), keep.size());
    Vector pinned_rhs(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        pinned_rhs[i] = rhs[keep[i]];
        for (std::size_t j = 0; j < keep.size(); ++j) pinned(i, j) = reduced(keep[i], keep[j]);
    }

    Vector q_reduced;
    try {
        q_reduced = dense_solve_spd(pinned, pinned_rhs);
    } catch (const SolverError&) {
        throw Error("pattern violates connectivity assumptions");
    }
    Vector q(2 * nv, 0.0);
    for (std::size_t i = 0; i < keep.size(); ++i) q[keep[i]] = q_reduced[i];

    EffectiveTensor t;
    t.total_length = total_length;
    t.node_values.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) t.node_values[i] = {q[2 * i], q[2 * i + 1]};

    const DenseMatrix at = a.transpose();
    const Vector atq = at.multiply(q);
    t.slopes.resize(ne);
    for (std::size_t j = 0; j < ne; ++j) {
        const Vec2 b{(system.shifts[2 * j] - atq[2 * j]) / system.length_diagonal[2 * j],
                     (system.shifts[2 * j + 1] - atq[2 * j + 1]) / system.length_diagonal[2 * j + 1]};
        t.slopes[j] = b;
        t.a_hom += system.length_diagonal[2 * j] * Mat2::outer(b, b);
    }
    t.a_hom = (1.0 / total_length) * t.a_hom;
    return t;
}

EffectiveTensor compute_tensor(const UnitCellPattern& pattern) {
    const PeriodicStructure periodic = require_valid(pattern);
    return solve_tensor(build_incidence_system(pattern, periodic), pattern.total_length());
}

double kirchhoff_residual(const IncidenceSystem& system, const EffectiveTensor& tensor) {
    Vector b;
    b.reserve(2 * tensor.slopes.size());
    for (const Vec2& s : tensor.slopes) {
        b.push_back(s.x);
        b.push_back(s.y);
    }
    return norm_inf(system.incidence.multiply(b));
}

CanonicalSolution solve_canonical_fem(const UnitCellPattern& pattern, const PeriodicStructure& periodic,
                                      std::size_t pinned_vertex) {
    const std::size_t nv = periodic.interior_count();
    if (pinned_vertex >= nv) throw Error("solve_canonical_fem: pinned vertex out of range");

    DenseMatrix stiffness(nv, nv);
    std::vector<Vec2> load(nv);
    for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
        const auto& e = pattern.edge(j);
        const std::size_t s = periodic.slot(e.from);
        const std::size_t t = periodic.slot(e.to);
        const double inv_l = 1.0 / pattern.length(j);
        // P1 element on [0, l]: psi' = +-1/l; load -int t psi' ds = -+ chord / l
        stiffness(s, s) += inv_l;
        stiffness(t, t) += inv_l;
        stiffness(s, t) -= inv_l;
        stiffness(t, s) -= inv_l;
        const Vec2 c = inv_l * pattern.chord(j);
        load[s] += c;
        load[t] -= c;
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < nv; ++i)
        if (i != pinned_vertex) keep.push_back(i);
    DenseMatrix reduced(keep.size(), keep.size());
    Vector rhs_x(keep.size()), rhs_y(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        rhs_x[i] = load[keep[i]].x;
        rhs_y[i] = load[keep[i]].y;
        for (std::size_t k = 0; k < keep.size(); ++k) reduced(i, k) = stiffness(keep[i], keep[k]);
    }

    std::vector<Vec2> phi(nv);
    if (!keep.empty()) {
        Vector px, py;
        try {
            px = dense_solve_spd(reduced, rhs_x);
            py = dense_solve_spd(reduced, rhs_y);
        } catch (const SolverError&) {
            throw Error("canonical problem singular beyond the constant gauge");
        }
        for (std::size_t i = 0; i < keep.size(); ++i) phi[keep[i]] = {px[i], py[i]};
    }

    CanonicalSolution sol;
    sol.vertex_values.resize(pattern.vertex_count());
    for (std::size_t v = 0; v < pattern.vertex_count(); ++v) sol.vertex_values[v] = phi[periodic.slot(v)];
    sol.corrector.edges.resize(pattern.edge_count());
    for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
        const auto& e = pattern.edge(j);
        auto& d = sol.corrector.edges[j];
        d.length = pattern.length(j);
        d.start_value = phi[periodic.slot(e.from)];
        d.end_value = phi[periodic.slot(e.to)];
        d.slope = (d.end_value - d.start_value) / d.length;
        const Vec2 b = pattern.chord(j) / d.length + d.slope;
        sol.a_hom += d.length * Mat2::outer(b, b);
    }
    sol.a_hom = (1.0 / pattern.total_length()) * sol.a_hom;
    return sol;
}

CorrectorField corrector_slopes(const EffectiveTensor& tensor, const UnitCellPattern& pattern,
                                const PeriodicStructure& periodic) {
    // phi at an interior vertex i is q(v_i) - v_i = -Q_i - v_i
    const auto phi_at = [&](std::size_t vertex) {
        const std::size_t slot = periodic.slot(vertex);
        const Vec2 rep = pattern.vertex(periodic.interior_vertices[slot]);
        return -tensor.node_values[slot] - rep;
    };
    CorrectorField field;
    field.edges.resize(pattern.edge_count());
    for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
        const auto& e = pattern.edge(j);
        auto& d = field.edges[j];
        d.length = pattern.length(j);
        d.start_value = phi_at(e.from);
        d.end_value = phi_at(e.to);
        d.slope = tensor.slopes[j] - pattern.chord(j) / d.length;
    }
    return field;
}

} // namespace ghom
