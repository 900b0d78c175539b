#pragma once

#include "ghom/cell_graph.hpp"
#include "ghom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

inline std::filesystem::path source_root() { return GHOM_SOURCE_ROOT; }
inline std::filesystem::path pattern_file(const std::string& name) { return source_root() / "patterns" / name; }

/// Periodic connected pattern: interior vertices on the 4x4 grid {0.2,..,0.8}^2,
/// one or two contact pairs per direction, a random spanning tree plus extras.
inline ghom::UnitCellPattern random_pattern(std::mt19937& rng, bool overrides = false) {
    std::vector<ghom::Vec2> grid;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) grid.push_back({i / 5.0, j / 5.0});
    std::shuffle(grid.begin(), grid.end(), rng);

    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const std::size_t m = pick(1, 6);
    std::vector<ghom::Vec2> v(grid.begin(), grid.begin() + m);

    std::vector<double> coords{0.2, 0.4, 0.6, 0.8};
    std::shuffle(coords.begin(), coords.end(), rng);
    const int lr = pick(1, 2);
    for (int k = 0; k < lr; ++k) {
        v.push_back({0.0, coords[k]});
        v.push_back({1.0, coords[k]});
    }
    std::shuffle(coords.begin(), coords.end(), rng);
    const int bt = pick(1, 2);
    for (int k = 0; k < bt; ++k) {
        v.push_back({coords[k], 0.0});
        v.push_back({coords[k], 1.0});
    }

    std::set<std::pair<std::size_t, std::size_t>> used;
    std::vector<ghom::PatternEdge> e;
    auto add = [&](std::size_t a, std::size_t b) {
        if (a == b || used.count({std::min(a, b), std::max(a, b)})) return;
        used.insert({std::min(a, b), std::max(a, b)});
        ghom::PatternEdge edge;
        edge.from = pick(0, 1) ? a : b;
        edge.to = edge.from == a ? b : a;
        if (overrides) edge.length_override = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
        e.push_back(edge);
    };
    for (std::size_t i = 1; i < m; ++i) add(i, pick(0, static_cast<int>(i) - 1));
    for (std::size_t i = m; i < v.size(); ++i) add(i, pick(0, static_cast<int>(m) - 1));
    const int extra = m > 1 ? pick(0, 3) : 0;
    for (int k = 0; k < extra; ++k) add(pick(0, static_cast<int>(m) - 1), pick(0, static_cast<int>(m) - 1));

    // scramble vertex labels so boundary vertices are not always last
    std::vector<std::size_t> perm(v.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<ghom::Vec2> pv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) pv[perm[i]] = v[i];
    for (auto& edge : e) {
        edge.from = perm[edge.from];
        edge.to = perm[edge.to];
    }
    return ghom::UnitCellPattern(pv, e);
}

inline ghom::UnitCellPattern flip_edge(const ghom::UnitCellPattern& p, std::size_t j) {
    auto edges = p.edges();
    std::swap(edges[j].from, edges[j].to);
    return ghom::UnitCellPattern(p.vertices(), edges);
}

/// Relabels vertices by `vperm` (old -> new) and reorders edges by `eperm` (new position -> old edge).
inline ghom::UnitCellPattern relabel(const ghom::UnitCellPattern& p, const std::vector<std::size_t>& vperm,
                                     const std::vector<std::size_t>& eperm) {
    std::vector<ghom::Vec2> v(p.vertex_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[vperm[i]] = p.vertex(i);
    std::vector<ghom::PatternEdge> e;
    for (std::size_t k : eperm) {
        ghom::PatternEdge edge = p.edge(k);
        edge.from = vperm[edge.from];
        edge.to = vperm[edge.to];
        e.push_back(edge);
    }
    return ghom::UnitCellPattern(v, e);
}

/// Copies every edge length into an explicit override.
inline ghom::UnitCellPattern freeze_lengths(const ghom::UnitCellPattern& p) {
    auto edges = p.edges();
    for (std::size_t j = 0; j < edges.size(); ++j) edges[j].length_override = p.length(j);
    return ghom::UnitCellPattern(p.vertices(), edges);
}

inline bool on_cell_boundary(ghom::Vec2 x) {
    const double t = 1e-12;
    return x.x < t || x.y < t || x.x > 1 - t || x.y > 1 - t;
}

/// Moves every interior vertex to a random point strictly inside the cell.
inline ghom::UnitCellPattern relocate_interior(const ghom::UnitCellPattern& p, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    auto v = p.vertices();
    for (auto& x : v)
        if (!on_cell_boundary(x)) x = {u(rng), u(rng)};
    return ghom::UnitCellPattern(v, p.edges());
}

struct MergedGraph {
    std::vector<ghom::Vec2> vertices;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Quadratic-time tiling: every copy of every vertex is compared against all kept ones.
inline MergedGraph brute_force_tiling(const ghom::UnitCellPattern& p, double l1, double l2, double delta) {
    MergedGraph g;
    const auto nx = static_cast<std::size_t>(std::lround(l1 / delta));
    const auto ny = static_cast<std::size_t>(std::lround(l2 / delta));
    auto find_or_add = [&](ghom::Vec2 x) {
        for (std::size_t i = 0; i < g.vertices.size(); ++i)
            if (ghom::distance(g.vertices[i], x) <= delta * 1e-9) return i;
        g.vertices.push_back(x);
        return g.vertices.size() - 1;
    };
    for (std::size_t cy = 0; cy < ny; ++cy)
        for (std::size_t cx = 0; cx < nx; ++cx) {
            std::vector<std::size_t> ids;
            for (const auto& y : p.vertices()) ids.push_back(find_or_add(delta * (y + ghom::Vec2{double(cx), double(cy)})));
            for (const auto& e : p.edges()) g.edges.emplace_back(ids[e.from], ids[e.to]);
        }
    return g;
}

}  // namespace fixtures
