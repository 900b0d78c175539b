#pragma once

#include "ghom/cell_graph.hpp"
#include "ghom/geometry.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ghom {

enum class Side { left, right, bottom, top };

/// Part of the boundary of the rectangle (0,L1)x(0,L2). `from`/`to` are the
/// coordinate along the side (x for bottom/top, y for left/right).
struct BoundarySegment {
    Side side = Side::left;
    double from = 0.0;
    double to = 0.0;
    bool whole_side = true;
};

struct DirichletSpec {
    bool all = true;
    std::vector<BoundarySegment> segments;

    static DirichletSpec whole_boundary() { return {}; }
    /// "all" or a comma-separated list of `side` / `side:from:to`,
    /// side in {left, right, bottom, top}.
    static DirichletSpec parse(std::string_view text);
    std::string to_string() const;

    /// Whether `p` lies on the selected boundary part of (0,l1)x(0,l2).
    bool contains(Vec2 p, double l1, double l2, double tol) const;
};

struct LatticeEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    double length = 0.0;
    std::size_t cell_x = 0;
    std::size_t cell_y = 0;
    std::size_t pattern_edge = 0;
};

/// The delta-periodic lattice over (0,L1)x(0,L2).
struct LatticeMesh {
    double delta = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    std::size_t cells_x = 0;
    std::size_t cells_y = 0;
    std::vector<Vec2> vertices;
    std::vector<LatticeEdge> edges;
    std::vector<std::size_t> dirichlet_vertices;  ///< sorted

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    double total_length() const;
};

/// Throws if L1/delta or L2/delta is not an integer (to 1e-9) or the pattern
/// carries length overrides.
LatticeMesh build_lattice(const UnitCellPattern& pattern, double l1, double l2, double delta);

/// Marks the vertices on the requested boundary part; warns on std::clog if
/// the set comes out empty.
LatticeMesh mark_dirichlet(LatticeMesh mesh, const DirichletSpec& spec);

/// vertices.csv (id,x,y,dirichlet) and edges.csv (id,from,to,length).
void write_mesh_csv(const LatticeMesh& mesh, const std::filesystem::path& directory);

} // namespace ghom
