#include "ghom/lattice.hpp"

#include "ghom/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace ghom {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

Side parse_side(const std::string& word) {
    if (word == "left") return Side::left;
    if (word == "right") return Side::right;
    if (word == "bottom") return Side::bottom;
    if (word == "top") return Side::top;
    throw Error("unknown boundary side '" + word + "'");
}

const char* side_name(Side s) {
    switch (s) {
    case Side::left: return "left";
    case Side::right: return "right";
    case Side::bottom: return "bottom";
    case Side::top: return "top";
    }
    return "?";
}

double parse_number(const std::string& word) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
    if (ec != std::errc() || ptr != word.data() + word.size()) throw Error("bad number '" + word + "' in boundary spec");
    return v;
}

/// Position hashing on a grid of size `quantum`, with an exact tolerance
/// check against the 3x3 neighbouring bins.
class VertexMerger {
public:
    VertexMerger(double quantum, double tol) : quantum_(quantum), tol_(tol) {}

    std::size_t insert(Vec2 p, std::vector<Vec2>& vertices) {
        const std::int64_t qx = std::llround(p.x / quantum_);
        const std::int64_t qy = std::llround(p.y / quantum_);
        for (std::int64_t dx = -1; dx <= 1; ++dx)
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = bins_.find(key(qx + dx, qy + dy));
                if (it == bins_.end()) continue;
                for (std::size_t idx : it->second)
                    if (distance(vertices[idx], p) <= tol_) return idx;
            }
        vertices.push_back(p);
        bins_[key(qx, qy)].push_back(vertices.size() - 1);
        return vertices.size() - 1;
    }

private:
    static std::uint64_t key(std::int64_t x, std::int64_t y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffULL);
    }

    double quantum_;
    double tol_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> bins_;
};

std::size_t checked_cell_count(double length, double delta, const char* name) {
    const double ratio = length / delta;
    const double rounded = std::round(ratio);
    if (!(delta > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9)
        throw Error(std::string(name) + "/delta must be a positive integer (got " + std::to_string(ratio) + ")");
    return static_cast<std::size_t>(rounded);
}

} // namespace

DirichletSpec DirichletSpec::parse(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty() || t == "all") return whole_boundary();
    DirichletSpec spec;
    spec.all = false;
    std::stringstream items(t);
    std::string item;
    while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream fields(item);
        std::string f;
        while (std::getline(fields, f, ':')) parts.push_back(trim(f));
        BoundarySegment seg;
        seg.side = parse_side(parts[0]);
        if (parts.size() == 3) {
            seg.whole_side = false;
            seg.from = parse_number(parts[1]);
            seg.to = parse_number(parts[2]);
            if (!(seg.to > seg.from)) throw Error("boundary segment '" + item + "' must have positive length");
        } else if (parts.size() != 1) {
            throw Error("boundary segment '" + item + "' must be 'side' or 'side:from:to'");
        }
        spec.segments.push_back(seg);
    }
    if (spec.segments.empty()) throw Error("empty boundary specification");
    return spec;
}

std::string DirichletSpec::to_string() const {
    if (all) return "all";
    std::ostringstream out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (i) out << ',';
        out << side_name(segments[i].side);
        if (!segments[i].whole_side) out << ':' << segments[i].from << ':' << segments[i].to;
    }
    return out.str();
}

bool DirichletSpec::contains(Vec2 p, double l1, double l2, double tol) const {
    const bool on_left = std::abs(p.x) <= tol;
    const bool on_right = std::abs(p.x - l1) <= tol;
    const bool on_bottom = std::abs(p.y) <= tol;
    const bool on_top = std::abs(p.y - l2) <= tol;
    if (all) return on_left || on_right || on_bottom || on_top;
    for (const auto& seg : segments) {
        bool on = false;
        double along = 0.0;
        switch (seg.side) {
        case Side::left: on = on_left; along = p.y; break;
        case Side::right: on = on_right; along = p.y; break;
        case Side::bottom: on = on_bottom; along = p.x; break;
        case Side::top: on = on_top; along = p.x; break;
        }
        if (on && (seg.whole_side || (along >= seg.from - tol && along <= seg.to + tol))) return true;
    }
    return false;
}

double LatticeMesh::total_length() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.length;
    return s;
}

LatticeMesh build_lattice(const UnitCellPattern& pattern, double l1, double l2, double delta) {
    if (pattern.has_length_overrides()) throw Error("simulation requires straight edges");
    LatticeMesh mesh;
    mesh.delta = delta;
    mesh.l1 = l1;
    mesh.l2 = l2;
    mesh.cells_x = checked_cell_count(l1, delta, "L1");
    mesh.cells_y = checked_cell_count(l2, delta, "L2");

    VertexMerger merger(delta * 1e-6, delta * 1e-9);
    const std::size_t nv = pattern.vertex_count();
    mesh.vertices.reserve(mesh.cells_x * mesh.cells_y * nv);
    mesh.edges.reserve(mesh.cells_x * mesh.cells_y * pattern.edge_count());
    std::vector<std::size_t> local(nv);
    for (std::size_t cy = 0; cy < mesh.cells_y; ++cy) {
        for (std::size_t cx = 0; cx < mesh.cells_x; ++cx) {
            const Vec2 origin{static_cast<double>(cx), static_cast<double>(cy)};
            for (std::size_t i = 0; i < nv; ++i)
                local[i] = merger.insert(delta * (pattern.vertex(i) + origin), mesh.vertices);
            for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
                const auto& e = pattern.edge(j);
                mesh.edges.push_back({local[e.from], local[e.to], delta * pattern.length(j), cx, cy, j});
            }
        }
    }
    return mesh;
}

LatticeMesh mark_dirichlet(LatticeMesh mesh, const DirichletSpec& spec) {
    mesh.dirichlet_vertices.clear();
    const double tol = mesh.delta * 1e-9;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        if (spec.contains(mesh.vertices[i], mesh.l1, mesh.l2, tol)) mesh.dirichlet_vertices.push_back(i);
    if (mesh.dirichlet_vertices.empty())
        std::clog << "warning: no lattice vertex lies on the Dirichlet boundary '" << spec.to_string() << "'\n";
    return mesh;
}

void write_mesh_csv(const LatticeMesh& mesh, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    std::vector<bool> fixed(mesh.vertices.size(), false);
    for (std::size_t i : mesh.dirichlet_vertices) fixed[i] = true;

    std::ofstream v(directory / "vertices.csv");
    v << std::setprecision(17) << "id,x,y,dirichlet\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        v << i << ',' << mesh.vertices[i].x << ',' << mesh.vertices[i].y << ',' << (fixed[i] ? 1 : 0) << '\n';

    std::ofstream e(directory / "edges.csv");
    e << std::setprecision(17) << "id,from,to,length\n";
    for (std::size_t j = 0; j < mesh.edges.size(); ++j)
        e << j << ',' << mesh.edges[j].from << ',' << mesh.edges[j].to << ',' << mesh.edges[j].length << '\n';
    if (!v || !e) throw Error("failed to write mesh CSV files to " + directory.string());
}

} // namespace ghom
