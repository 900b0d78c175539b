#include "ghom/cell_graph.hpp"
#include "ghom/error.hpp"
#include "ghom/lattice.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <queue>

using namespace ghom;

namespace {

std::vector<std::size_t> degrees(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> d(n, 0);
    for (auto [a, b] : edges) ++d[a], ++d[b];
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_pairs(const LatticeMesh& m) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (const auto& edge : m.edges) e.emplace_back(edge.from, edge.to);
    return e;
}

bool connected(const LatticeMesh& m) {
    std::vector<std::vector<std::size_t>> adj(m.vertex_count());
    for (const auto& e : m.edges) {
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    std::vector<bool> seen(m.vertex_count(), false);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        const auto v = q.front();
        q.pop();
        for (auto w : adj[v])
            if (!seen[w]) seen[w] = true, ++count, q.push(w);
    }
    return count == m.vertex_count();
}

}  // namespace

TEST_CASE("plus lattice at delta 1/4") {
    const auto m = build_lattice(patterns::plus(), 1, 1, 0.25);
    CHECK(m.cells_x == 4);
    CHECK(m.cells_y == 4);
    CHECK(m.vertex_count() == 56);
    CHECK(m.edge_count() == 64);
    CHECK(m.total_length() == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(connected(m));

    CHECK(mark_dirichlet(m, DirichletSpec::whole_boundary()).dirichlet_vertices.size() == 16);
    CHECK(mark_dirichlet(m, DirichletSpec::parse("left")).dirichlet_vertices.size() == 4);
    CHECK(mark_dirichlet(m, DirichletSpec::parse("left,bottom")).dirichlet_vertices.size() == 8);
    CHECK(mark_dirichlet(m, DirichletSpec::parse("top:0:0.5")).dirichlet_vertices.size() == 2);
}

TEST_CASE("empty Dirichlet set warns") {
    const auto m = build_lattice(patterns::plus(), 1, 1, 0.25);
    std::ostringstream captured;
    auto* old = std::clog.rdbuf(captured.rdbuf());
    const auto marked = mark_dirichlet(m, DirichletSpec::parse("left:0:0.1"));
    std::clog.rdbuf(old);
    CHECK(marked.dirichlet_vertices.empty());
    CHECK_FALSE(captured.str().empty());
}

TEST_CASE("Dirichlet spec parsing") {
    CHECK(DirichletSpec::parse("all").all);
    const auto d = DirichletSpec::parse("left, bottom:0.2:0.8");
    CHECK_FALSE(d.all);
    REQUIRE(d.segments.size() == 2);
    CHECK(d.segments[1].side == Side::bottom);
    CHECK(d.segments[1].from == 0.2);
    CHECK(DirichletSpec::parse(d.to_string()).to_string() == d.to_string());
    CHECK(d.contains({0.0, 0.7}, 1, 1, 1e-12));
    CHECK(d.contains({0.5, 0.0}, 1, 1, 1e-12));
    CHECK_FALSE(d.contains({0.9, 0.0}, 1, 1, 1e-12));
    CHECK_FALSE(d.contains({1.0, 0.5}, 1, 1, 1e-12));
    CHECK_THROWS_AS(DirichletSpec::parse("middle"), Error);
    CHECK_THROWS_AS(DirichletSpec::parse("left:0.5"), Error);
}

TEST_CASE("length identity for all fixtures") {
    std::vector<UnitCellPattern> all{patterns::plus(), patterns::rhomb(std::atan(0.5)), patterns::blitz(),
                                     patterns::x_cross(), patterns::diamond()};
    for (const auto& p : all)
        for (double delta : {0.5, 0.25, 0.125, 0.0625}) {
            const auto m = build_lattice(p, 1, 1, delta);
            CHECK(std::abs(m.total_length() - p.total_length() / delta) <= 1e-10 * p.total_length() / delta);
            for (const auto& e : m.edges)
                CHECK(std::abs(e.length - delta * p.length(e.pattern_edge)) <= 1e-12 * e.length);
        }
    const auto m = build_lattice(patterns::blitz(), 1, 1, 0.125);
    CHECK(m.total_length() == doctest::Approx(8 * (1 + std::sqrt(2.0))).epsilon(1e-13));
}

TEST_CASE("rectangular domain") {
    const auto m = build_lattice(patterns::plus(), 2, 1, 0.25);
    CHECK(m.cells_x == 8);
    CHECK(m.cells_y == 4);
    CHECK(m.total_length() == doctest::Approx(2 * 2 / 0.25));
    CHECK(mark_dirichlet(m, DirichletSpec::parse("right")).dirichlet_vertices.size() == 4);
}

TEST_CASE("counts match a brute-force merge") {
    std::mt19937 rng(8);
    std::vector<UnitCellPattern> all{patterns::plus(), patterns::rhomb(0.3), patterns::blitz(), patterns::x_cross(),
                                     patterns::diamond()};
    for (int k = 0; k < 20; ++k) all.push_back(fixtures::random_pattern(rng));
    for (const auto& p : all)
        for (double delta : {1.0, 0.5, 0.25}) {
            const auto m = build_lattice(p, 1, 1, delta);
            const auto g = fixtures::brute_force_tiling(p, 1, 1, delta);
            CHECK(m.vertex_count() == g.vertices.size());
            CHECK(m.edge_count() == g.edges.size());
            CHECK(degrees(m.vertex_count(), edge_pairs(m)) == degrees(g.vertices.size(), g.edges));
            std::vector<double> la, lb;
            for (const auto& e : m.edges) la.push_back(e.length);
            for (auto [a, b] : g.edges) lb.push_back(distance(g.vertices[a], g.vertices[b]));
            std::sort(la.begin(), la.end());
            std::sort(lb.begin(), lb.end());
            for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i] == doctest::Approx(lb[i]).epsilon(1e-12));
            CHECK(connected(m));
            for (std::size_t i = 0; i < m.vertex_count(); ++i)
                for (std::size_t j = i + 1; j < m.vertex_count(); ++j)
                    CHECK(distance(m.vertices[i], m.vertices[j]) > delta * 1e-9);
        }
}

TEST_CASE("single cell: identified boundary pairs are not merged") {
    const auto m = build_lattice(patterns::plus(), 1, 1, 1.0);
    CHECK(m.vertex_count() == 5);
}

TEST_CASE("counts grow like 1/delta^2") {
    const auto a = build_lattice(patterns::rhomb(0.4), 1, 1, 0.125);
    const auto b = build_lattice(patterns::rhomb(0.4), 1, 1, 0.0625);
    CHECK(b.edge_count() == 4 * a.edge_count());
    CHECK(double(b.vertex_count()) / a.vertex_count() == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("lattice errors") {
    CHECK_THROWS_AS(build_lattice(patterns::plus(), 1, 1, 0.3), Error);
    CHECK_THROWS_AS(build_lattice(patterns::plus(), 1, 0.9, 0.25), Error);
    CHECK_THROWS_WITH_AS(build_lattice(fixtures::freeze_lengths(patterns::plus()), 1, 1, 0.25),
                         doctest::Contains("simulation requires straight edges"), Error);
}

TEST_CASE("mesh dump") {
    const auto dir = std::filesystem::temp_directory_path() / "ghom_test_mesh";
    std::filesystem::remove_all(dir);
    const auto m = mark_dirichlet(build_lattice(patterns::blitz(), 1, 1, 0.5), DirichletSpec::whole_boundary());
    write_mesh_csv(m, dir);
    std::ifstream v(dir / "vertices.csv"), e(dir / "edges.csv");
    std::string header;
    std::getline(v, header);
    CHECK(header == "id,x,y,dirichlet");
    std::getline(e, header);
    CHECK(header == "id,from,to,length");
    std::size_t rows = 0;
    for (std::string line; std::getline(v, line);) ++rows;
    CHECK(rows == m.vertex_count());
    std::filesystem::remove_all(dir);
}
