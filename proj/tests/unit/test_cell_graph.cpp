#include "ghom/cell_graph.hpp"
#include "ghom/error.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

using namespace ghom;

namespace {

bool has_failure(const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name) return !c.ok;
    return false;
}

int parse_error_line(const std::string& text) {
    try {
        parse_pattern(text);
    } catch (const ParseError& e) {
        return static_cast<int>(e.line());
    }
    return -1;
}

}  // namespace

TEST_CASE("plus pattern file") {
    const auto p = load_pattern(fixtures::pattern_file("plus.pat"));
    CHECK(p.vertex_count() == 5);
    CHECK(p.edge_count() == 4);
    CHECK(p.total_length() == doctest::Approx(2.0).epsilon(1e-15));
    for (double l : p.lengths()) CHECK(l == 0.5);
    CHECK_FALSE(p.has_length_overrides());
}

TEST_CASE("blitz pattern file lengths") {
    const auto p = load_pattern(fixtures::pattern_file("blitz.pat"));
    REQUIRE(p.edge_count() == 3);
    CHECK(p.length(0) == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK(p.length(1) == doctest::Approx(1.0));
    CHECK(p.length(2) == doctest::Approx(std::sqrt(2.0) / 2));
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_pattern("vertex 1 0 0\nvertex 2 1 0\n"), doctest::Contains("no edges"), ParseError);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 1 1 0\nedge 1 1 2\n") == 2);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 3 1 0\n") == 2);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 2 1 0\n# c\nedge 1 1 7\n") == 4);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 2 1 0\nedge 1 1 2 length -1\n") == 3);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 2 1 0\nedge 1 1 2 length 0\n") == 3);
    CHECK(parse_error_line("vertex 1 0 zero\n") == 1);
    CHECK(parse_error_line("vertex 1 0 0\nvertex 2 1 0\nedge 1 1 1\n") == 3);
    CHECK(parse_error_line("vertex 1 0 0\nvertx 2 1 0\n") == 2);
}

TEST_CASE("comments, blank lines and overrides") {
    const auto p = parse_pattern("# header\n\nvertex 1 0 0.5  # left\nvertex 2 1 0.5\nedge 1 1 2 length 2.5\n");
    CHECK(p.length(0) == 2.5);
    CHECK(p.has_length_overrides());
    CHECK(p.tangent(0).x == doctest::Approx(1.0));
}

TEST_CASE("serialization round trip") {
    std::mt19937 rng(7);
    for (int k = 0; k < 30; ++k) {
        const auto p = fixtures::random_pattern(rng, k % 2 == 1);
        const auto q = parse_pattern(to_text(p));
        REQUIRE(q.vertex_count() == p.vertex_count());
        REQUIRE(q.edge_count() == p.edge_count());
        for (std::size_t i = 0; i < p.vertex_count(); ++i) CHECK(q.vertex(i) == p.vertex(i));
        for (std::size_t j = 0; j < p.edge_count(); ++j) {
            CHECK(q.edge(j).from == p.edge(j).from);
            CHECK(q.edge(j).to == p.edge(j).to);
            CHECK(q.edge(j).length_override == p.edge(j).length_override);
            CHECK(q.length(j) == p.length(j));
        }
    }
}

TEST_CASE("periodic identification of the plus pattern") {
    const auto p = patterns::plus();
    const auto s = periodic_identification(p);
    CHECK(s.interior_count() == 3);
    CHECK(s.representative[3] == 0);
    CHECK(s.shift[3] == Vec2{1, 0});
    CHECK(s.representative[4] == 1);
    CHECK(s.shift[4] == Vec2{0, 1});
    for (std::size_t i : s.interior_vertices) {
        CHECK(s.representative[i] == i);
        CHECK(s.shift[i] == Vec2{0, 0});
    }
}

TEST_CASE("periodic identification of the blitz pattern") {
    const auto s = periodic_identification(patterns::blitz());
    CHECK(s.interior_count() == 2);
    CHECK(s.representative[3] == 0);
    CHECK(s.representative[2] == 1);
}

TEST_CASE("corners identify to one representative") {
    const auto s = periodic_identification(patterns::x_cross());
    // vertices: (0,0), (1,0), (.5,.5), (1,1), (0,1)
    CHECK(s.interior_count() == 2);
    CHECK(s.representative[1] == 0);
    CHECK(s.representative[3] == 0);
    CHECK(s.representative[4] == 0);
    CHECK(s.shift[3] == Vec2{1, 1});
}

TEST_CASE("identification invariants on random patterns") {
    std::mt19937 rng(17);
    for (int k = 0; k < 50; ++k) {
        const auto p = fixtures::random_pattern(rng);
        const auto s = periodic_identification(p);
        for (std::size_t i = 0; i < p.vertex_count(); ++i) {
            const std::size_t r = s.representative[i];
            CHECK(s.representative[r] == r);
            CHECK(distance(p.vertex(i), p.vertex(r) + s.shift[i]) < 1e-9);
        }
        CHECK(validate(p, s).ok());
    }
}

TEST_CASE("identification does not depend on labels") {
    std::mt19937 rng(23);
    for (int k = 0; k < 20; ++k) {
        const auto p = fixtures::random_pattern(rng);
        std::vector<std::size_t> vperm(p.vertex_count()), eperm(p.edge_count());
        std::iota(vperm.begin(), vperm.end(), 0);
        std::iota(eperm.begin(), eperm.end(), 0);
        std::shuffle(vperm.begin(), vperm.end(), rng);
        std::shuffle(eperm.begin(), eperm.end(), rng);
        const auto q = fixtures::relabel(p, vperm, eperm);
        const auto sp = periodic_identification(p);
        const auto sq = periodic_identification(q);
        CHECK(sp.interior_count() == sq.interior_count());
        for (std::size_t i = 0; i < p.vertex_count(); ++i) {
            CHECK(sq.shift[vperm[i]] == sp.shift[i]);
            CHECK(q.vertex(sq.representative[vperm[i]]) == p.vertex(sp.representative[i]));
        }
    }
}

TEST_CASE("fixture patterns validate") {
    for (const char* name : {"plus.pat", "rhomb.pat", "blitz.pat", "x.pat", "diamond.pat"}) {
        const auto p = load_pattern(fixtures::pattern_file(name));
        CHECK_MESSAGE(validate(p, periodic_identification(p)).ok(), name);
    }
    for (double phi : {0.1, 0.4, std::atan(0.5), 0.7}) CHECK(validate(patterns::rhomb(phi), periodic_identification(patterns::rhomb(phi))).ok());
}

TEST_CASE("rhomb angle range") {
    CHECK_THROWS_AS(patterns::rhomb(0.0), Error);
    CHECK_THROWS_AS(patterns::rhomb(std::numbers::pi / 4), Error);
}

TEST_CASE("invalid patterns") {
    SUBCASE("horizontal line only fails the e2 contact") {
        const auto p = load_pattern(fixtures::pattern_file("horizontal.pat"));
        const auto s = periodic_identification(p);
        CHECK(s.representative[1] == 0);
        const auto r = validate(p, s);
        CHECK_FALSE(r.ok());
        CHECK(has_failure(r, "opposite-contacts"));
        CHECK_FALSE(has_failure(r, "connected"));
    }
    SUBCASE("two disjoint crosses fail connectivity") {
        const auto p = load_pattern(fixtures::pattern_file("broken.pat"));
        const auto r = validate(p, periodic_identification(p));
        CHECK(has_failure(r, "connected"));
        CHECK(r.failures().size() == 1);
        CHECK_THROWS_AS(require_valid(p), Error);
    }
    SUBCASE("missing partner") {
        const auto p = parse_pattern("vertex 1 0 0.5\nvertex 2 0.5 0.5\nedge 1 1 2\n");
        CHECK_THROWS_WITH_AS(periodic_identification(p), doctest::Contains("pattern not periodic"), Error);
    }
    SUBCASE("edge along a side") {
        const auto p = parse_pattern(
            "vertex 1 0 0\nvertex 2 1 0\nvertex 3 0 1\nvertex 4 1 1\nvertex 5 0.5 0.5\n"
            "edge 1 1 2\nedge 2 1 5\nedge 3 5 4\nedge 4 3 5\n");
        CHECK(has_failure(validate(p, periodic_identification(p)), "boundary-points-are-vertices"));
    }
    SUBCASE("vertex outside the cell") {
        const auto p = parse_pattern("vertex 1 0 0.5\nvertex 2 1.5 0.5\nedge 1 1 2\n");
        CHECK_THROWS_AS(require_valid(p), Error);
    }
}
