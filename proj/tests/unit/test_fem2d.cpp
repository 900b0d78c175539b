#include "ghom/cell_graph.hpp"
#include "ghom/error.hpp"
#include "ghom/fem2d.hpp"
#include "ghom/timestep.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace ghom;

namespace {

HomogenizedProblem problem_with(Mat2 a) {
    HomogenizedProblem p;
    p.a_hom = a;
    return p;
}

// e^{-t} x(1-x) y(1-y) on the unit square, A = I
double exact(double t, Vec2 x) { return std::exp(-t) * x.x * (1 - x.x) * x.y * (1 - x.y); }

double manufactured_error(std::size_t n, double dt) {
    QuadFeSpace space(1, 1, n, n, 1);
    HomogenizedProblem prob = problem_with(Mat2::identity());
    prob.source = SourceSpec::custom([](double t, Vec2 x) {
        const double gx = x.x * (1 - x.x), gy = x.y * (1 - x.y);
        return std::exp(-t) * (-gx * gy + 2 * gy + 2 * gx);
    });
    const auto mats = assemble_2d(space, prob);
    const auto sys = apply_dirichlet(mats.mass, mats.stiffness, Vector(space.node_count(), 0.0), space.dirichlet_nodes());
    TransientSystem ts;
    ts.mass = sys.mass;
    ts.stiffness = sys.stiffness;
    ts.initial = sys.restrict_vector(interpolate(space, [](Vec2 x) { return exact(0, x); }));
    ts.load = [&](double t) { return sys.restrict_vector(assemble_load_2d(space, prob.source, t)); };
    ts.dt = dt;
    ts.t_final = 0.5;
    const auto u = sys.expand(crank_nicolson_run(ts, {}, {1e-13, 1}));
    return l2_error(space, u, [](Vec2 x) { return exact(0.5, x); });
}

}  // namespace

TEST_CASE("space layout") {
    QuadFeSpace s(2, 1, 4, 2, 3);
    CHECK(s.node_count() == 13 * 7);
    CHECK(s.cell_width() == 0.5);
    CHECK(s.node(0) == Vec2{0, 0});
    CHECK(s.node(12).x == doctest::Approx(2.0));
    CHECK(s.cell_node(1, 1, 0, 0) == 3 * 13 + 3);
    CHECK(s.dirichlet_nodes().size() == 2 * 13 + 2 * 5);
    CHECK(QuadFeSpace(1, 1, 2, 2, 2, DirichletSpec::parse("left")).dirichlet_nodes().size() == 5);

    const auto loc = s.locate({1.25, 0.75});
    CHECK(loc.cx == 2);
    CHECK(loc.cy == 1);
    CHECK(loc.xi == doctest::Approx(0.5));
    CHECK(loc.eta == doctest::Approx(0.5));
    CHECK(s.locate({2.0, 1.0}).cx == 3);
    CHECK_NOTHROW(s.locate({2.0 + 1e-13, -1e-13}));
    CHECK_THROWS_AS(s.locate({2.1, 0.5}), Error);
}

TEST_CASE("Q1 Laplacian element") {
    QuadFeSpace s(1, 1, 1, 1, 1);
    const auto k = assemble_2d(s, problem_with(Mat2::identity())).stiffness;
    CHECK(k.at(0, 0) == doctest::Approx(2.0 / 3));
    CHECK(k.at(0, 3) == doctest::Approx(-1.0 / 3));
    CHECK(k.at(0, 1) == doctest::Approx(-1.0 / 6));
    const auto k3 = assemble_2d(s, problem_with(Mat2::diag(3, 3))).stiffness;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(k3.at(i, j) == doctest::Approx(3 * k.at(i, j)));
}

TEST_CASE("assembled matrices") {
    QuadFeSpace s(1, 2, 3, 2, 4);
    HomogenizedProblem prob = problem_with({0.7, 0.2, 0.2, 0.4});
    prob.rho_cp = 1.5;
    const auto mats = assemble_2d(s, prob);
    CHECK(mats.mass.sum() == doctest::Approx(1.5 * 2).epsilon(1e-12));
    CHECK(mats.stiffness.is_symmetric(1e-12));
    CHECK(norm_inf(spmv(mats.stiffness, Vector(s.node_count(), 1.0))) < 1e-11);
    CHECK_THROWS_AS(assemble_2d(s, problem_with({1, 0.5, 0.2, 1})), Error);
    CHECK_THROWS_AS(assemble_2d(s, problem_with({1, 2, 2, 1})), Error);
}

TEST_CASE("point evaluation") {
    QuadFeSpace one(1, 1, 1, 1, 1);
    const Vector u{0, 0, 0, 1};
    const std::vector<Vec2> centre{{0.5, 0.5}};
    CHECK(evaluate_at_points(one, u, centre)[0] == doctest::Approx(0.25));

    for (std::size_t q : {2u, 3u, 6u}) {
        QuadFeSpace s(1, 1, 3, 2, q);
        const auto g = [](Vec2 x) { return x.x * x.x * x.y; };
        const auto coeff = interpolate(s, g);
        std::vector<Vec2> pts;
        for (std::size_t i = 0; i < s.node_count(); i += 7) pts.push_back(s.node(i));
        for (double a : {0.0, 0.13, 0.5, 0.77, 1.0})
            for (double b : {0.0, 0.31, 0.9, 1.0}) pts.push_back({a, b});
        const auto v = evaluate_at_points(s, coeff, pts);
        const auto grad = evaluate_gradient_at_points(s, coeff, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(std::abs(v[i] - g(pts[i])) < 1e-13);
            CHECK(std::abs(grad[i].x - 2 * pts[i].x * pts[i].y) < 1e-11);
            CHECK(std::abs(grad[i].y - pts[i].x * pts[i].x) < 1e-11);
        }
        CHECK(l2_error(s, coeff, g) < 1e-14);
    }
    QuadFeSpace s(1, 1, 2, 2, 3);
    Vector coeff(s.node_count());
    for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] = std::sin(double(i));
    std::vector<Vec2> nodes;
    for (std::size_t i = 0; i < s.node_count(); ++i) nodes.push_back(s.node(i));
    const auto v = evaluate_at_points(s, coeff, nodes);
    for (std::size_t i = 0; i < coeff.size(); ++i) CHECK(std::abs(v[i] - coeff[i]) < 1e-13);
    const std::vector<Vec2> outside{{1.5, 0.5}};
    CHECK_THROWS_AS(evaluate_at_points(s, coeff, outside), Error);
}

TEST_CASE("homogenized source is the macroscopic source") {
    const auto p = patterns::plus();
    const auto g = SourceSpec::gaussian(4, 196, {0.5, 0.5}, 3);
    const auto h = homogenize_source(g, p);
    for (Vec2 x : {Vec2{0.5, 0.5}, Vec2{0.2, 0.7}}) CHECK(h(0.3, x) == g(0.3, x));
    CHECK(homogenize_source(SourceSpec::zero(), p).is_zero());
    CHECK(homogenize_source(SourceSpec::constant(2.5), p)(1.0, {0.1, 0.1}) == 2.5);
}

TEST_CASE("load vector of a constant source sums to the area") {
    QuadFeSpace s(2, 1, 3, 3, 2);
    const auto f = assemble_load_2d(s, SourceSpec::constant(1.5), 0);
    double total = 0;
    for (double v : f) total += v;
    CHECK(total == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("manufactured transient solution converges at the expected rate") {
    const double coarse = manufactured_error(8, 0.0625);
    const double fine = manufactured_error(16, 0.03125);
    INFO("coarse=" << coarse << " fine=" << fine);
    CHECK(coarse / fine >= 3.5);
}

TEST_CASE("anisotropic tensor spreads heat along the stiff axis") {
    QuadFeSpace space(1, 1, 4, 4, 4);
    HomogenizedProblem prob = problem_with(Mat2::diag(1.0, 0.1));
    prob.source = SourceSpec::gaussian(4, 196, {0.5, 0.5}, 3);
    const auto mats = assemble_2d(space, prob);
    const auto sys = apply_dirichlet(mats.mass, mats.stiffness, Vector(space.node_count(), 0.0), space.dirichlet_nodes());
    TransientSystem ts;
    ts.mass = sys.mass;
    ts.stiffness = sys.stiffness;
    ts.initial = Vector(sys.mass.dimension(), 0.0);
    ts.load = [&](double t) { return sys.restrict_vector(assemble_load_2d(space, prob.source, t)); };
    ts.dt = 0.01;
    ts.t_final = 0.3;
    std::vector<Vec2> pts;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j) pts.push_back({i / 40.0, j / 40.0});
    std::size_t checked = 0;
    crank_nicolson_run(ts, [&](std::size_t n, double, std::span<const double> u) {
        if (n == 0) return;
        const auto v = evaluate_at_points(space, sys.expand(u), pts);
        double mx = 0, my = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            mx += (pts[k].x - 0.5) * (pts[k].x - 0.5) * v[k];
            my += (pts[k].y - 0.5) * (pts[k].y - 0.5) * v[k];
        }
        CHECK(mx > my);
        ++checked;
    }, {1e-10, 5});
    CHECK(checked == 6);
}

TEST_CASE("grid csv") {
    QuadFeSpace s(1, 1, 1, 1, 1);
    const auto path = std::filesystem::temp_directory_path() / "ghom_test_grid.csv";
    write_grid_csv(path, s, Vector{0, 1, 2, 3}, 4);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 25);
    std::filesystem::remove(path);
}
