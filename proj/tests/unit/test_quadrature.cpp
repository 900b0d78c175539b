#include "ghom/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace ghom;

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1") {
    for (std::size_t n = 1; n <= 12; ++n) {
        const auto rule = gauss_legendre(n);
        REQUIRE(rule.size() == n);
        double wsum = 0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t k = 0; k < 2 * n; ++k) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.points[i], double(k));
            CHECK(std::abs(s - 1.0 / (k + 1)) < 1e-14);
        }
    }
}

TEST_CASE("two-point rule nodes") {
    const auto rule = gauss_legendre(2);
    CHECK(rule.points[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(rule.points[1] == doctest::Approx(0.5 + 0.5 / std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("lagrange basis") {
    for (std::size_t p = 1; p <= 6; ++p) {
        const LagrangeBasis1D b(p);
        CHECK(b.size() == p + 1);
        for (std::size_t i = 0; i <= p; ++i) {
            CHECK(b.node(i) == doctest::Approx(double(i) / p));
            for (std::size_t k = 0; k <= p; ++k) CHECK(b.value(k, b.node(i)) == doctest::Approx(i == k ? 1.0 : 0.0));
        }
        for (double xi : {0.0, 0.13, 0.5, 0.77, 1.0}) {
            double s = 0, ds = 0, sx = 0;
            for (std::size_t k = 0; k <= p; ++k) {
                s += b.value(k, xi);
                ds += b.derivative(k, xi);
                sx += b.node(k) * b.derivative(k, xi);
            }
            CHECK(s == doctest::Approx(1.0));
            CHECK(std::abs(ds) < 1e-10);
            CHECK(sx == doctest::Approx(1.0));
        }
    }
}
