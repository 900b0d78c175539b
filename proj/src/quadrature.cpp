#include "ghom/quadrature.hpp"

#include "ghom/error.hpp"

#include <cmath>
#include <numbers>

namespace ghom {

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw Error("gauss_legendre: need at least one point");
    QuadratureRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; nodes on
    // [-1, 1] come in symmetric pairs
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map to [0, 1]
        rule.points[i] = 0.5 * (1.0 - x);
        rule.points[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

LagrangeBasis1D::LagrangeBasis1D(std::size_t degree) : degree_(degree) {
    if (degree == 0) throw Error("LagrangeBasis1D: degree must be at least 1");
    nodes_.resize(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) nodes_[k] = static_cast<double>(k) / static_cast<double>(degree);
    denominators_.assign(degree + 1, 1.0);
    for (std::size_t k = 0; k <= degree; ++k)
        for (std::size_t m = 0; m <= degree; ++m)
            if (m != k) denominators_[k] *= nodes_[k] - nodes_[m];
}

double LagrangeBasis1D::value(std::size_t k, double xi) const {
    double v = 1.0;
    for (std::size_t m = 0; m <= degree_; ++m)
        if (m != k) v *= xi - nodes_[m];
    return v / denominators_[k];
}

double LagrangeBasis1D::derivative(std::size_t k, double xi) const {
    double sum = 0.0;
    for (std::size_t j = 0; j <= degree_; ++j) {
        if (j == k) continue;
        double prod = 1.0;
        for (std::size_t m = 0; m <= degree_; ++m)
            if (m != k && m != j) prod *= xi - nodes_[m];
        sum += prod;
    }
    return sum / denominators_[k];
}

} // namespace ghom
