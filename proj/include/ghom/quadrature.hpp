#pragma once

#include <cstddef>
#include <vector>

namespace ghom {

/// Gauss-Legendre rule mapped to the reference interval [0, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// n-point rule, exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(std::size_t n);

/// Lagrange basis of degree p on [0, 1] with equally spaced nodes
/// 0, 1/p, ..., 1 (node k at k/p).
class LagrangeBasis1D {
public:
    explicit LagrangeBasis1D(std::size_t degree);

    std::size_t degree() const { return degree_; }
    std::size_t size() const { return degree_ + 1; }
    double node(std::size_t k) const { return nodes_[k]; }

    double value(std::size_t k, double xi) const;
    double derivative(std::size_t k, double xi) const;

private:
    std::size_t degree_;
    std::vector<double> nodes_;
    std::vector<double> denominators_;
};

} // namespace ghom
