#include "ghom/fem2d.hpp"

#include "ghom/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace ghom {

QuadFeSpace::QuadFeSpace(double l1, double l2, std::size_t nx, std::size_t ny, std::size_t degree,
                         const DirichletSpec& dirichlet)
    : l1_(l1), l2_(l2), nx_(nx), ny_(ny), hx_(l1 / static_cast<double>(nx)), hy_(l2 / static_cast<double>(ny)),
      basis_(degree) {
    if (!(l1 > 0.0 && l2 > 0.0)) throw Error("QuadFeSpace: domain sides must be positive");
    if (nx == 0 || ny == 0) throw Error("QuadFeSpace: need at least one cell per direction");
    const double tol = 1e-12 * std::max(l1, l2);
    for (std::size_t i = 0; i < node_count(); ++i)
        if (dirichlet.contains(node(i), l1_, l2_, tol)) dirichlet_nodes_.push_back(i);
}

Vec2 QuadFeSpace::node(std::size_t index) const {
    const std::size_t i = index % nodes_x();
    const std::size_t j = index / nodes_x();
    const double q = static_cast<double>(degree());
    return {std::min(l1_, static_cast<double>(i) * hx_ / q), std::min(l2_, static_cast<double>(j) * hy_ / q)};
}

QuadFeSpace::Location QuadFeSpace::locate(Vec2 p) const {
    const double tol = 1e-12 * std::max({1.0, l1_, l2_});
    if (p.x < -tol || p.x > l1_ + tol || p.y < -tol || p.y > l2_ + tol)
        throw Error("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") lies outside the domain");
    const double x = std::clamp(p.x, 0.0, l1_);
    const double y = std::clamp(p.y, 0.0, l2_);
    const auto cx = std::min(nx_ - 1, static_cast<std::size_t>(x / hx_));
    const auto cy = std::min(ny_ - 1, static_cast<std::size_t>(y / hy_));
    return {cx, cy, x / hx_ - static_cast<double>(cx), y / hy_ - static_cast<double>(cy)};
}

namespace {

void check_spd(const Mat2& a) {
    const double scale = std::max(1.0, a.max_abs());
    if (std::abs(a.a12 - a.a21) > 1e-12 * scale) throw Error("A_hom is not symmetric");
    if (!(a.symmetric_eigenvalues()[0] > 0.0)) throw Error("A_hom is not positive definite");
}

struct CellTables {
    QuadratureRule rule;
    std::vector<std::vector<double>> value;  // [q][a]
    std::vector<std::vector<double>> slope;  // [q][a]

    CellTables(const LagrangeBasis1D& basis, std::size_t points) : rule(gauss_legendre(points)) {
        value.assign(rule.size(), std::vector<double>(basis.size()));
        slope.assign(rule.size(), std::vector<double>(basis.size()));
        for (std::size_t q = 0; q < rule.size(); ++q)
            for (std::size_t a = 0; a < basis.size(); ++a) {
                value[q][a] = basis.value(a, rule.points[q]);
                slope[q][a] = basis.derivative(a, rule.points[q]);
            }
    }
};

} // namespace

MatrixPair assemble_2d(const QuadFeSpace& space, const HomogenizedProblem& problem) {
    check_spd(problem.a_hom);
    const std::size_t n1 = space.degree() + 1;
    const std::size_t nloc = n1 * n1;
    const CellTables tab(space.basis(), n1);
    const double hx = space.cell_width();
    const double hy = space.cell_height();
    const Mat2& A = problem.a_hom;

    std::vector<Triplet> mass_t, stiff_t;
    mass_t.reserve(space.nx() * space.ny() * nloc * nloc);
    stiff_t.reserve(space.nx() * space.ny() * nloc * nloc);
    std::vector<double> m_loc(nloc * nloc), k_loc(nloc * nloc);
    std::vector<double> phi(nloc), dphi_x(nloc), dphi_y(nloc);
    std::vector<std::size_t> dofs(nloc);

    for (std::size_t cy = 0; cy < space.ny(); ++cy) {
        for (std::size_t cx = 0; cx < space.nx(); ++cx) {
            std::fill(m_loc.begin(), m_loc.end(), 0.0);
            std::fill(k_loc.begin(), k_loc.end(), 0.0);
            for (std::size_t b = 0; b < n1; ++b)
                for (std::size_t a = 0; a < n1; ++a) dofs[b * n1 + a] = space.cell_node(cx, cy, a, b);

            for (std::size_t qy = 0; qy < tab.rule.size(); ++qy) {
                for (std::size_t qx = 0; qx < tab.rule.size(); ++qx) {
                    const Vec2 x{(static_cast<double>(cx) + tab.rule.points[qx]) * hx,
                                 (static_cast<double>(cy) + tab.rule.points[qy]) * hy};
                    const double jw = tab.rule.weights[qx] * tab.rule.weights[qy] * hx * hy;
                    const double ax = problem.conductivity(x);
                    if (!(ax > 0.0)) throw Error("conductivity must be positive");
                    for (std::size_t b = 0; b < n1; ++b)
                        for (std::size_t a = 0; a < n1; ++a) {
                            const std::size_t k = b * n1 + a;
                            phi[k] = tab.value[qx][a] * tab.value[qy][b];
                            dphi_x[k] = tab.slope[qx][a] * tab.value[qy][b] / hx;
                            dphi_y[k] = tab.value[qx][a] * tab.slope[qy][b] / hy;
                        }
                    for (std::size_t i = 0; i < nloc; ++i) {
                        // (A grad phi_j) . grad phi_i
                        for (std::size_t j = 0; j < nloc; ++j) {
                            m_loc[i * nloc + j] += problem.rho_cp * jw * phi[i] * phi[j];
                            const double gx = A.a11 * dphi_x[j] + A.a12 * dphi_y[j];
                            const double gy = A.a21 * dphi_x[j] + A.a22 * dphi_y[j];
                            k_loc[i * nloc + j] += ax * jw * (gx * dphi_x[i] + gy * dphi_y[i]);
                        }
                    }
                }
            }
            for (std::size_t i = 0; i < nloc; ++i)
                for (std::size_t j = 0; j < nloc; ++j) {
                    mass_t.push_back({dofs[i], dofs[j], m_loc[i * nloc + j]});
                    stiff_t.push_back({dofs[i], dofs[j], k_loc[i * nloc + j]});
                }
        }
    }
    return {SparseMatrix::from_triplets(space.node_count(), mass_t),
            SparseMatrix::from_triplets(space.node_count(), stiff_t)};
}

Vector assemble_load_2d(const QuadFeSpace& space, const SourceSpec& f, double t) {
    Vector load(space.node_count(), 0.0);
    if (f.is_zero()) return load;
    const std::size_t n1 = space.degree() + 1;
    const CellTables tab(space.basis(), n1);
    const double hx = space.cell_width();
    const double hy = space.cell_height();
    for (std::size_t cy = 0; cy < space.ny(); ++cy)
        for (std::size_t cx = 0; cx < space.nx(); ++cx)
            for (std::size_t qy = 0; qy < tab.rule.size(); ++qy)
                for (std::size_t qx = 0; qx < tab.rule.size(); ++qx) {
                    const Vec2 x{(static_cast<double>(cx) + tab.rule.points[qx]) * hx,
                                 (static_cast<double>(cy) + tab.rule.points[qy]) * hy};
                    const double w = f(t, x) * tab.rule.weights[qx] * tab.rule.weights[qy] * hx * hy;
                    for (std::size_t b = 0; b < n1; ++b)
                        for (std::size_t a = 0; a < n1; ++a)
                            load[space.cell_node(cx, cy, a, b)] += w * tab.value[qx][a] * tab.value[qy][b];
                }
    return load;
}

SourceSpec homogenize_source(const SourceSpec& f, const UnitCellPattern&) {
    // (1/|cell|) int_cell f(t, x) ds(y) = f(t, x) for a source without y-dependence
    return f;
}

Vector evaluate_at_points(const QuadFeSpace& space, std::span<const double> coefficients, std::span<const Vec2> points) {
    if (coefficients.size() != space.node_count()) throw Error("evaluate_at_points: coefficient vector has wrong length");
    const std::size_t n1 = space.degree() + 1;
    const auto& basis = space.basis();
    std::vector<double> bx(n1), by(n1);
    Vector out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto loc = space.locate(points[p]);
        for (std::size_t a = 0; a < n1; ++a) {
            bx[a] = basis.value(a, loc.xi);
            by[a] = basis.value(a, loc.eta);
        }
        double s = 0.0;
        for (std::size_t b = 0; b < n1; ++b)
            for (std::size_t a = 0; a < n1; ++a) s += coefficients[space.cell_node(loc.cx, loc.cy, a, b)] * bx[a] * by[b];
        out[p] = s;
    }
    return out;
}

std::vector<Vec2> evaluate_gradient_at_points(const QuadFeSpace& space, std::span<const double> coefficients,
                                              std::span<const Vec2> points) {
    if (coefficients.size() != space.node_count())
        throw Error("evaluate_gradient_at_points: coefficient vector has wrong length");
    const std::size_t n1 = space.degree() + 1;
    const auto& basis = space.basis();
    std::vector<double> bx(n1), by(n1), dx(n1), dy(n1);
    std::vector<Vec2> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        const auto loc = space.locate(points[p]);
        for (std::size_t a = 0; a < n1; ++a) {
            bx[a] = basis.value(a, loc.xi);
            by[a] = basis.value(a, loc.eta);
            dx[a] = basis.derivative(a, loc.xi) / space.cell_width();
            dy[a] = basis.derivative(a, loc.eta) / space.cell_height();
        }
        Vec2 g;
        for (std::size_t b = 0; b < n1; ++b)
            for (std::size_t a = 0; a < n1; ++a) {
                const double c = coefficients[space.cell_node(loc.cx, loc.cy, a, b)];
                g.x += c * dx[a] * by[b];
                g.y += c * bx[a] * dy[b];
            }
        out[p] = g;
    }
    return out;
}

Vector interpolate(const QuadFeSpace& space, const std::function<double(Vec2)>& g) {
    Vector u(space.node_count());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = g(space.node(i));
    return u;
}

double l2_error(const QuadFeSpace& space, std::span<const double> coefficients, const std::function<double(Vec2)>& g) {
    const std::size_t n1 = space.degree() + 1;
    const CellTables tab(space.basis(), space.degree() + 3);
    const double hx = space.cell_width();
    const double hy = space.cell_height();
    double sum = 0.0;
    for (std::size_t cy = 0; cy < space.ny(); ++cy)
        for (std::size_t cx = 0; cx < space.nx(); ++cx)
            for (std::size_t qy = 0; qy < tab.rule.size(); ++qy)
                for (std::size_t qx = 0; qx < tab.rule.size(); ++qx) {
                    const Vec2 x{(static_cast<double>(cx) + tab.rule.points[qx]) * hx,
                                 (static_cast<double>(cy) + tab.rule.points[qy]) * hy};
                    double uh = 0.0;
                    for (std::size_t b = 0; b < n1; ++b)
                        for (std::size_t a = 0; a < n1; ++a)
                            uh += coefficients[space.cell_node(cx, cy, a, b)] * tab.value[qx][a] * tab.value[qy][b];
                    const double d = uh - g(x);
                    sum += d * d * tab.rule.weights[qx] * tab.rule.weights[qy] * hx * hy;
                }
    return std::sqrt(sum);
}

void write_grid_csv(const std::filesystem::path& path, const QuadFeSpace& space, std::span<const double> coefficients,
                    std::size_t resolution) {
    if (resolution == 0) throw Error("write_grid_csv: resolution must be positive");
    std::vector<Vec2> pts;
    pts.reserve((resolution + 1) * (resolution + 1));
    for (std::size_t j = 0; j <= resolution; ++j)
        for (std::size_t i = 0; i <= resolution; ++i)
            pts.push_back({space.l1() * static_cast<double>(i) / static_cast<double>(resolution),
                           space.l2() * static_cast<double>(j) / static_cast<double>(resolution)});
    const Vector values = evaluate_at_points(space, coefficients, pts);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << std::setprecision(17) << "x,y,value\n";
    for (std::size_t k = 0; k < pts.size(); ++k) out << pts[k].x << ',' << pts[k].y << ',' << values[k] << '\n';
    if (!out) throw Error("failed to write " + path.string());
}

} // namespace ghom
