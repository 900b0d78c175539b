#pragma once

#include "ghom/geometry.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ghom {

/// Absolute tolerance for matching unit-cell coordinates.
inline constexpr double kCellTolerance = 1e-9;

struct PatternEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::optional<double> length_override;
};

/// The unit-cell graph inside [0,1]^2. Vertex and edge indices are 0-based
/// here; the text format numbers them from 1.
class UnitCellPattern {
public:
    UnitCellPattern() = default;
    UnitCellPattern(std::vector<Vec2> vertices, std::vector<PatternEdge> edges);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<PatternEdge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    Vec2 vertex(std::size_t i) const { return vertices_[i]; }
    const PatternEdge& edge(std::size_t j) const { return edges_[j]; }

    /// Euclidean chord length unless overridden.
    double length(std::size_t j) const { return lengths_[j]; }
    const std::vector<double>& lengths() const { return lengths_; }
    double total_length() const { return total_length_; }

    /// end - start, as positions in the cell.
    Vec2 chord(std::size_t j) const { return vertices_[edges_[j].to] - vertices_[edges_[j].from]; }
    /// Unit chord direction; the tangent for straight edges.
    Vec2 tangent(std::size_t j) const;

    bool has_length_overrides() const;

private:
    std::vector<Vec2> vertices_;
    std::vector<PatternEdge> edges_;
    std::vector<double> lengths_;
    double total_length_ = 0.0;
};

UnitCellPattern parse_pattern(std::string_view text);
UnitCellPattern load_pattern(const std::filesystem::path& path);
/// Text form accepted by parse_pattern; numbers printed with 17 significant digits.
std::string to_text(const UnitCellPattern& pattern);

/// Periodic identification of opposite boundary vertices.
struct PeriodicStructure {
    /// representative[i]: index of the vertex not on the right/top side that
    /// vertex i is identified with (i itself for such vertices).
    std::vector<std::size_t> representative;
    /// shift[i] = v_i - v_representative[i], one of 0, e1, e2, e1+e2.
    std::vector<Vec2> shift;
    /// Vertices not on the right/top side, in declaration order.
    std::vector<std::size_t> interior_vertices;
    /// Position of vertex i in interior_vertices (via its representative).
    std::vector<std::size_t> interior_slot;

    std::size_t interior_count() const { return interior_vertices.size(); }
    /// Row block of the representative of vertex i.
    std::size_t slot(std::size_t i) const { return interior_slot[i]; }
};

/// Throws Error("pattern not periodic") if a boundary vertex lacks its opposite partner.
PeriodicStructure periodic_identification(const UnitCellPattern& pattern);

struct ValidationCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const;
    std::vector<std::string> failures() const;
};

/// Runs the connectivity, opposite-contact and boundary-vertex checks.
ValidationReport validate(const UnitCellPattern& pattern, const PeriodicStructure& periodic);

/// Convenience: periodic identification + validation, throwing on failure.
PeriodicStructure require_valid(const UnitCellPattern& pattern);

} // namespace ghom

namespace ghom::patterns {

/// Cross through the cell centre; four edges of length 1/2.
UnitCellPattern plus();
/// Vertical line plus two lines through the centre crossing at angle 2*phi,
/// phi in (0, pi/4).
UnitCellPattern rhomb(double phi);
/// Zig-zag (0,1/2) -> (1/2,0) -> (1/2,1) -> (1,1/2).
UnitCellPattern blitz();
/// Both diagonals of the cell.
UnitCellPattern x_cross();
/// Square rotated by 45 degrees touching the side midpoints.
UnitCellPattern diamond();

} // namespace ghom::patterns
