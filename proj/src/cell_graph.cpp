#include "ghom/cell_graph.hpp"

#include "ghom/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ghom {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= kCellTolerance; }

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

double parse_real(std::string_view word, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value))
        throw ParseError(line, "expected a real number, got '" + std::string(word) + "'");
    return value;
}

long parse_int(std::string_view word, std::size_t line) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size())
        throw ParseError(line, "expected an integer, got '" + std::string(word) + "'");
    return value;
}

std::optional<std::size_t> find_vertex(const std::vector<Vec2>& vertices, Vec2 p) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (near(vertices[i].x, p.x) && near(vertices[i].y, p.y)) return i;
    return std::nullopt;
}

} // namespace

UnitCellPattern::UnitCellPattern(std::vector<Vec2> vertices, std::vector<PatternEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    lengths_.reserve(edges_.size());
    for (const auto& e : edges_) {
        if (e.from >= vertices_.size() || e.to >= vertices_.size()) throw Error("edge references unknown vertex");
        if (e.from == e.to) throw Error("edge is a loop in the unit cell");
        double l = e.length_override ? *e.length_override : distance(vertices_[e.from], vertices_[e.to]);
        if (!(l > 0.0)) throw Error("edge has non-positive length");
        lengths_.push_back(l);
    }
    total_length_ = std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

Vec2 UnitCellPattern::tangent(std::size_t j) const {
    const Vec2 c = chord(j);
    return c / norm(c);
}

bool UnitCellPattern::has_length_overrides() const {
    for (const auto& e : edges_)
        if (e.length_override) return true;
    return false;
}

UnitCellPattern parse_pattern(std::string_view text) {
    std::vector<Vec2> vertices;
    std::vector<PatternEdge> edges;
    std::vector<std::size_t> edge_lines;
    std::vector<std::pair<long, long>> edge_ends;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto words = split_words(line);
        if (words.empty()) {
            if (eol == text.size()) break;
            continue;
        }

        if (words[0] == "vertex") {
            if (words.size() != 4) throw ParseError(line_no, "expected 'vertex <id> <x> <y>'");
            const long id = parse_int(words[1], line_no);
            if (id >= 1 && static_cast<std::size_t>(id) <= vertices.size())
                throw ParseError(line_no, "duplicate vertex id " + std::to_string(id));
            if (id != static_cast<long>(vertices.size()) + 1)
                throw ParseError(line_no, "vertex ids must be contiguous from 1, expected " +
                                              std::to_string(vertices.size() + 1));
            vertices.push_back({parse_real(words[2], line_no), parse_real(words[3], line_no)});
        } else if (words[0] == "edge") {
            if (words.size() != 4 && words.size() != 6)
                throw ParseError(line_no, "expected 'edge <id> <from> <to> [length <l>]'");
            const long id = parse_int(words[1], line_no);
            if (id != static_cast<long>(edges.size()) + 1)
                throw ParseError(line_no, (id >= 1 && static_cast<std::size_t>(id) <= edges.size()
                                               ? "duplicate edge id "
                                               : "edge ids must be contiguous from 1, got ") +
                                              std::to_string(id));
            PatternEdge e;
            edge_ends.emplace_back(parse_int(words[2], line_no), parse_int(words[3], line_no));
            if (words.size() == 6) {
                if (words[4] != "length") throw ParseError(line_no, "expected keyword 'length'");
                const double l = parse_real(words[5], line_no);
                if (!(l > 0.0)) throw ParseError(line_no, "length override must be positive");
                e.length_override = l;
            }
            edges.push_back(e);
            edge_lines.push_back(line_no);
        } else {
            throw ParseError(line_no, "unknown record '" + std::string(words[0]) + "'");
        }
        if (eol == text.size()) break;
    }

    if (vertices.empty()) throw ParseError(0, "no vertices");
    if (edges.empty()) throw ParseError(0, "no edges");

    for (std::size_t j = 0; j < edges.size(); ++j) {
        const auto [from, to] = edge_ends[j];
        const long n = static_cast<long>(vertices.size());
        if (from < 1 || from > n) throw ParseError(edge_lines[j], "edge references unknown vertex " + std::to_string(from));
        if (to < 1 || to > n) throw ParseError(edge_lines[j], "edge references unknown vertex " + std::to_string(to));
        if (from == to) throw ParseError(edge_lines[j], "edge endpoints must be distinct");
        edges[j].from = static_cast<std::size_t>(from - 1);
        edges[j].to = static_cast<std::size_t>(to - 1);
        if (!edges[j].length_override && distance(vertices[edges[j].from], vertices[edges[j].to]) == 0.0)
            throw ParseError(edge_lines[j], "edge has zero length");
    }
    return UnitCellPattern(std::move(vertices), std::move(edges));
}

UnitCellPattern load_pattern(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pattern file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_pattern(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

std::string to_text(const UnitCellPattern& pattern) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (std::size_t i = 0; i < pattern.vertex_count(); ++i)
        out << "vertex " << i + 1 << ' ' << pattern.vertex(i).x << ' ' << pattern.vertex(i).y << '\n';
    for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
        const auto& e = pattern.edge(j);
        out << "edge " << j + 1 << ' ' << e.from + 1 << ' ' << e.to + 1;
        if (e.length_override) out << " length " << *e.length_override;
        out << '\n';
    }
    return out.str();
}

PeriodicStructure periodic_identification(const UnitCellPattern& pattern) {
    const auto& v = pattern.vertices();
    const std::size_t n = v.size();
    PeriodicStructure s;
    s.representative.resize(n);
    s.shift.resize(n);
    s.interior_slot.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        const bool right = near(v[i].x, 1.0);
        const bool top = near(v[i].y, 1.0);
        const bool left = near(v[i].x, 0.0);
        const bool bottom = near(v[i].y, 0.0);

        const auto require_partner = [&](Vec2 offset) {
            if (!find_vertex(v, v[i] + offset))
                throw Error("pattern not periodic: vertex " + std::to_string(i + 1) + " has no opposite partner");
        };
        if (left) require_partner({1.0, 0.0});
        if (right) require_partner({-1.0, 0.0});
        if (bottom) require_partner({0.0, 1.0});
        if (top) require_partner({0.0, -1.0});

        const Vec2 eta{right ? 1.0 : 0.0, top ? 1.0 : 0.0};
        s.shift[i] = eta;
        if (eta == Vec2{}) {
            s.representative[i] = i;
        } else {
            const auto partner = find_vertex(v, v[i] - eta);
            if (!partner)
                throw Error("pattern not periodic: vertex " + std::to_string(i + 1) + " has no opposite partner");
            s.representative[i] = *partner;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (s.representative[i] == i) {
            s.interior_slot[i] = s.interior_vertices.size();
            s.interior_vertices.push_back(i);
        }
    }
    for (std::size_t i = 0; i < n; ++i) s.interior_slot[i] = s.interior_slot[s.representative[i]];
    return s;
}

bool ValidationReport::ok() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.ok) out.push_back(c.name + ": " + c.detail);
    return out;
}

ValidationReport validate(const UnitCellPattern& pattern, const PeriodicStructure& periodic) {
    ValidationReport report;
    const auto& v = pattern.vertices();
    const std::size_t n = v.size();

    {
        ValidationCheck c{"inside-unit-cell", true, ""};
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i].x < -kCellTolerance || v[i].x > 1.0 + kCellTolerance || v[i].y < -kCellTolerance ||
                v[i].y > 1.0 + kCellTolerance) {
                c.ok = false;
                c.detail += "vertex " + std::to_string(i + 1) + " outside [0,1]^2; ";
            }
        }
        report.checks.push_back(c);
    }

    {
        // union-find over the raw (non-identified) cell graph
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        const auto find = [&](std::size_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (const auto& e : pattern.edges()) parent[find(e.from)] = find(e.to);
        std::size_t components = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (find(i) == i) ++components;
        report.checks.push_back({"connected", components == 1,
                                 components == 1 ? "" : std::to_string(components) + " connected components"});
    }

    {
        bool horizontal = false, vertical = false;
        for (std::size_t i = 0; i < n && i < periodic.shift.size(); ++i) {
            horizontal = horizontal || periodic.shift[i].x != 0.0;
            vertical = vertical || periodic.shift[i].y != 0.0;
        }
        std::string detail;
        if (!horizontal) detail += "no contact pair across the left/right sides (e1 direction)";
        if (!vertical) detail += std::string(detail.empty() ? "" : "; ") + "no contact pair across the bottom/top sides (e2 direction)";
        report.checks.push_back({"opposite-contacts", horizontal && vertical, detail});
    }

    {
        ValidationCheck c{"boundary-points-are-vertices", true, ""};
        for (std::size_t j = 0; j < pattern.edge_count(); ++j) {
            const Vec2 a = v[pattern.edge(j).from];
            const Vec2 b = v[pattern.edge(j).to];
            const bool along = (near(a.x, 0.0) && near(b.x, 0.0)) || (near(a.x, 1.0) && near(b.x, 1.0)) ||
                               (near(a.y, 0.0) && near(b.y, 0.0)) || (near(a.y, 1.0) && near(b.y, 1.0));
            if (along) {
                c.ok = false;
                c.detail += "edge " + std::to_string(j + 1) + " runs along the cell boundary; ";
            }
        }
        report.checks.push_back(c);
    }
    return report;
}

PeriodicStructure require_valid(const UnitCellPattern& pattern) {
    PeriodicStructure s = periodic_identification(pattern);
    const ValidationReport report = validate(pattern, s);
    if (!report.ok()) {
        std::string msg = "pattern failed validation:";
        for (const auto& f : report.failures()) msg += " " + f;
        throw Error(msg);
    }
    return s;
}

} // namespace ghom

namespace ghom::patterns {

namespace {
UnitCellPattern make(std::vector<Vec2> v, std::initializer_list<std::pair<int, int>> e) {
    std::vector<PatternEdge> edges;
    for (const auto& [from, to] : e)
        edges.push_back({static_cast<std::size_t>(from - 1), static_cast<std::size_t>(to - 1), std::nullopt});
    return UnitCellPattern(std::move(v), std::move(edges));
}
} // namespace

UnitCellPattern plus() {
    return make({{0.0, 0.5}, {0.5, 0.0}, {0.5, 0.5}, {1.0, 0.5}, {0.5, 1.0}}, {{3, 4}, {3, 5}, {1, 3}, {2, 3}});
}

UnitCellPattern rhomb(double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi / 4.0)) throw Error("rhomb: angle must lie in (0, pi/4)");
    const double h = 0.5 * std::tan(phi);
    return make({{0.0, 0.5 + h}, {0.0, 0.5 - h}, {0.5, 0.0}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 0.5 + h}, {1.0, 0.5 - h}},
                {{6, 4}, {7, 4}, {4, 5}, {4, 1}, {4, 2}, {3, 4}});
}

UnitCellPattern blitz() {
    return make({{0.0, 0.5}, {0.5, 0.0}, {0.5, 1.0}, {1.0, 0.5}}, {{1, 2}, {2, 3}, {3, 4}});
}

UnitCellPattern x_cross() {
    return make({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}, {0.0, 1.0}}, {{3, 5}, {4, 3}, {3, 2}, {1, 3}});
}

UnitCellPattern diamond() {
    return make({{0.0, 0.5}, {0.5, 0.0}, {0.5, 1.0}, {1.0, 0.5}}, {{4, 3}, {3, 1}, {1, 2}, {2, 4}});
}

} // namespace ghom::patterns
