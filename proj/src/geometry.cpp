#include "spectral/geometry.hpp"

#include "spectral/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

namespace spectral {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::map<EdgeKey, int> count_edges(const Mesh& mesh) {
    std::map<EdgeKey, int> counts;
    for (const auto& e : mesh.elements) {
        for (int i = 0; i < 3; ++i) {
            ++counts[edge_key(e[i], e[(i + 1) % 3])];
        }
    }
    return counts;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

Mesh base_rhombus(const DomainSpec& spec) {
    const double half = 0.5 * spec.rhombus_angle();
    const double c = std::cos(half);
    const double s = std::sin(half);
    Mesh mesh;
    // A, D, C, B, O (centre)
    mesh.nodes = {{0.0, 0.0}, {c, -s}, {2.0 * c, 0.0}, {c, s}, {c, 0.0}};
    mesh.elements = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    mesh.boundary_edges = {{0, 1, EdgeTag::outer},
                           {1, 2, EdgeTag::outer},
                           {2, 3, EdgeTag::outer},
                           {3, 0, EdgeTag::outer},
                           {1, 4, EdgeTag::diagonal},
                           {4, 3, EdgeTag::diagonal}};
    return mesh;
}

Mesh base_rectangle(const DomainSpec& spec) {
    const int cells = std::max(1, static_cast<int>(std::lround(spec.side_a / spec.side_b)));
    const double dx = spec.side_a / cells;
    Mesh mesh;
    for (int i = 0; i <= cells; ++i) {
        mesh.nodes.push_back({i * dx, 0.0});
    }
    for (int i = 0; i <= cells; ++i) {
        mesh.nodes.push_back({i * dx, spec.side_b});
    }
    const int top = cells + 1;
    for (int i = 0; i < cells; ++i) {
        mesh.elements.push_back({i, i + 1, top + i + 1});
        mesh.elements.push_back({i, top + i + 1, top + i});
        mesh.boundary_edges.push_back({i, i + 1, EdgeTag::outer});
        mesh.boundary_edges.push_back({top + i + 1, top + i, EdgeTag::outer});
    }
    mesh.boundary_edges.push_back({cells, top + cells, EdgeTag::outer});
    mesh.boundary_edges.push_back({top, 0, EdgeTag::outer});
    return mesh;
}

Mesh base_polygon(const DomainSpec& spec) {
    Mesh mesh;
    mesh.nodes.push_back({0.0, 0.0});
    for (const auto& v : spec.vertices()) {
        mesh.nodes.push_back(v);
    }
    const int k = spec.vertex_count;
    for (int i = 0; i < k; ++i) {
        const int a = 1 + i;
        const int b = 1 + (i + 1) % k;
        mesh.elements.push_back({0, a, b});
        mesh.boundary_edges.push_back({a, b, EdgeTag::outer});
    }
    return mesh;
}

} // namespace

double DomainSpec::rhombus_angle() const { return 2.0 * std::numbers::pi / m; }

std::vector<Point2> DomainSpec::vertices() const {
    switch (kind) {
    case DomainKind::rhombus: {
        const double half = 0.5 * rhombus_angle();
        const double c = std::cos(half);
        const double s = std::sin(half);
        return {{0.0, 0.0}, {c, -s}, {2.0 * c, 0.0}, {c, s}};
    }
    case DomainKind::rectangle:
        return {{0.0, 0.0}, {side_a, 0.0}, {side_a, side_b}, {0.0, side_b}};
    case DomainKind::regular_polygon: {
        std::vector<Point2> out;
        out.reserve(vertex_count);
        for (int i = 0; i < vertex_count; ++i) {
            const double t = std::numbers::pi / vertex_count + 2.0 * std::numbers::pi * i / vertex_count;
            out.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
        }
        return out;
    }
    }
    return {};
}

std::string DomainSpec::name() const {
    switch (kind) {
    case DomainKind::rhombus:
        return "rhombus_m" + std::to_string(m);
    case DomainKind::rectangle:
        return "rectangle_" + format_number(side_a) + "x" + format_number(side_b);
    case DomainKind::regular_polygon:
        return "polygon_k" + std::to_string(vertex_count) + "_r" + format_number(circumradius);
    }
    return "unknown";
}

DomainSpec make_rhombus(int m) {
    if (m < 5) {
        throw ParameterError("rhombus requires m >= 5, got " + std::to_string(m));
    }
    DomainSpec spec;
    spec.kind = DomainKind::rhombus;
    spec.m = m;
    const double beta = spec.rhombus_angle();
    spec.area = std::sin(beta);
    spec.width = std::sin(beta);
    spec.diameter = 2.0 * std::cos(0.5 * beta);
    spec.centrally_symmetric = true;
    return spec;
}

DomainSpec make_rectangle(double a, double b) {
    if (!(b > 0.0) || !(a >= b) || !std::isfinite(a)) {
        throw ParameterError("rectangle requires a >= b > 0");
    }
    DomainSpec spec;
    spec.kind = DomainKind::rectangle;
    spec.side_a = a;
    spec.side_b = b;
    spec.area = a * b;
    spec.width = b;
    spec.diameter = std::hypot(a, b);
    spec.centrally_symmetric = true;
    return spec;
}

DomainSpec make_regular_polygon(int k, double circumradius) {
    if (k < 3 || !(circumradius > 0.0) || !std::isfinite(circumradius)) {
        throw ParameterError("regular polygon requires k >= 3 and R > 0");
    }
    DomainSpec spec;
    spec.kind = DomainKind::regular_polygon;
    spec.vertex_count = k;
    spec.circumradius = circumradius;
    const double pi = std::numbers::pi;
    spec.area = 0.5 * k * circumradius * circumradius * std::sin(2.0 * pi / k);
    if (k % 2 == 0) {
        spec.width = 2.0 * circumradius * std::cos(pi / k);
        spec.diameter = 2.0 * circumradius;
        spec.centrally_symmetric = true;
    } else {
        spec.width = circumradius * (1.0 + std::cos(pi / k));
        spec.diameter = 2.0 * circumradius * std::cos(0.5 * pi / k);
        spec.centrally_symmetric = false;
    }
    return spec;
}

Mesh triangulate(const DomainSpec& spec, int level) {
    if (level < 0) {
        throw ParameterError("refinement level must be >= 0");
    }
    Mesh mesh;
    switch (spec.kind) {
    case DomainKind::rhombus:
        mesh = base_rhombus(spec);
        break;
    case DomainKind::rectangle:
        mesh = base_rectangle(spec);
        break;
    case DomainKind::regular_polygon:
        mesh = base_polygon(spec);
        break;
    }
    for (int i = 0; i < level; ++i) {
        mesh = refine(mesh);
    }
    return mesh;
}

Mesh refine(const Mesh& mesh) {
    Mesh out;
    out.nodes = mesh.nodes;
    out.refinement_level = mesh.refinement_level + 1;
    out.elements.reserve(4 * mesh.elements.size());

    std::map<EdgeKey, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto key = edge_key(a, b);
        if (auto it = midpoint.find(key); it != midpoint.end()) {
            return it->second;
        }
        const Point2 pa = mesh.nodes[a];
        const Point2 pb = mesh.nodes[b];
        const int idx = static_cast<int>(out.nodes.size());
        out.nodes.push_back({0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)});
        midpoint.emplace(key, idx);
        return idx;
    };

    for (const auto& e : mesh.elements) {
        const int m01 = mid(e[0], e[1]);
        const int m12 = mid(e[1], e[2]);
        const int m20 = mid(e[2], e[0]);
        out.elements.push_back({e[0], m01, m20});
        out.elements.push_back({m01, e[1], m12});
        out.elements.push_back({m20, m12, e[2]});
        out.elements.push_back({m01, m12, m20});
    }
    for (const auto& edge : mesh.boundary_edges) {
        const int m = mid(edge.a, edge.b);
        out.boundary_edges.push_back({edge.a, m, edge.tag});
        out.boundary_edges.push_back({m, edge.b, edge.tag});
    }
    return out;
}

Mesh submesh(const Mesh& mesh, const std::function<bool(Point2)>& keep) {
    Mesh out;
    out.refinement_level = mesh.refinement_level;
    std::vector<int> remap(mesh.nodes.size(), -1);
    auto node = [&](int i) {
        if (remap[i] < 0) {
            remap[i] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(mesh.nodes[i]);
        }
        return remap[i];
    };

    std::map<EdgeKey, int> owners;
    for (const auto& e : mesh.elements) {
        const Point2 c{(mesh.nodes[e[0]].x + mesh.nodes[e[1]].x + mesh.nodes[e[2]].x) / 3.0,
                       (mesh.nodes[e[0]].y + mesh.nodes[e[1]].y + mesh.nodes[e[2]].y) / 3.0};
        if (!keep(c)) {
            continue;
        }
        out.elements.push_back({node(e[0]), node(e[1]), node(e[2])});
        for (int i = 0; i < 3; ++i) {
            ++owners[edge_key(e[i], e[(i + 1) % 3])];
        }
    }

    std::map<EdgeKey, bool> tagged;
    for (const auto& edge : mesh.boundary_edges) {
        const auto key = edge_key(edge.a, edge.b);
        if (owners.contains(key)) {
            out.boundary_edges.push_back({remap[edge.a], remap[edge.b], edge.tag});
            tagged[key] = true;
        }
    }
    // Edges exposed by the cut are new boundary.
    for (const auto& [key, count] : owners) {
        if (count == 1 && !tagged.contains(key)) {
            out.boundary_edges.push_back({remap[key.first], remap[key.second], EdgeTag::outer});
        }
    }
    return out;
}

Mesh rhombus_half(const Mesh& rhombus_mesh) {
    double diagonal_x = 0.0;
    bool found = false;
    for (const auto& edge : rhombus_mesh.boundary_edges) {
        if (edge.tag == EdgeTag::diagonal) {
            diagonal_x = rhombus_mesh.nodes[edge.a].x;
            found = true;
            break;
        }
    }
    if (!found) {
        throw ParameterError("rhombus_half: mesh carries no diagonal-tagged edges");
    }
    return submesh(rhombus_mesh, [diagonal_x](Point2 c) { return c.x < diagonal_x; });
}

double signed_area(const Mesh& mesh, std::size_t element) {
    const auto& e = mesh.elements[element];
    const Point2 a = mesh.nodes[e[0]];
    const Point2 b = mesh.nodes[e[1]];
    const Point2 c = mesh.nodes[e[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double total_area(const Mesh& mesh) {
    double sum = 0.0;
    for (std::size_t i = 0; i < mesh.elements.size(); ++i) {
        sum += signed_area(mesh, i);
    }
    return sum;
}

std::size_t edge_count(const Mesh& mesh) { return count_edges(mesh).size(); }

double max_edge_length(const Mesh& mesh) {
    double h = 0.0;
    for (const auto& [key, count] : count_edges(mesh)) {
        const Point2 a = mesh.nodes[key.first];
        const Point2 b = mesh.nodes[key.second];
        h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
    }
    return h;
}

bool is_conforming(const Mesh& mesh) {
    const auto counts = count_edges(mesh);
    std::map<EdgeKey, int> outer;
    std::map<EdgeKey, int> tagged;
    for (const auto& edge : mesh.boundary_edges) {
        ++(edge.tag == EdgeTag::outer ? outer : tagged)[edge_key(edge.a, edge.b)];
    }
    for (const auto& [key, count] : counts) {
        if (count > 2) {
            return false;
        }
        if (count == 1 && !outer.contains(key) && !tagged.contains(key)) {
            return false;
        }
    }
    for (const auto& [key, count] : outer) {
        const auto it = counts.find(key);
        if (count != 1 || it == counts.end() || it->second != 1) {
            return false;
        }
    }
    for (const auto& [key, count] : tagged) {
        if (count != 1 || !counts.contains(key)) {
            return false;
        }
    }
    return true;
}

long euler_characteristic(const Mesh& mesh) {
    return static_cast<long>(mesh.nodes.size()) - static_cast<long>(edge_count(mesh)) +
           static_cast<long>(mesh.elements.size());
}

std::vector<int> tagged_nodes(const Mesh& mesh, EdgeTag tag) {
    std::vector<char> on(mesh.nodes.size(), 0);
    for (const auto& edge : mesh.boundary_edges) {
        if (edge.tag == tag) {
            on[edge.a] = 1;
            on[edge.b] = 1;
        }
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < on.size(); ++i) {
        if (on[i]) {
            out.push_back(static_cast<int>(i));
        }
    }
    return out;
}

void write_mesh(std::ostream& os, const Mesh& mesh, const std::vector<double>& nodal_values) {
    if (!nodal_values.empty() && nodal_values.size() != mesh.nodes.size()) {
        throw ParameterError("write_mesh: nodal value count does not match node count");
    }
    const auto old_precision = os.precision(17);
    os << "N " << mesh.nodes.size() << '\n';
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        os << mesh.nodes[i].x << ' ' << mesh.nodes[i].y;
        if (!nodal_values.empty()) {
            os << ' ' << nodal_values[i];
        }
        os << '\n';
    }
    os << "E " << mesh.elements.size() << '\n';
    for (const auto& e : mesh.elements) {
        os << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
    }
    os << "B " << mesh.boundary_edges.size() << '\n';
    for (const auto& edge : mesh.boundary_edges) {
        os << edge.a << ' ' << edge.b << ' ' << (edge.tag == EdgeTag::outer ? "outer" : "diagonal") << '\n';
    }
    os.precision(old_precision);
}

Mesh read_mesh(std::istream& is, std::vector<double>* nodal_values) {
    auto expect_header = [&](char tag) {
        char c = 0;
        std::size_t count = 0;
        if (!(is >> c >> count) || c != tag) {
            throw ParameterError(std::string("read_mesh: expected section '") + tag + "'");
        }
        std::string rest;
        std::getline(is, rest);
        return count;
    };

    Mesh mesh;
    const std::size_t n = expect_header('N');
    mesh.nodes.resize(n);
    if (nodal_values) {
        nodal_values->clear();
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::string line;
        std::getline(is, line);
        std::istringstream ls(line);
        double value = 0.0;
        if (!(ls >> mesh.nodes[i].x >> mesh.nodes[i].y)) {
            throw ParameterError("read_mesh: malformed node line");
        }
        if (ls >> value && nodal_values) {
            nodal_values->push_back(value);
        }
    }
    const std::size_t e = expect_header('E');
    mesh.elements.resize(e);
    for (auto& el : mesh.elements) {
        if (!(is >> el[0] >> el[1] >> el[2])) {
            throw ParameterError("read_mesh: malformed element line");
        }
    }
    const std::size_t b = expect_header('B');
    mesh.boundary_edges.resize(b);
    for (auto& edge : mesh.boundary_edges) {
        std::string tag;
        if (!(is >> edge.a >> edge.b >> tag) || (tag != "outer" && tag != "diagonal")) {
            throw ParameterError("read_mesh: malformed boundary edge line");
        }
        edge.tag = tag == "outer" ? EdgeTag::outer : EdgeTag::diagonal;
    }
    return mesh;
}

} // namespace spectral
