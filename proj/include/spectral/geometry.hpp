#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace spectral {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

enum class DomainKind { rhombus, rectangle, regular_polygon };

/// Symbolic planar domain with its exact geometric descriptors.
///
/// Rhombi have unit side and acute angle 2*pi/m, placed with the acute vertex
/// A at the origin and the long diagonal on the positive x-axis. Rectangles
/// occupy [0,a]x[0,b]. Regular polygons are centred at the origin with the
/// first vertex at angle pi/k, so k = 4 gives an axis-aligned square.
struct DomainSpec {
    DomainKind kind = DomainKind::rectangle;

    int m = 0;                 // rhombus
    double side_a = 0.0;       // rectangle, a >= b
    double side_b = 0.0;
    int vertex_count = 0;      // regular polygon
    double circumradius = 0.0;

    double area = 0.0;
    double width = 0.0;
    double diameter = 0.0;
    bool centrally_symmetric = false;
    bool convex = true;

    /// Acute angle of a rhombus, 2*pi/m.
    double rhombus_angle() const;

    /// Boundary vertices in counterclockwise order.
    std::vector<Point2> vertices() const;

    /// Short identifier such as "rhombus_m8" or "rectangle_2x1".
    std::string name() const;
};

DomainSpec make_rhombus(int m);
DomainSpec make_rectangle(double a, double b);
DomainSpec make_regular_polygon(int k, double circumradius);

enum class EdgeTag { outer, diagonal };

struct TaggedEdge {
    int a = 0;
    int b = 0;
    EdgeTag tag = EdgeTag::outer;
};

/// Conforming triangulation. Elements are counterclockwise node triples.
/// `boundary_edges` holds the outer boundary plus any interior edge chains
/// that carry a tag (the short diagonal of a rhombus).
struct Mesh {
    std::vector<Point2> nodes;
    std::vector<std::array<int, 3>> elements;
    std::vector<TaggedEdge> boundary_edges;
    int refinement_level = 0;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t element_count() const { return elements.size(); }
};

Mesh triangulate(const DomainSpec& spec, int level);

/// Uniform red refinement: every triangle is split into four congruent
/// children through its edge midpoints. Tags are inherited by both halves.
Mesh refine(const Mesh& mesh);

/// Triangle T_m = (A, B, D) of a rhombus mesh: the half left of the short
/// diagonal. The diagonal edges stay tagged and become boundary.
Mesh rhombus_half(const Mesh& rhombus_mesh);

/// Keeps the elements whose centroid satisfies `keep` and renumbers nodes.
Mesh submesh(const Mesh& mesh, const std::function<bool(Point2)>& keep);

double signed_area(const Mesh& mesh, std::size_t element);
double total_area(const Mesh& mesh);
std::size_t edge_count(const Mesh& mesh);
double max_edge_length(const Mesh& mesh);

/// Every undirected edge is shared by at most two elements, every outer-tagged
/// edge has exactly one owner, and every single-owner edge is listed in
/// `boundary_edges` (a tagged chain may be interior or boundary).
bool is_conforming(const Mesh& mesh);

/// nodes - edges + elements; 1 for a simply connected triangulation.
long euler_characteristic(const Mesh& mesh);

/// Node indices lying on at least one edge with the given tag.
std::vector<int> tagged_nodes(const Mesh& mesh, EdgeTag tag);

/// Plain-text export, 17 significant digits:
///   N <count> / x y [value] ... / E <count> / i j k ... / B <count> / i j tag ...
/// When `nodal_values` is non-empty it is written as a third node column.
void write_mesh(std::ostream& os, const Mesh& mesh, const std::vector<double>& nodal_values = {});
Mesh read_mesh(std::istream& is, std::vector<double>* nodal_values = nullptr);

} // namespace spectral
