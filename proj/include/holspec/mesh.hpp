#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "holspec/domain.hpp"

namespace holspec {

// Conforming P1 triangulation of a subgraph polygon (plus base box).
// Vertices are grouped by vertical line; every triangle connects two adjacent
// lines, so assembled matrices are block tridiagonal in the line blocks.
struct Mesh {
    std::vector<Point> vertices;
    std::vector<std::array<std::int32_t, 3>> triangles;  // positively oriented
    std::vector<std::uint8_t> on_boundary;               // per vertex
    std::vector<std::int32_t> line_offsets;              // size n_lines + 1
    std::vector<double> line_x;
    double target_h = 0.0;

    std::int64_t n_vertices() const { return std::int64_t(vertices.size()); }
    std::int64_t n_lines() const { return std::int64_t(line_x.size()); }
    double area() const;
    double triangle_area(std::size_t t) const;
};

struct MeshOptions {
    double target_h = 0.0625;
    // vertical grading exponent toward the graph: node heights follow
    // 1 - (1 - j/n)^grade, so grade = 1 is uniform
    double grade = 1.0;
    // spacing used inside the base box (coarser than the chart is fine);
    // 0 means 4 * target_h
    double base_h = 0.0;
    // memory guard
    std::int64_t max_vertices = 2'500'000;
};

Mesh triangulate(const HolderSubgraphDomain& dom, const MeshOptions& opt);
inline Mesh triangulate(const HolderSubgraphDomain& dom, double target_h) {
    MeshOptions o;
    o.target_h = target_h;
    return triangulate(dom, o);
}

// elements of m fully contained in the closed box become a standalone mesh;
// requires the mesh to be aligned with the box faces (no straddling element)
struct SubmeshBox {
    double x_lo, x_hi, y_lo, y_hi;
};
Mesh submesh(const Mesh& m, const SubmeshBox& box);

std::string mesh_csv(const Mesh& m);

}  // namespace holspec
