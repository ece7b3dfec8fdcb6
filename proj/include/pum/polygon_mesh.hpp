#pragma once

// Polygon meshes: conforming tilings of convex cells with shared faces and
// antisymmetric unit normals, plus the built-in generators (cartesian rows,
// the alternating coarse/fine-row mesh, hexagonal tiling).

#include <optional>
#include <string>
#include <vector>

#include "pum/geom.hpp"

namespace pum {

struct PolygonFace {
    int a = -1, b = -1;  // adjacent cells; b == -1 on the tiling boundary
    Vec2 p, q;           // endpoints
    Vec2 normal;         // unit, outward from cell a (so N_{a->b}); N_{b->a} = -normal
    double length = 0.0;
};

// Hint for declare_periodic: lattice vectors plus, per cell, the lattice shift
// m and the pattern slot. Filled in by the generators, validated later.
struct PeriodicHint {
    std::array<Vec2, 2> lattice;
    std::vector<std::array<int, 3>> sigma;  // cell -> (m1, m2, slot)
    int pattern_size = 0;
};

struct PolygonMesh {
    Box domain;                           // Ω; cells may extend beyond it (halo)
    std::vector<Vec2> vertices;
    std::vector<std::vector<int>> cells;  // CCW vertex index loops
    std::vector<PolygonFace> faces;       // interior faces only
    std::vector<double> volume;
    std::vector<Vec2> centroid;
    double dx = 0.0;                      // max cell diameter

    std::optional<PeriodicHint> periodic_hint;

    size_t cell_count() const { return cells.size(); }
    std::vector<Vec2> cell_polygon(int i) const;
};

// Build and validate a conforming mesh. Throws std::invalid_argument naming the
// offending cells on non-conforming adjacency or degenerate cells.
PolygonMesh build_polygon_mesh(std::vector<Vec2> vertices,
                               std::vector<std::vector<int>> cell_vertex_lists,
                               Box domain);

// Uniform nx × ny grid covering domain inflated by `margin_cells` cells.
PolygonMesh build_cartesian_mesh(double h, Box domain, int margin_cells = 0);

// Rows of height h alternate horizontal size h (even rows) and h/2 (odd rows).
// h must divide both side lengths of the domain. Hanging nodes are included in
// the coarse cells so adjacency stays conforming.
PolygonMesh build_alternating_mesh(double h, Box domain, int margin_cells = 0);

// Regular hexagons with circumradius s tiling the inflated domain.
PolygonMesh build_hexagonal_mesh(double s, Box domain, int margin_cells = 0);

}  // namespace pum
