#pragma once

// Generalized meshes: cells are overlapping partition-of-unity functions χ_i,
// adjacency carries evaluable face functions n with exact antisymmetry.
// Two concrete constructions: ball-mollified polygon meshes and P1 hat bases
// on conforming triangulations.

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "pum/polygon_mesh.hpp"

namespace pum {

struct FaceQuadPoint {
    Vec2 x;
    Vec2 nw;  // face-function value times the (positive) quadrature weight
};

// ============================================================================
// Base interface
// ============================================================================

class GeneralMesh {
  public:
    virtual ~GeneralMesh() = default;

    Box domain;                       // Ω
    double dx = 0.0;                  // max support diameter
    std::vector<double> pi;           // π_i = ∫χ_i
    std::vector<Vec2> barycenter;     // x_i = (1/π_i)∫ x χ_i
    std::vector<Box> support;         // bounding box of supp χ_i

    struct Edge {
        int a = -1, b = -1;
    };
    std::vector<Edge> edges;           // unordered pairs with nonzero face function
    std::vector<char> interior;        // cell in V_Ω° (supp χ_i ⊆ Ω)
    std::vector<char> meets_domain;    // cell in V_Ω (supp χ_i ∩ Ω ≠ ∅)
    std::vector<char> edge_interior;   // both endpoint cells interior

    std::vector<std::vector<int>> nbr;         // neighbor cells per cell
    std::vector<std::vector<int>> cell_edges;  // incident edge ids per cell

    std::optional<PeriodicHint> periodic_hint;

    size_t cell_count() const { return pi.size(); }
    int edge_of(int i, int j) const;  // -1 when (i,j) is not an edge

    virtual double chi(int i, Vec2 x) const = 0;
    // n on edge e = (a,b), oriented outward from a (value for the b<-a
    // direction); the reverse direction is the exact negation.
    virtual Vec2 face_n(int e, Vec2 x) const = 0;

    // Quadrature: Σ w·f(x) over cell_quad(i) ≈ ∫ f χ_i; for face_quad,
    // Σ (v(x)·nw)⁺ ≈ ∫ (v·n)⁺ with n oriented as in face_n. `level ≥ 0`
    // refines the rule.
    virtual std::vector<QuadPoint> cell_quad(int i, int level) const = 0;
    virtual std::vector<FaceQuadPoint> face_quad(int e, int level) const = 0;

    // Cells whose support box contains x (spatial-index lookup).
    std::vector<int> cells_near(Vec2 x) const;
    std::vector<int> cells_overlapping(const Box& b) const;

  protected:
    void finalize();  // adjacency, interior flags via `support`, spatial index

    struct Grid {
        Box box;
        int nx = 0, ny = 0;
        double hx = 0, hy = 0;
        std::vector<std::vector<int>> buckets;
    } grid_;
};

// ============================================================================
// Mollified polygon mesh
// ============================================================================

class MollifiedMesh : public GeneralMesh {
  public:
    const PolygonMesh& polygon() const { return poly_; }
    double radius() const { return r_; }

    double chi(int i, Vec2 x) const override;
    Vec2 face_n(int e, Vec2 x) const override;
    std::vector<QuadPoint> cell_quad(int i, int level) const override;
    std::vector<FaceQuadPoint> face_quad(int e, int level) const override;

    // ∫ w over edge e equals the polygon face length exactly.
    double face_measure(int e) const { return poly_.faces[e].length; }
    Vec2 face_normal(int e) const { return poly_.faces[e].normal; }

  private:
    friend MollifiedMesh mollify_polygon_mesh(PolygonMesh poly, double r, double unity_margin);
    PolygonMesh poly_;
    double r_ = 0.0;
    double inv_ball_ = 0.0;  // 1/(πr²)
    std::vector<std::vector<Vec2>> cell_poly_;
};

// χ_i = |V_i ∩ B(x,r)| / (πr²), n = N_{i,j}·(mollified face measure).
// Validates Σχ = 1 on a sample grid over Ω inflated by `unity_margin`; fails
// when the supplied mesh lacks buffer cells for that region.
MollifiedMesh mollify_polygon_mesh(PolygonMesh poly, double r, double unity_margin = 0.0);

// ============================================================================
// Hat-function mesh on a triangulation
// ============================================================================

struct Triangulation {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW
};

// Structured triangulation of a box: squares of side h split along a diagonal.
Triangulation triangulate_box(double h, Box domain);
// Triangulated disc: hexagon fan refined `refinements` times, boundary
// vertices projected to the circle.
Triangulation triangulate_disc(Vec2 center, double radius, int refinements);

class HatMesh : public GeneralMesh {
  public:
    const Triangulation& triangulation() const { return tri_; }

    double chi(int i, Vec2 x) const override;
    Vec2 face_n(int e, Vec2 x) const override;
    std::vector<QuadPoint> cell_quad(int i, int level) const override;
    std::vector<FaceQuadPoint> face_quad(int e, int level) const override;

    int locate(Vec2 x) const;  // containing triangle, -1 outside
    Vec2 hat_grad(int t, int local) const { return grad_[t][local]; }
    double tri_area(int t) const { return area_[t]; }
    const std::vector<std::vector<int>>& vertex_stars() const { return star_; }
    const std::vector<char>& boundary_vertex() const { return boundary_vertex_; }
    // triangles shared by the two cells of edge e (the edge star)
    const std::vector<int>& edge_tris(int e) const { return edge_tris_[e]; }

  private:
    friend HatMesh hat_mesh_from_triangulation(Triangulation tri, Box domain);
    Triangulation tri_;
    std::vector<std::vector<int>> star_;            // triangles per vertex
    std::vector<std::array<Vec2, 3>> grad_;         // ∇λ per triangle corner
    std::vector<double> area_;
    std::vector<char> boundary_vertex_;
    std::vector<std::vector<int>> edge_tris_;

    struct TriGrid {
        Box box;
        int nx = 0, ny = 0;
        double hx = 0, hy = 0;
        std::vector<std::vector<int>> buckets;
    } tgrid_;

    std::array<double, 3> bary(int t, Vec2 x) const;
};

// χ_i = P1 hat at vertex i; n_{i,j} = χ_j∇χ_i − χ_i∇χ_j (antisymmetric, and
// Σ_j n_{j,i} = −∇χ_i wherever the hats sum to one). A vertex is interior
// when neither it nor any neighbor lies on the triangulation boundary.
HatMesh hat_mesh_from_triangulation(Triangulation tri, Box domain);

}  // namespace pum
