#include "pum/general_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pum {

// ============================================================================
// Base
// ============================================================================

int GeneralMesh::edge_of(int i, int j) const {
    for (int e : cell_edges[i]) {
        if ((edges[e].a == i && edges[e].b == j) || (edges[e].a == j && edges[e].b == i))
            return e;
    }
    return -1;
}

void GeneralMesh::finalize() {
    const int nc = static_cast<int>(pi.size());
    nbr.assign(nc, {});
    cell_edges.assign(nc, {});
    edge_interior.assign(edges.size(), 0);
    for (size_t e = 0; e < edges.size(); ++e) {
        const int a = edges[e].a, b = edges[e].b;
        nbr[a].push_back(b);
        nbr[b].push_back(a);
        cell_edges[a].push_back(static_cast<int>(e));
        cell_edges[b].push_back(static_cast<int>(e));
        edge_interior[e] = interior[a] && interior[b];
    }

    // spatial index over support boxes
    Box all = support.empty() ? domain : support[0];
    for (const Box& s : support) {
        all.lo.x = std::min(all.lo.x, s.lo.x);
        all.lo.y = std::min(all.lo.y, s.lo.y);
        all.hi.x = std::max(all.hi.x, s.hi.x);
        all.hi.y = std::max(all.hi.y, s.hi.y);
    }
    grid_.box = all;
    const Vec2 sz = all.size();
    const double cell = std::max(dx, 1e-12);
    grid_.nx = std::max(1, static_cast<int>(std::ceil(sz.x / cell)));
    grid_.ny = std::max(1, static_cast<int>(std::ceil(sz.y / cell)));
    grid_.hx = sz.x / grid_.nx;
    grid_.hy = sz.y / grid_.ny;
    grid_.buckets.assign(static_cast<size_t>(grid_.nx) * grid_.ny, {});
    for (int i = 0; i < nc; ++i) {
        const Box& s = support[i];
        const int i0 = std::clamp(static_cast<int>((s.lo.x - all.lo.x) / grid_.hx), 0, grid_.nx - 1);
        const int i1 = std::clamp(static_cast<int>((s.hi.x - all.lo.x) / grid_.hx), 0, grid_.nx - 1);
        const int j0 = std::clamp(static_cast<int>((s.lo.y - all.lo.y) / grid_.hy), 0, grid_.ny - 1);
        const int j1 = std::clamp(static_cast<int>((s.hi.y - all.lo.y) / grid_.hy), 0, grid_.ny - 1);
        for (int jy = j0; jy <= j1; ++jy)
            for (int jx = i0; jx <= i1; ++jx)
                grid_.buckets[static_cast<size_t>(jy) * grid_.nx + jx].push_back(i);
    }
}

std::vector<int> GeneralMesh::cells_near(Vec2 x) const {
    std::vector<int> out;
    if (!grid_.box.contains(x)) return out;
    const int jx = std::clamp(static_cast<int>((x.x - grid_.box.lo.x) / grid_.hx), 0, grid_.nx - 1);
    const int jy = std::clamp(static_cast<int>((x.y - grid_.box.lo.y) / grid_.hy), 0, grid_.ny - 1);
    for (int i : grid_.buckets[static_cast<size_t>(jy) * grid_.nx + jx])
        if (support[i].contains(x)) out.push_back(i);
    return out;
}

std::vector<int> GeneralMesh::cells_overlapping(const Box& b) const {
    std::vector<int> out;
    if (!grid_.box.overlaps(b)) return out;
    const int i0 = std::clamp(static_cast<int>((b.lo.x - grid_.box.lo.x) / grid_.hx), 0, grid_.nx - 1);
    const int i1 = std::clamp(static_cast<int>((b.hi.x - grid_.box.lo.x) / grid_.hx), 0, grid_.nx - 1);
    const int j0 = std::clamp(static_cast<int>((b.lo.y - grid_.box.lo.y) / grid_.hy), 0, grid_.ny - 1);
    const int j1 = std::clamp(static_cast<int>((b.hi.y - grid_.box.lo.y) / grid_.hy), 0, grid_.ny - 1);
    std::vector<char> seen(pi.size(), 0);
    for (int jy = j0; jy <= j1; ++jy)
        for (int jx = i0; jx <= i1; ++jx)
            for (int i : grid_.buckets[static_cast<size_t>(jy) * grid_.nx + jx])
                if (!seen[i] && support[i].overlaps(b)) {
                    seen[i] = 1;
                    out.push_back(i);
                }
    return out;
}

// ============================================================================
// Mollified polygon mesh
// ============================================================================

double MollifiedMesh::chi(int i, Vec2 x) const {
    if (!support[i].contains(x)) return 0.0;
    return polygon_disc_area(cell_poly_[i], x, r_) * inv_ball_;
}

Vec2 MollifiedMesh::face_n(int e, Vec2 x) const {
    const PolygonFace& f = poly_.faces[e];
    return f.normal * (segment_disc_length(f.p, f.q, x, r_) * inv_ball_);
}

std::vector<QuadPoint> MollifiedMesh::cell_quad(int i, int level) const {
    // Fubini: ∫ f χ_i = (1/|B_r|) ∫_{B_r} ∫_{V_i} f(x+y) dx dy
    const auto& poly = cell_poly_[i];
    const Vec2 c = poly_.centroid[i];
    const auto ball = disc_rule({0, 0}, r_, 2 + level, 8 + 4 * level);
    std::vector<QuadPoint> out;
    for (size_t k = 0; k < poly.size(); ++k) {
        const auto tri = triangle_rule(c, poly[k], poly[(k + 1) % poly.size()], level);
        for (const auto& tp : tri)
            for (const auto& bp : ball)
                out.push_back({tp.x + bp.x, tp.w * bp.w * inv_ball_});
    }
    return out;
}

std::vector<FaceQuadPoint> MollifiedMesh::face_quad(int e, int level) const {
    const PolygonFace& f = poly_.faces[e];
    const Quad1D line = gauss_legendre(4 * (level + 1));
    const auto ball = disc_rule({0, 0}, r_, 2 + level, 8 + 4 * level);
    std::vector<FaceQuadPoint> out;
    out.reserve(line.nodes.size() * ball.size());
    for (size_t k = 0; k < line.nodes.size(); ++k) {
        const Vec2 s = f.p + (f.q - f.p) * line.nodes[k];
        const double wl = line.weights[k] * f.length;
        for (const auto& bp : ball)
            out.push_back({s + bp.x, f.normal * (wl * bp.w * inv_ball_)});
    }
    return out;
}

MollifiedMesh mollify_polygon_mesh(PolygonMesh poly, double r, double unity_margin) {
    if (r <= 0.0) throw std::invalid_argument("mollification radius must be positive");
    if (r > poly.dx * (1.0 + 1e-12))
        throw std::invalid_argument("mollification radius exceeds the mesh size");
    MollifiedMesh m;
    m.poly_ = std::move(poly);
    m.r_ = r;
    m.inv_ball_ = 1.0 / (M_PI * r * r);
    m.domain = m.poly_.domain;

    const int nc = static_cast<int>(m.poly_.cell_count());
    m.pi = m.poly_.volume;  // exact: mollification preserves mass
    m.barycenter = m.poly_.centroid;
    m.cell_poly_.resize(nc);
    m.support.resize(nc);
    m.interior.resize(nc);
    m.meets_domain.resize(nc);
    m.dx = 0.0;
    for (int i = 0; i < nc; ++i) {
        m.cell_poly_[i] = m.poly_.cell_polygon(i);
        m.support[i] = bounding_box(m.cell_poly_[i]).inflated(r);
        m.dx = std::max(m.dx, polygon_diameter(m.cell_poly_[i]) + 2 * r);
        bool inside = true;
        for (const Vec2& v : m.cell_poly_[i])
            if (!m.domain.contains_shrunk(v, r * (1.0 - 1e-12))) inside = false;
        m.interior[i] = inside;
        m.meets_domain[i] = polygon_box_distance(m.cell_poly_[i], m.domain) < r * (1.0 + 1e-12);
    }
    m.edges.reserve(m.poly_.faces.size());
    for (const PolygonFace& f : m.poly_.faces) m.edges.push_back({f.a, f.b});
    m.periodic_hint = m.poly_.periodic_hint;
    m.finalize();

    // partition-of-unity check on a sample grid (needs buffer cells)
    const Box reg = m.domain.inflated(unity_margin);
    const int ns = 40;
    for (int jy = 0; jy <= ns; ++jy)
        for (int jx = 0; jx <= ns; ++jx) {
            const Vec2 x{reg.lo.x + (jx + 0.382) / (ns + 1) * reg.size().x,
                         reg.lo.y + (jy + 0.718) / (ns + 1) * reg.size().y};
            double s = 0.0;
            for (int i : m.cells_near(x)) s += m.chi(i, x);
            if (std::abs(s - 1.0) > 1e-9)
                throw std::invalid_argument(
                    "partition of unity fails at (" + std::to_string(x.x) + ", " +
                    std::to_string(x.y) + "): sum = " + std::to_string(s) +
                    " (insufficient buffer cells?)");
        }
    return m;
}

// ============================================================================
// Triangulations
// ============================================================================

Triangulation triangulate_box(double h, Box domain) {
    const Vec2 sz = domain.size();
    const int nx = static_cast<int>(std::round(sz.x / h));
    const int ny = static_cast<int>(std::round(sz.y / h));
    if (std::abs(nx * h - sz.x) > 1e-12 || std::abs(ny * h - sz.y) > 1e-12)
        throw std::invalid_argument("triangulate_box: h does not divide the domain sides");
    Triangulation t;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            t.vertices.push_back({domain.lo.x + i * h, domain.lo.y + j * h});
    auto id = [&](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            t.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            t.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return t;
}

Triangulation triangulate_disc(Vec2 center, double radius, int refinements) {
    Triangulation t;
    t.vertices.push_back(center);
    for (int k = 0; k < 6; ++k) {
        const double th = M_PI / 3.0 * k;
        t.vertices.push_back(center + Vec2{radius * std::cos(th), radius * std::sin(th)});
    }
    for (int k = 0; k < 6; ++k) t.triangles.push_back({0, 1 + k, 1 + (k + 1) % 6});

    for (int pass = 0; pass < refinements; ++pass) {
        std::map<std::pair<int, int>, int> edge_use;
        for (const auto& tr : t.triangles)
            for (int k = 0; k < 3; ++k) {
                const int a = tr[k], b = tr[(k + 1) % 3];
                edge_use[{std::min(a, b), std::max(a, b)}]++;
            }
        std::map<std::pair<int, int>, int> midpoint;
        auto mid_id = [&](int a, int b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec2 mv = (t.vertices[a] + t.vertices[b]) * 0.5;
            if (edge_use[key] == 1) {  // boundary edge: project to the circle
                const Vec2 d = mv - center;
                mv = center + d * (radius / norm(d));
            }
            t.vertices.push_back(mv);
            const int id = static_cast<int>(t.vertices.size()) - 1;
            midpoint[key] = id;
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * t.triangles.size());
        for (const auto& tr : t.triangles) {
            const int m01 = mid_id(tr[0], tr[1]);
            const int m12 = mid_id(tr[1], tr[2]);
            const int m20 = mid_id(tr[2], tr[0]);
            next.push_back({tr[0], m01, m20});
            next.push_back({m01, tr[1], m12});
            next.push_back({m20, m12, tr[2]});
            next.push_back({m01, m12, m20});
        }
        t.triangles = std::move(next);
    }
    return t;
}

// ============================================================================
// Hat mesh
// ============================================================================

std::array<double, 3> HatMesh::bary(int t, Vec2 x) const {
    const Vec2 v0 = tri_.vertices[tri_.triangles[t][0]];
    std::array<double, 3> l;
    for (int k = 0; k < 3; ++k) l[k] = (k == 0 ? 1.0 : 0.0) + dot(grad_[t][k], x - v0);
    return l;
}

int HatMesh::locate(Vec2 x) const {
    if (!tgrid_.box.contains(x)) return -1;
    const int jx =
        std::clamp(static_cast<int>((x.x - tgrid_.box.lo.x) / tgrid_.hx), 0, tgrid_.nx - 1);
    const int jy =
        std::clamp(static_cast<int>((x.y - tgrid_.box.lo.y) / tgrid_.hy), 0, tgrid_.ny - 1);
    for (int t : tgrid_.buckets[static_cast<size_t>(jy) * tgrid_.nx + jx]) {
        const auto l = bary(t, x);
        if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12) return t;
    }
    return -1;
}

double HatMesh::chi(int i, Vec2 x) const {
    for (int t : star_[i]) {
        const auto l = bary(t, x);
        if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12)
            for (int k = 0; k < 3; ++k)
                if (tri_.triangles[t][k] == i) return std::max(l[k], 0.0);
    }
    return 0.0;
}

Vec2 HatMesh::face_n(int e, Vec2 x) const {
    const int a = edges[e].a, b = edges[e].b;
    for (int t : edge_tris_[e]) {
        const auto l = bary(t, x);
        if (l[0] < -1e-12 || l[1] < -1e-12 || l[2] < -1e-12) continue;
        int ka = -1, kb = -1;
        for (int k = 0; k < 3; ++k) {
            if (tri_.triangles[t][k] == a) ka = k;
            if (tri_.triangles[t][k] == b) kb = k;
        }
        // outward from a: χ_a∇χ_b − χ_b∇χ_a
        return grad_[t][kb] * l[ka] - grad_[t][ka] * l[kb];
    }
    return {0, 0};
}

std::vector<QuadPoint> HatMesh::cell_quad(int i, int level) const {
    std::vector<QuadPoint> out;
    for (int t : star_[i]) {
        int ki = -1;
        for (int k = 0; k < 3; ++k)
            if (tri_.triangles[t][k] == i) ki = k;
        const auto& v = tri_.triangles[t];
        for (const auto& qp :
             triangle_rule(tri_.vertices[v[0]], tri_.vertices[v[1]], tri_.vertices[v[2]], level)) {
            const auto l = bary(t, qp.x);
            out.push_back({qp.x, qp.w * l[ki]});
        }
    }
    return out;
}

std::vector<FaceQuadPoint> HatMesh::face_quad(int e, int level) const {
    const int a = edges[e].a, b = edges[e].b;
    std::vector<FaceQuadPoint> out;
    for (int t : edge_tris_[e]) {
        int ka = -1, kb = -1;
        for (int k = 0; k < 3; ++k) {
            if (tri_.triangles[t][k] == a) ka = k;
            if (tri_.triangles[t][k] == b) kb = k;
        }
        const auto& v = tri_.triangles[t];
        for (const auto& qp :
             triangle_rule(tri_.vertices[v[0]], tri_.vertices[v[1]], tri_.vertices[v[2]], level)) {
            const auto l = bary(t, qp.x);
            const Vec2 n = grad_[t][kb] * l[ka] - grad_[t][ka] * l[kb];
            out.push_back({qp.x, n * qp.w});
        }
    }
    return out;
}

HatMesh hat_mesh_from_triangulation(Triangulation tri, Box domain) {
    HatMesh m;
    m.tri_ = std::move(tri);
    m.domain = domain;
    auto& T = m.tri_;
    const int nv = static_cast<int>(T.vertices.size());
    const int nt = static_cast<int>(T.triangles.size());

    m.area_.resize(nt);
    m.grad_.resize(nt);
    m.star_.assign(nv, {});
    for (int t = 0; t < nt; ++t) {
        auto& v = T.triangles[t];
        double a2 = cross(T.vertices[v[1]] - T.vertices[v[0]], T.vertices[v[2]] - T.vertices[v[0]]);
        if (a2 < 0.0) {  // normalize to CCW
            std::swap(v[1], v[2]);
            a2 = -a2;
        }
        if (a2 <= 0.0)
            throw std::invalid_argument("degenerate triangle " + std::to_string(t));
        m.area_[t] = 0.5 * a2;
        for (int k = 0; k < 3; ++k) {
            const Vec2 e = T.vertices[v[(k + 2) % 3]] - T.vertices[v[(k + 1) % 3]];
            m.grad_[t][k] = Vec2{-e.y, e.x} / a2;
            m.star_[v[k]].push_back(t);
        }
    }

    // conformity + edge extraction + boundary detection
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
    for (int t = 0; t < nt; ++t) {
        const auto& v = T.triangles[t];
        for (int k = 0; k < 3; ++k)
            edge_tris[{std::min(v[k], v[(k + 1) % 3]), std::max(v[k], v[(k + 1) % 3])}].push_back(t);
    }
    m.boundary_vertex_.assign(nv, 0);
    for (const auto& [key, ts] : edge_tris) {
        if (ts.size() > 2)
            throw std::invalid_argument("non-conforming triangulation: edge (" +
                                        std::to_string(key.first) + "," +
                                        std::to_string(key.second) + ") in >2 triangles");
        if (ts.size() == 1) {
            m.boundary_vertex_[key.first] = 1;
            m.boundary_vertex_[key.second] = 1;
        }
        m.edges.push_back({key.first, key.second});
        m.edge_tris_.push_back(ts);
    }

    m.pi.assign(nv, 0.0);
    m.barycenter.assign(nv, Vec2{0, 0});
    m.support.resize(nv);
    m.dx = 0.0;
    for (int i = 0; i < nv; ++i) {
        std::vector<Vec2> pts;
        for (int t : m.star_[i]) {
            const auto& v = T.triangles[t];
            m.pi[i] += m.area_[t] / 3.0;
            m.barycenter[i] += (T.vertices[i] * 2.0 + T.vertices[v[0]] + T.vertices[v[1]] +
                                T.vertices[v[2]] - T.vertices[i]) *
                               (m.area_[t] / 12.0);
            for (int k = 0; k < 3; ++k) pts.push_back(T.vertices[v[k]]);
        }
        if (pts.empty())
            throw std::invalid_argument("vertex " + std::to_string(i) + " in no triangle");
        m.barycenter[i] = m.barycenter[i] / m.pi[i];
        m.support[i] = bounding_box(pts);
        m.dx = std::max(m.dx, m.support[i].diameter());
    }

    m.interior.assign(nv, 0);
    m.meets_domain.assign(nv, 0);
    for (int i = 0; i < nv; ++i) {
        bool ok = !m.boundary_vertex_[i];
        for (int t : m.star_[i])
            for (int k = 0; k < 3; ++k)
                if (m.boundary_vertex_[T.triangles[t][k]]) ok = false;
        m.interior[i] = ok;
        m.meets_domain[i] = m.support[i].overlaps(domain);
    }
    m.finalize();

    // triangle spatial index for locate()
    std::vector<Vec2> allv = T.vertices;
    m.tgrid_.box = bounding_box(allv);
    const Vec2 sz = m.tgrid_.box.size();
    const double cell = std::max(m.dx / 2.0, 1e-12);
    m.tgrid_.nx = std::max(1, static_cast<int>(std::ceil(sz.x / cell)));
    m.tgrid_.ny = std::max(1, static_cast<int>(std::ceil(sz.y / cell)));
    m.tgrid_.hx = sz.x / m.tgrid_.nx;
    m.tgrid_.hy = sz.y / m.tgrid_.ny;
    m.tgrid_.buckets.assign(static_cast<size_t>(m.tgrid_.nx) * m.tgrid_.ny, {});
    for (int t = 0; t < nt; ++t) {
        const auto& v = T.triangles[t];
        const Box tb = bounding_box({T.vertices[v[0]], T.vertices[v[1]], T.vertices[v[2]]});
        const auto& g = m.tgrid_;
        const int i0 = std::clamp(static_cast<int>((tb.lo.x - g.box.lo.x) / g.hx), 0, g.nx - 1);
        const int i1 = std::clamp(static_cast<int>((tb.hi.x - g.box.lo.x) / g.hx), 0, g.nx - 1);
        const int j0 = std::clamp(static_cast<int>((tb.lo.y - g.box.lo.y) / g.hy), 0, g.ny - 1);
        const int j1 = std::clamp(static_cast<int>((tb.hi.y - g.box.lo.y) / g.hy), 0, g.ny - 1);
        for (int jy = j0; jy <= j1; ++jy)
            for (int jx = i0; jx <= i1; ++jx)
                m.tgrid_.buckets[static_cast<size_t>(jy) * g.nx + jx].push_back(t);
    }
    return m;
}

}  // namespace pum
