#include "pum/polygon_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace pum {

std::vector<Vec2> PolygonMesh::cell_polygon(int i) const {
    std::vector<Vec2> poly;
    poly.reserve(cells[i].size());
    for (int v : cells[i]) poly.push_back(vertices[v]);
    return poly;
}

namespace {

// floor division for possibly-negative lattice indices
int floordiv(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }

}  // namespace

PolygonMesh build_polygon_mesh(std::vector<Vec2> vertices,
                               std::vector<std::vector<int>> cell_vertex_lists, Box domain) {
    PolygonMesh m;
    m.domain = domain;
    m.vertices = std::move(vertices);
    m.cells = std::move(cell_vertex_lists);

    const int nc = static_cast<int>(m.cells.size());
    m.volume.resize(nc);
    m.centroid.resize(nc);
    m.dx = 0.0;

    for (int i = 0; i < nc; ++i) {
        auto poly = m.cell_polygon(i);
        if (poly.size() < 3)
            throw std::invalid_argument("cell " + std::to_string(i) + ": fewer than 3 vertices");
        double a = polygon_area(poly);
        if (a < 0.0) {  // normalize to CCW
            std::reverse(m.cells[i].begin(), m.cells[i].end());
            poly = m.cell_polygon(i);
            a = -a;
        }
        const double scale = polygon_diameter(poly);
        if (a <= 1e-14 * scale * scale + 1e-300)
            throw std::invalid_argument("cell " + std::to_string(i) + ": degenerate (zero area)");
        // convexity (collinear vertices allowed)
        const size_t n = poly.size();
        for (size_t k = 0; k < n; ++k) {
            const Vec2 d1 = poly[(k + 1) % n] - poly[k];
            const Vec2 d2 = poly[(k + 2) % n] - poly[(k + 1) % n];
            if (cross(d1, d2) < -1e-12 * scale * scale)
                throw std::invalid_argument("cell " + std::to_string(i) + ": not convex");
        }
        m.volume[i] = a;
        m.centroid[i] = polygon_centroid(poly);
        m.dx = std::max(m.dx, scale);
    }

    // Face extraction by shared vertex pairs. A conforming mesh presents every
    // interior face exactly twice, with opposite traversal order.
    struct HalfEdge {
        int cell;
        int va, vb;  // as traversed (CCW) by the cell
    };
    std::map<std::pair<int, int>, std::vector<HalfEdge>> edge_map;
    for (int i = 0; i < nc; ++i) {
        const auto& cv = m.cells[i];
        const size_t n = cv.size();
        for (size_t k = 0; k < n; ++k) {
            const int va = cv[k], vb = cv[(k + 1) % n];
            edge_map[{std::min(va, vb), std::max(va, vb)}].push_back({i, va, vb});
        }
    }
    std::vector<std::pair<int, int>> boundary_halfedges;  // (cell, first vertex)
    for (const auto& [key, hes] : edge_map) {
        if (hes.size() > 2)
            throw std::invalid_argument(
                "non-conforming adjacency: edge shared by more than two cells, first pair " +
                std::to_string(hes[0].cell) + "," + std::to_string(hes[1].cell));
        if (hes.size() == 2) {
            const HalfEdge& h0 = hes[0];
            const HalfEdge& h1 = hes[1];
            if (h0.va != h1.vb || h0.vb != h1.va)
                throw std::invalid_argument("non-conforming adjacency between cells " +
                                            std::to_string(h0.cell) + " and " +
                                            std::to_string(h1.cell));
            PolygonFace f;
            f.a = h0.cell;
            f.b = h1.cell;
            f.p = m.vertices[h0.va];
            f.q = m.vertices[h0.vb];
            const Vec2 d = f.q - f.p;
            f.length = norm(d);
            f.normal = Vec2{d.y, -d.x} / f.length;  // outward from the CCW cell a
            m.faces.push_back(f);
        } else {
            boundary_halfedges.emplace_back(hes[0].cell, hes[0].va);
        }
    }

    // Partial face overlaps never share both endpoints, so both sides surface
    // as unmatched half-edges; two of those overlapping collinearly with
    // positive length is the non-conforming signature.
    struct Seg {
        int cell;
        Vec2 p, q;
    };
    std::vector<Seg> open;
    open.reserve(boundary_halfedges.size());
    for (const auto& [ci, va] : boundary_halfedges) {
        const auto& cv = m.cells[ci];
        const size_t n = cv.size();
        for (size_t k = 0; k < n; ++k)
            if (cv[k] == va)
                open.push_back({ci, m.vertices[va], m.vertices[cv[(k + 1) % n]]});
    }
    const double tol = 1e-9 * m.dx;
    for (size_t i = 0; i < open.size(); ++i)
        for (size_t j = i + 1; j < open.size(); ++j) {
            if (open[i].cell == open[j].cell) continue;
            const Vec2 d = open[i].q - open[i].p;
            const double len = norm(d);
            if (std::abs(cross(d, open[j].p - open[i].p)) > tol * len ||
                std::abs(cross(d, open[j].q - open[i].p)) > tol * len)
                continue;  // not collinear
            const double t0 = dot(open[j].p - open[i].p, d) / (len * len);
            const double t1 = dot(open[j].q - open[i].p, d) / (len * len);
            const double lo = std::max(std::min(t0, t1), 0.0);
            const double hi = std::min(std::max(t0, t1), 1.0);
            if (hi - lo > 1e-9)
                throw std::invalid_argument("non-conforming adjacency (partial face overlap) "
                                            "between cells " +
                                            std::to_string(open[i].cell) + " and " +
                                            std::to_string(open[j].cell));
        }
    return m;
}

PolygonMesh build_cartesian_mesh(double h, Box domain, int margin_cells) {
    const Vec2 sz = domain.size();
    const int nx = static_cast<int>(std::round(sz.x / h));
    const int ny = static_cast<int>(std::round(sz.y / h));
    if (std::abs(nx * h - sz.x) > 1e-12 || std::abs(ny * h - sz.y) > 1e-12)
        throw std::invalid_argument("cartesian mesh: h does not divide the domain sides");
    const int m = margin_cells;

    std::vector<Vec2> verts;
    std::unordered_map<long long, int> vid;
    auto vertex = [&](int i, int j) {
        const long long key = (static_cast<long long>(i + (1 << 20)) << 24) + (j + (1 << 20));
        auto it = vid.find(key);
        if (it != vid.end()) return it->second;
        verts.push_back({domain.lo.x + i * h, domain.lo.y + j * h});
        vid[key] = static_cast<int>(verts.size()) - 1;
        return static_cast<int>(verts.size()) - 1;
    };

    std::vector<std::vector<int>> cells;
    PeriodicHint hint;
    hint.lattice = {Vec2{h, 0}, Vec2{0, h}};
    hint.pattern_size = 1;
    const int ic = nx / 2, jc = ny / 2;  // base instance near the domain center
    for (int j = -m; j < ny + m; ++j)
        for (int i = -m; i < nx + m; ++i) {
            cells.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1), vertex(i, j + 1)});
            hint.sigma.push_back({i - ic, j - jc, 0});
        }
    PolygonMesh mesh = build_polygon_mesh(std::move(verts), std::move(cells), domain);
    mesh.periodic_hint = std::move(hint);
    return mesh;
}

PolygonMesh build_alternating_mesh(double h, Box domain, int margin_cells) {
    const Vec2 sz = domain.size();
    const int nx = static_cast<int>(std::round(sz.x / h));
    const int ny = static_cast<int>(std::round(sz.y / h));
    if (std::abs(nx * h - sz.x) > 1e-12 || std::abs(ny * h - sz.y) > 1e-12)
        throw std::invalid_argument("alternating mesh: h does not divide the domain sides");
    const int m = margin_cells;

    // Global vertex lattice: x on multiples of h/2, y on multiples of h.
    std::vector<Vec2> verts;
    std::unordered_map<long long, int> vid;
    auto vertex = [&](int ix, int iy) {  // x = lo.x + ix*h/2, y = lo.y + iy*h
        const long long key = (static_cast<long long>(ix + (1 << 20)) << 24) + (iy + (1 << 20));
        auto it = vid.find(key);
        if (it != vid.end()) return it->second;
        verts.push_back({domain.lo.x + ix * (h / 2), domain.lo.y + iy * h});
        vid[key] = static_cast<int>(verts.size()) - 1;
        return static_cast<int>(verts.size()) - 1;
    };

    std::vector<std::vector<int>> cells;
    PeriodicHint hint;
    hint.lattice = {Vec2{h, 0}, Vec2{0, 2 * h}};
    hint.pattern_size = 3;  // one coarse + two fine cells
    int jc = nx / 2;
    int kc = ny / 2;
    kc -= ((kc % 2) + 2) % 2;  // base coarse row: even k near the center
    const int nrows = 2 * ((ny + 1) / 2);  // whole coarse/fine pairs, last may overshoot Ω
    for (int k = -2 * m; k < nrows + 2 * m; ++k) {
        const bool coarse = (((k % 2) + 2) % 2) == 0;
        if (coarse) {
            for (int j = -m; j < nx + m; ++j) {
                // hanging mid-edge vertices included top and bottom
                cells.push_back({vertex(2 * j, k), vertex(2 * j + 1, k), vertex(2 * j + 2, k),
                                 vertex(2 * j + 2, k + 1), vertex(2 * j + 1, k + 1),
                                 vertex(2 * j, k + 1)});
                hint.sigma.push_back({j - jc, floordiv(k - kc, 2), 0});
            }
        } else {
            for (int j2 = -2 * m; j2 < 2 * nx + 2 * m; ++j2) {
                cells.push_back({vertex(j2, k), vertex(j2 + 1, k), vertex(j2 + 1, k + 1),
                                 vertex(j2, k + 1)});
                const int mj = floordiv(j2, 2);
                hint.sigma.push_back({mj - jc, floordiv(k - 1 - kc, 2), 1 + (j2 - 2 * mj)});
            }
        }
    }
    PolygonMesh mesh = build_polygon_mesh(std::move(verts), std::move(cells), domain);
    mesh.periodic_hint = std::move(hint);
    return mesh;
}

PolygonMesh build_hexagonal_mesh(double s, Box domain, int margin_cells) {
    // Hexagons with circumradius s, vertices at angles 0°,60°,…; neighbor
    // centers at distance √3·s. Vertices are deduplicated by quantized lookup.
    const Vec2 L1{1.5 * s, std::sqrt(3.0) / 2.0 * s};
    const Vec2 L2{1.5 * s, -std::sqrt(3.0) / 2.0 * s};
    const double margin = margin_cells * std::sqrt(3.0) * s;
    const Box region = domain.inflated(margin + s);

    std::vector<Vec2> verts;
    std::unordered_map<long long, int> vid;
    const double q = 1e-4 * s;
    auto vertex = [&](Vec2 p) {
        const long long kx = std::llround(p.x / q), ky = std::llround(p.y / q);
        for (long long ax = kx - 1; ax <= kx + 1; ++ax)
            for (long long ay = ky - 1; ay <= ky + 1; ++ay) {
                auto it = vid.find((ax << 28) ^ (ay & ((1LL << 28) - 1)));
                if (it != vid.end() && dist(verts[it->second], p) < 10 * q) return it->second;
            }
        verts.push_back(p);
        vid[(kx << 28) ^ (ky & ((1LL << 28) - 1))] = static_cast<int>(verts.size()) - 1;
        return static_cast<int>(verts.size()) - 1;
    };

    // lattice index ranges covering the region
    const Vec2 c0 = (domain.lo + domain.hi) * 0.5;
    const int span1 = static_cast<int>(std::ceil((region.diameter()) / (1.5 * s))) + 2;
    std::vector<std::vector<int>> cells;
    PeriodicHint hint;
    hint.lattice = {L1, L2};
    hint.pattern_size = 1;
    for (int m1 = -span1; m1 <= span1; ++m1)
        for (int m2 = -span1; m2 <= span1; ++m2) {
            const Vec2 c = c0 + L1 * m1 + L2 * m2;
            if (!region.contains(c)) continue;
            std::vector<int> cv;
            for (int k = 0; k < 6; ++k) {
                const double th = M_PI / 3.0 * k;
                cv.push_back(vertex(c + Vec2{s * std::cos(th), s * std::sin(th)}));
            }
            cells.push_back(std::move(cv));
            hint.sigma.push_back({m1, m2, 0});
        }
    PolygonMesh mesh = build_polygon_mesh(std::move(verts), std::move(cells), domain);
    mesh.periodic_hint = std::move(hint);
    return mesh;
}

}  // namespace pum
