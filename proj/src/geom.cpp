#include "pum/geom.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace pum {

Box bounding_box(const std::vector<Vec2>& pts) {
    Box b{pts.front(), pts.front()};
    for (const Vec2& p : pts) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    }
    return b;
}

double polygon_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * s;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
    // Standard signed decomposition into origin-based triangles.
    double a = 0.0;
    Vec2 c{0, 0};
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % n];
        const double w = cross(p, q);
        a += w;
        c += (p + q) * w;
    }
    return c / (3.0 * a);
}

double polygon_diameter(const std::vector<Vec2>& poly) {
    double d2 = 0.0;
    for (size_t i = 0; i < poly.size(); ++i)
        for (size_t j = i + 1; j < poly.size(); ++j)
            d2 = std::max(d2, norm2(poly[i] - poly[j]));
    return std::sqrt(d2);
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 n, double c) {
    std::vector<Vec2> out;
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % m];
        const double fp = dot(n, p) + c, fq = dot(n, q) + c;
        if (fp >= 0.0) out.push_back(p);
        if ((fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0)) {
            const double t = fp / (fp - fq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

namespace {

// Signed area of disc(0, r) ∩ triangle(0, p, q), positive when cross(p, q) > 0.
double disc_tri_area(Vec2 p, Vec2 q, double r) {
    const double r2 = r * r;
    // Split [p, q] at its intersections with the circle.
    std::array<Vec2, 4> pts;
    int npts = 0;
    pts[npts++] = p;
    const Vec2 d = q - p;
    const double A = norm2(d), B = dot(p, d), C = norm2(p) - r2;
    const double disc = B * B - A * C;
    if (disc > 0.0 && A > 0.0) {
        const double sq = std::sqrt(disc);
        double t1 = (-B - sq) / A, t2 = (-B + sq) / A;
        if (t1 > 0.0 && t1 < 1.0) pts[npts++] = p + d * t1;
        if (t2 > 0.0 && t2 < 1.0) pts[npts++] = p + d * t2;
    }
    pts[npts++] = q;
    double area = 0.0;
    for (int i = 0; i + 1 < npts; ++i) {
        const Vec2 a = pts[i], b = pts[i + 1];
        const Vec2 mid = (a + b) * 0.5;
        if (norm2(mid) <= r2)
            area += 0.5 * cross(a, b);                            // triangle piece
        else
            area += 0.5 * r2 * std::atan2(cross(a, b), dot(a, b));  // sector piece
    }
    return area;
}

}  // namespace

double polygon_disc_area(const std::vector<Vec2>& poly, Vec2 center, double r) {
    double area = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i)
        area += disc_tri_area(poly[i] - center, poly[(i + 1) % n] - center, r);
    return area;
}

double segment_disc_length(Vec2 p, Vec2 q, Vec2 center, double r) {
    const Vec2 a = p - center, d = q - p;
    const double A = norm2(d);
    if (A == 0.0) return 0.0;
    const double B = dot(a, d), C = norm2(a) - r * r;
    const double disc = B * B - A * C;
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    const double t1 = std::max((-B - sq) / A, 0.0);
    const double t2 = std::min((-B + sq) / A, 1.0);
    return t2 > t1 ? (t2 - t1) * std::sqrt(A) : 0.0;
}

double point_segment_dist2(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double l2 = norm2(d);
    double t = l2 > 0.0 ? dot(p - a, d) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm2(p - (a + d * t));
}

double polygon_box_distance(const std::vector<Vec2>& poly, const Box& box) {
    // Overlap test first: any polygon vertex in the box, any box corner in the
    // polygon (convex, either orientation), or any pair of edges crossing.
    for (const Vec2& v : poly)
        if (box.contains(v)) return 0.0;
    const std::vector<Vec2> bp = {box.lo, {box.hi.x, box.lo.y}, box.hi, {box.lo.x, box.hi.y}};
    const double a = polygon_area(poly);
    for (const Vec2& c : bp) {
        bool inside = true;
        for (size_t i = 0; i < poly.size() && inside; ++i) {
            const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
            if (cross(q - p, c - p) * a < 0.0) inside = false;
        }
        if (inside) return 0.0;
    }
    double best = std::numeric_limits<double>::max();
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % poly.size()];
        for (size_t j = 0; j < 4; ++j) {
            const Vec2 u = bp[j], v = bp[(j + 1) % 4];
            const double d1 = cross(q - p, u - p), d2 = cross(q - p, v - p);
            const double d3 = cross(v - u, p - u), d4 = cross(v - u, q - u);
            if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
            best = std::min({best, point_segment_dist2(p, u, v), point_segment_dist2(q, u, v),
                             point_segment_dist2(u, p, q), point_segment_dist2(v, p, q)});
        }
    }
    return std::sqrt(best);
}

Quad1D gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    Quad1D q;
    q.nodes.resize(n);
    q.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration from the Chebyshev-based initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], ascending
        q.weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    return q;
}

std::vector<QuadPoint> disc_rule(Vec2 center, double r, int n_r, int n_t) {
    const Quad1D gr = gauss_legendre(n_r);
    std::vector<QuadPoint> pts;
    pts.reserve(static_cast<size_t>(n_r) * n_t);
    for (int i = 0; i < n_r; ++i) {
        const double rho = gr.nodes[i] * r;
        const double wr = gr.weights[i] * r * rho;  // includes the ρ dρ factor
        for (int j = 0; j < n_t; ++j) {
            const double th = 2.0 * M_PI * (j + 0.5) / n_t;
            pts.push_back({center + Vec2{rho * std::cos(th), rho * std::sin(th)},
                           wr * 2.0 * M_PI / n_t});
        }
    }
    return pts;
}

namespace {

// Degree-5 symmetric 7-point rule in barycentric coordinates.
constexpr double kTri7[7][4] = {
    {1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225},
    {0.059715871789770, 0.470142064105115, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.059715871789770, 0.470142064105115, 0.132394152788506},
    {0.470142064105115, 0.470142064105115, 0.059715871789770, 0.132394152788506},
    {0.797426985353087, 0.101286507323456, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.797426985353087, 0.101286507323456, 0.125939180544827},
    {0.101286507323456, 0.101286507323456, 0.797426985353087, 0.125939180544827},
};

void triangle_rule_rec(Vec2 a, Vec2 b, Vec2 c, int levels, std::vector<QuadPoint>& out) {
    if (levels > 0) {
        const Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
        triangle_rule_rec(a, ab, ca, levels - 1, out);
        triangle_rule_rec(ab, b, bc, levels - 1, out);
        triangle_rule_rec(ca, bc, c, levels - 1, out);
        triangle_rule_rec(ab, bc, ca, levels - 1, out);
        return;
    }
    const double area = 0.5 * cross(b - a, c - a);
    for (const auto& p : kTri7)
        out.push_back({a * p[0] + b * p[1] + c * p[2], p[3] * area});
}

}  // namespace

std::vector<QuadPoint> triangle_rule(Vec2 a, Vec2 b, Vec2 c, int levels) {
    std::vector<QuadPoint> out;
    triangle_rule_rec(a, b, c, levels, out);
    return out;
}

double integrate_affine(const std::vector<Vec2>& poly, Vec2 g, double c) {
    if (poly.size() < 3) return 0.0;
    const double a = polygon_area(poly);
    if (a == 0.0) return 0.0;
    return a * (dot(g, polygon_centroid(poly)) + c);
}

double integrate_affine_pos_triangle(Vec2 a, Vec2 b, Vec2 c, Vec2 g, double cc) {
    const std::vector<Vec2> tri = {a, b, c};
    return integrate_affine(clip_halfplane(tri, g, cc), g, cc);
}

}  // namespace pum
