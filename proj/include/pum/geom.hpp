#pragma once

// Small 2D geometry kit: vectors, boxes, polygon measures, disc clipping,
// and the quadrature rules used by the projection operators.

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pum {

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2&) const = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Axis-aligned box, also used as the computational domain Ω.
struct Box {
    Vec2 lo, hi;

    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    // Closure-contains with a margin: p inside the box shrunk by m on each side.
    bool contains_shrunk(Vec2 p, double m) const {
        return p.x >= lo.x + m && p.x <= hi.x - m && p.y >= lo.y + m && p.y <= hi.y - m;
    }
    Box inflated(double m) const { return {{lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}}; }
    bool overlaps(const Box& o) const {
        return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
    }
    Vec2 size() const { return hi - lo; }
    double diameter() const { return dist(lo, hi); }
};

Box bounding_box(const std::vector<Vec2>& pts);

// --- polygon measures (simple polygons, CCW orientation) ---

double polygon_area(const std::vector<Vec2>& poly);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);
double polygon_diameter(const std::vector<Vec2>& poly);

// Clip a polygon against the half-plane { x : dot(n, x) + c >= 0 }.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 n, double c);

// Area of polygon ∩ disc(center, r); exact up to rounding. The polygon must be
// simple and CCW-oriented.
double polygon_disc_area(const std::vector<Vec2>& poly, Vec2 center, double r);

// Length of segment [p, q] ∩ disc(center, r).
double segment_disc_length(Vec2 p, Vec2 q, Vec2 center, double r);

// Squared distance from a point to a segment.
double point_segment_dist2(Vec2 p, Vec2 a, Vec2 b);

// Distance from a convex polygon to an axis-aligned box (0 when they overlap).
double polygon_box_distance(const std::vector<Vec2>& poly, const Box& box);

// --- quadrature ---

struct Quad1D {
    std::vector<double> nodes;    // on [0, 1]
    std::vector<double> weights;  // sum to 1
};

// Gauss–Legendre rule with n points, mapped to [0, 1].
Quad1D gauss_legendre(int n);

struct QuadPoint {
    Vec2 x;
    double w;
};

// Product rule on disc(center, r): n_r radial Gauss points × n_t equispaced
// angles. Weights sum to the disc area.
std::vector<QuadPoint> disc_rule(Vec2 center, double r, int n_r, int n_t);

// Symmetric degree-5 rule on a triangle, optionally refined by 4-way
// subdivision `levels` times. Weights sum to the triangle area.
std::vector<QuadPoint> triangle_rule(Vec2 a, Vec2 b, Vec2 c, int levels = 0);

// Exact integral of the affine function f(x) = dot(g, x) + c over a polygon.
double integrate_affine(const std::vector<Vec2>& poly, Vec2 g, double c);

// Exact integral of max(dot(g, x) + c, 0) over a triangle.
double integrate_affine_pos_triangle(Vec2 a, Vec2 b, Vec2 c, Vec2 g, double cc);

}  // namespace pum
