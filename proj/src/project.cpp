#include "pum/project.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pum {

CellValues project_to_cell(const GeneralMesh& mesh, const std::function<double(Vec2)>& f,
                           const QuadratureSpec& spec) {
    CellValues out(mesh.cell_count(), 0.0);
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        if (!mesh.interior[i]) continue;
        double s = 0.0;
        for (const auto& qp : mesh.cell_quad(static_cast<int>(i), spec.level))
            s += qp.w * f(qp.x);
        out[i] = s / mesh.pi[i];
    }
    return out;
}

std::vector<double> cell_average(const GeneralMesh& mesh, const std::function<double(Vec2)>& f,
                                 const QuadratureSpec& spec) {
    std::vector<double> out(mesh.cell_count(), 0.0);
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        double s = 0.0;
        for (const auto& qp : mesh.cell_quad(static_cast<int>(i), spec.level))
            s += qp.w * f(qp.x);
        out[i] = s / mesh.pi[i];
    }
    return out;
}

std::vector<Vec2> cell_average_vec(const GeneralMesh& mesh, const VectorField& b, double t,
                                   const QuadratureSpec& spec) {
    std::vector<Vec2> out(mesh.cell_count(), Vec2{0, 0});
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        Vec2 s{0, 0};
        for (const auto& qp : mesh.cell_quad(static_cast<int>(i), spec.level))
            s += b.value(qp.x, t) * qp.w;
        out[i] = s / mesh.pi[i];
    }
    return out;
}

namespace {

// exact ∫(b·n)⁺ on a hat-mesh edge when b is constant per triangle
bool hat_exact_edge(const HatMesh& hm, int e, const VectorField& b, double t, double& into_b,
                    double& into_a) {
    const int a = hm.edges[e].a, bb = hm.edges[e].b;
    double sb = 0.0, sa = 0.0;
    for (int tr : hm.edge_tris(e)) {
        const auto bv = b.value_on_triangle(tr, t);
        if (!bv) return false;
        int ka = -1, kb = -1;
        const auto& v = hm.triangulation().triangles[tr];
        for (int k = 0; k < 3; ++k) {
            if (v[k] == a) ka = k;
            if (v[k] == bb) kb = k;
        }
        const Vec2 v0 = hm.triangulation().vertices[v[0]];
        const Vec2 ga = hm.hat_grad(tr, ka), gb = hm.hat_grad(tr, kb);
        const double beta_a = dot(*bv, ga), beta_b = dot(*bv, gb);
        // b·n_{b,a} = β_b λ_a − β_a λ_b is affine on the triangle
        const Vec2 G = ga * beta_b - gb * beta_a;
        const double C = beta_b * ((ka == 0 ? 1.0 : 0.0) - dot(ga, v0)) -
                         beta_a * ((kb == 0 ? 1.0 : 0.0) - dot(gb, v0));
        const Vec2 p0 = hm.triangulation().vertices[v[0]];
        const Vec2 p1 = hm.triangulation().vertices[v[1]];
        const Vec2 p2 = hm.triangulation().vertices[v[2]];
        sb += integrate_affine_pos_triangle(p0, p1, p2, G, C);
        sa += integrate_affine_pos_triangle(p0, p1, p2, -G, -C);
    }
    into_b = sb;
    into_a = sa;
    return true;
}

FaceCoeffs face_project_at_level(const GeneralMesh& mesh, const VectorField& b, double t,
                                 int level) {
    FaceCoeffs out;
    const size_t ne = mesh.edges.size();
    out.into_a.assign(ne, 0.0);
    out.into_b.assign(ne, 0.0);
    out.time = t;

    const auto uniform = b.uniform_value(t);
    const auto* mm = dynamic_cast<const MollifiedMesh*>(&mesh);
    const auto* hm = dynamic_cast<const HatMesh*>(&mesh);

    for (size_t e = 0; e < ne; ++e) {
        if (uniform && mm) {
            const double s = dot(*uniform, mm->face_normal(static_cast<int>(e)));
            const double len = mm->face_measure(static_cast<int>(e));
            out.into_b[e] = std::max(s, 0.0) * len;
            out.into_a[e] = std::max(-s, 0.0) * len;
            continue;
        }
        if (hm && hat_exact_edge(*hm, static_cast<int>(e), b, t, out.into_b[e], out.into_a[e]))
            continue;
        double sb = 0.0, sa = 0.0;
        for (const auto& qp : mesh.face_quad(static_cast<int>(e), level)) {
            const double s = dot(b.value(qp.x, t), qp.nw);
            sb += std::max(s, 0.0);
            sa += std::max(-s, 0.0);
        }
        out.into_b[e] = sb;
        out.into_a[e] = sa;
    }
    return out;
}

}  // namespace

FaceCoeffs project_to_face(const GeneralMesh& mesh, const VectorField& b, double t,
                           const QuadratureSpec& spec) {
    return face_project_at_level(mesh, b, t, spec.level);
}

FaceCoeffs project_to_face_alt(const GeneralMesh& mesh, const VectorField& b, double t,
                               const QuadratureSpec& spec) {
    const auto* mm = dynamic_cast<const MollifiedMesh*>(&mesh);
    if (!mm)
        throw std::invalid_argument(
            "face functions are not of the factored form N·w (w >= 0)");
    FaceCoeffs out;
    const size_t ne = mesh.edges.size();
    out.into_a.assign(ne, 0.0);
    out.into_b.assign(ne, 0.0);
    out.time = t;
    const auto uniform = b.uniform_value(t);
    for (size_t e = 0; e < ne; ++e) {
        double integral;
        if (uniform) {
            integral = dot(*uniform, mm->face_normal(static_cast<int>(e))) *
                       mm->face_measure(static_cast<int>(e));
        } else {
            integral = 0.0;
            for (const auto& qp : mesh.face_quad(static_cast<int>(e), spec.level))
                integral += dot(b.value(qp.x, t), qp.nw);
        }
        out.into_b[e] = std::max(integral, 0.0);
        out.into_a[e] = std::max(-integral, 0.0);
    }
    return out;
}

double face_projection_error_estimate(const GeneralMesh& mesh, const VectorField& b, double t,
                                      const QuadratureSpec& spec) {
    const FaceCoeffs c0 = face_project_at_level(mesh, b, t, spec.level);
    const FaceCoeffs c1 = face_project_at_level(mesh, b, t, spec.level + 1);
    double err = 0.0;
    for (size_t e = 0; e < c0.into_a.size(); ++e)
        err = std::max({err, std::abs(c0.into_a[e] - c1.into_a[e]),
                        std::abs(c0.into_b[e] - c1.into_b[e])});
    return err;
}

CellValues discrete_divergence(const GeneralMesh& mesh, const FaceCoeffs& a) {
    CellValues out(mesh.cell_count(), 0.0);
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const int ca = mesh.edges[e].a, cb = mesh.edges[e].b;
        // edge e moves mass a→b at rate into_b and b→a at rate into_a
        out[ca] += a.into_b[e] - a.into_a[e];
        out[cb] += a.into_a[e] - a.into_b[e];
    }
    for (size_t i = 0; i < mesh.cell_count(); ++i)
        out[i] = mesh.interior[i] ? out[i] / mesh.pi[i] : 0.0;
    return out;
}

double discrete_cell_norm(const GeneralMesh& mesh, const CellValues& v, double p) {
    if (p < 1.0) throw std::invalid_argument("p must be at least 1");
    if (std::isinf(p)) {
        double s = 0.0;
        for (size_t i = 0; i < v.size(); ++i)
            if (mesh.interior[i]) s = std::max(s, std::abs(v[i]));
        return s;
    }
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i)
        if (mesh.interior[i]) s += std::pow(std::abs(v[i]), p) * mesh.pi[i];
    return std::pow(s, 1.0 / p);
}

double discrete_face_norm(const GeneralMesh& mesh, const FaceCoeffs& a, double p) {
    if (p < 1.0) throw std::invalid_argument("p must be at least 1");
    if (std::isinf(p)) {
        double s = 0.0;
        for (size_t e = 0; e < mesh.edges.size(); ++e)
            if (mesh.edge_interior[e])
                s = std::max({s, std::abs(a.into_a[e]), std::abs(a.into_b[e])});
        return s / mesh.dx;  // the p→∞ limit of the δx^{2/p−1} face scaling
    }
    double s = 0.0;
    for (size_t e = 0; e < mesh.edges.size(); ++e)
        if (mesh.edge_interior[e])
            s += std::pow(std::abs(a.into_a[e]), p) + std::pow(std::abs(a.into_b[e]), p);
    return std::pow(s, 1.0 / p) * std::pow(mesh.dx, 2.0 / p - 1.0);
}

}  // namespace pum
