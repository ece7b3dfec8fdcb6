// Projections, discrete divergence, and discrete norms against closed forms.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pum/project.hpp"

using namespace pum;

namespace {

int cell_at(const GeneralMesh& m, Vec2 c) {
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (dist(m.barycenter[i], c) < 1e-9) return static_cast<int>(i);
    return -1;
}

}  // namespace

TEST_CASE("cell projection: constants, coordinates, moments") {
    const Box dom{{-2, -2}, {3, 3}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(1.0, dom), 1e-4);

    const CellValues c = project_to_cell(m, [](Vec2) { return 3.25; });
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) CHECK(c[i] == doctest::Approx(3.25).epsilon(1e-12));

    const CellValues x1 = project_to_cell(m, [](Vec2 x) { return x.x; });
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) CHECK(x1[i] == doctest::Approx(m.barycenter[i].x).epsilon(1e-12));

    // x₁² over the unit-square cell: 1/3 for the sharp indicator; the tiny
    // mollification radius adds r²/4
    const int k = cell_at(m, {0.5, 0.5});
    REQUIRE(k >= 0);
    const CellValues sq = project_to_cell(m, [](Vec2 x) { return x.x * x.x; });
    CHECK(sq[k] == doctest::Approx(1.0 / 3.0 + 1e-8 / 4).epsilon(1e-10));
}

TEST_CASE("face projection: constant and orthogonal fields") {
    const Box dom{{0, 0}, {1, 1}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(0.5, dom, 1), 0.25);
    const ConstantField bx({2.0, 0.0});
    const FaceCoeffs a = project_to_face(m, bx);
    for (size_t e = 0; e < m.edges.size(); ++e) {
        const Vec2 n = m.face_normal(static_cast<int>(e));
        const double s = dot(Vec2{2, 0}, n);
        CHECK(a.into_b[e] == doctest::Approx(std::max(s, 0.0) * 0.5));  // |S| = 0.5
        CHECK(a.into_a[e] == doctest::Approx(std::max(-s, 0.0) * 0.5));
        if (std::abs(n.x) < 1e-14) {  // horizontal face: orthogonal flow
            CHECK(a.into_b[e] == 0.0);
            CHECK(a.into_a[e] == 0.0);
        }
    }
}

TEST_CASE("face projection: positive-part kink across a symmetric face") {
    // single interior face at x₁ = 0 spanning x₂ ∈ [-1/2, 1/2]
    const Box dom{{-1, -0.5}, {1, 0.5}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(1.0, dom), 1e-3);
    REQUIRE(m.edges.size() == 1);
    const FunctionField b([](Vec2 x) { return Vec2{x.y, 0.0}; }, [](Vec2) { return 0.0; });
    const FaceCoeffs a = project_to_face(m, b, 0.0, {4, 0});
    CHECK(a.into_b[0] == doctest::Approx(0.125).epsilon(2e-3));
    CHECK(a.into_a[0] == doctest::Approx(0.125).epsilon(2e-3));

    // positive part outside the integral: the symmetric flux cancels
    const FaceCoeffs aa = project_to_face_alt(m, b, 0.0, {4, 0});
    CHECK(aa.into_b[0] == doctest::Approx(0.0));
    CHECK(aa.into_a[0] == doctest::Approx(0.0));
}

TEST_CASE("both projections coincide for constant fields; homogeneity") {
    const Box dom{{0, 0}, {1, 1}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(0.25, dom, 1), 0.125);
    const ConstantField b({0.7, -0.3});
    const ConstantField b3({3 * 0.7, 3 * -0.3});
    const FaceCoeffs pf = project_to_face(m, b);
    const FaceCoeffs pfa = project_to_face_alt(m, b);
    const FaceCoeffs pfa3 = project_to_face_alt(m, b3);
    for (size_t e = 0; e < m.edges.size(); ++e) {
        CHECK(pf.into_a[e] == doctest::Approx(pfa.into_a[e]).epsilon(1e-14));
        CHECK(pf.into_b[e] == doctest::Approx(pfa.into_b[e]).epsilon(1e-14));
        CHECK(pfa3.into_a[e] == doctest::Approx(3 * pfa.into_a[e]).epsilon(1e-14));
        CHECK(pfa3.into_b[e] == doctest::Approx(3 * pfa.into_b[e]).epsilon(1e-14));
        CHECK(pf.into_a[e] >= 0.0);
        CHECK(pf.into_b[e] >= 0.0);
    }
    // hat-type face functions do not factor as N·w
    const HatMesh hm = hat_mesh_from_triangulation(triangulate_box(0.25, dom), dom);
    CHECK_THROWS_AS(project_to_face_alt(hm, b), std::invalid_argument);
}

TEST_CASE("discrete divergence: constants vanish, linear field gives 2") {
    const Box dom{{1, 1}, {2, 2}};
    const double h = 0.125;
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 1), h);

    const ConstantField bc({1.3, 0.4});
    const CellValues d0 = discrete_divergence(m, project_to_face(m, bc));
    for (size_t i = 0; i < m.cell_count(); ++i) CHECK(std::abs(d0[i]) < 1e-13);

    const FunctionField bid([](Vec2 x) { return x; }, [](Vec2) { return 2.0; });
    const CellValues d2 = discrete_divergence(m, project_to_face(m, bid, 0.0, {2, 0}));
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) CHECK(d2[i] == doctest::Approx(2.0).epsilon(1e-8));

    FaceCoeffs zero;
    zero.into_a.assign(m.edges.size(), 0.0);
    zero.into_b.assign(m.edges.size(), 0.0);
    for (double v : discrete_divergence(m, zero)) CHECK(v == 0.0);
}

TEST_CASE("divergence identity for a degree-2 field") {
    const Box dom{{1, 1}, {2, 2}};
    const double h = 1.0 / 8;
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 1), h);
    const FunctionField b([](Vec2 x) { return Vec2{x.x * x.x, x.x * x.y}; },
                          [](Vec2 x) { return 3 * x.x; });
    const CellValues lhs = discrete_divergence(m, project_to_face(m, b, 0.0, {2, 0}));
    const CellValues rhs = project_to_cell(m, [&](Vec2 x) { return b.divergence(x, 0.0); }, {2, 0});
    double gap = 0.0;
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) gap = std::max(gap, std::abs(lhs[i] - rhs[i]));
    CHECK(gap < 1e-6);
}

TEST_CASE("self-reported quadrature error shrinks under refinement") {
    const Box dom{{0, 0}, {1, 1}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(0.25, dom, 1), 0.25);
    const RoughField b(2, 2.0, 0.5, 42);
    const double e1 = face_projection_error_estimate(m, b, 0.0, {1, 0});
    const double e2 = face_projection_error_estimate(m, b, 0.0, {2, 0});
    CHECK(e2 < e1);
}

TEST_CASE("discrete norms") {
    const Box dom{{0, 0}, {1, 1}};
    const double h = 0.125;
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 4), h, 0.25);

    // u = 1 on the cells covering Ω: p = 1 norm counts interior volume
    CellValues ones(m.cell_count(), 0.0);
    double vol = 0.0;
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) {
            ones[i] = 1.0;
            vol += m.pi[i];
        }
    CHECK(discrete_cell_norm(m, ones, 1.0) == doctest::Approx(vol));
    CHECK(discrete_cell_norm(m, ones, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(discrete_cell_norm(m, ones, 0.5), std::invalid_argument);

    // constant field: face p=1 norm stays of order ‖b‖_{L¹} under refinement
    auto face_l1 = [&](double hh) {
        const MollifiedMesh mm =
            mollify_polygon_mesh(build_cartesian_mesh(hh, dom, 4), hh);
        return discrete_face_norm(mm, project_to_face(mm, ConstantField({1, 0})), 1.0);
    };
    // bounded by C·‖b‖_{L¹} with C from the mesh regularity constants
    const double n8 = face_l1(1.0 / 8), n16 = face_l1(1.0 / 16);
    CHECK(n8 > 0.5);
    CHECK(n8 < 4.0);
    CHECK(n16 > 0.5);
    CHECK(n16 < 4.0);
}

TEST_CASE("alternate projection gap decays linearly in mesh size") {
    const Box dom{{0, 0}, {1, 1}};
    const RoughField b(3, 2.0, 1.0, 9);
    std::vector<double> hs = {1.0 / 8, 1.0 / 16, 1.0 / 32};
    std::vector<double> gaps;
    for (double h : hs) {
        const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 2), h);
        const FaceCoeffs pf = project_to_face(m, b, 0.0, {2, 0});
        const FaceCoeffs pfa = project_to_face_alt(m, b, 0.0, {2, 0});
        FaceCoeffs diff = pf;
        for (size_t e = 0; e < diff.into_a.size(); ++e) {
            diff.into_a[e] = pf.into_a[e] - pfa.into_a[e];
            diff.into_b[e] = pf.into_b[e] - pfa.into_b[e];
        }
        gaps.push_back(discrete_face_norm(m, diff, 1.0));
    }
    const double slope = std::log2(gaps[0] / gaps[2]) / 2.0;
    CHECK(slope >= 0.9);
}
