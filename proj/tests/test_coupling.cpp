// P1 Poisson solver and the density–potential coupling: manufactured
// convergence, variational residuals, divergence identity, conservation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pum/coupled.hpp"

using namespace pum;

namespace {

const Box kUnit{{0, 0}, {1, 1}};

HatMesh unit_hat(double h) { return hat_mesh_from_triangulation(triangulate_box(h, kUnit), kUnit); }

double mass_of(const GeneralMesh& m, const CellValues& u) {
    double s = 0.0;
    for (size_t i = 0; i < m.cell_count(); ++i) s += u[i] * m.pi[i];
    return s;
}

// radial bump of radius r centered at c, zero outside
CellValues bump(const GeneralMesh& m, Vec2 c, double r) {
    CellValues u(m.cell_count(), 0.0);
    for (size_t i = 0; i < m.cell_count(); ++i) {
        const double d2 = norm2(m.barycenter[i] - c);
        if (d2 < r * r) u[i] = (r * r - d2) / (r * r);
    }
    return u;
}

}  // namespace

// ============================================================================
// Poisson solver
// ============================================================================

TEST_CASE("zero source gives zero potential and field") {
    const HatMesh m = unit_hat(0.125);
    const PoissonSolution sol = fem_poisson_solve(m, CellValues(m.cell_count(), 0.0));
    for (double v : sol.phi) CHECK(v == 0.0);
    for (const Vec2& gv : sol.grad) CHECK(norm(gv) == 0.0);
    CHECK(sol.variational_residual < 1e-12);
}

TEST_CASE("manufactured solution: second-order nodal, first-order gradient") {
    auto exact = [](Vec2 x) { return std::sin(M_PI * x.x) * std::sin(M_PI * x.y); };
    auto exact_grad = [](Vec2 x) {
        return Vec2{M_PI * std::cos(M_PI * x.x) * std::sin(M_PI * x.y),
                    M_PI * std::sin(M_PI * x.x) * std::cos(M_PI * x.y)};
    };
    std::vector<double> nodal, h1;
    for (const double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        const HatMesh m = unit_hat(h);
        const Triangulation& tri = m.triangulation();
        CellValues g(m.cell_count());
        for (size_t i = 0; i < g.size(); ++i)
            g[i] = 2 * M_PI * M_PI * exact(tri.vertices[i]);
        const PoissonSolution sol = fem_poisson_solve(m, g);
        CHECK(sol.variational_residual < 1e-12);

        double en = 0.0;
        for (size_t i = 0; i < g.size(); ++i)
            en = std::max(en, std::abs(sol.phi[i] - exact(tri.vertices[i])));
        nodal.push_back(en);

        double eh = 0.0;
        for (size_t t = 0; t < tri.triangles.size(); ++t) {
            const auto& vs = tri.triangles[t];
            const Vec2 cen =
                (tri.vertices[vs[0]] + tri.vertices[vs[1]] + tri.vertices[vs[2]]) / 3.0;
            eh += m.tri_area(static_cast<int>(t)) * norm2(sol.grad[t] - exact_grad(cen));
        }
        h1.push_back(std::sqrt(eh));
    }
    // halving h divides the nodal error by ~4 and the gradient error by ~2
    CHECK(nodal[0] / nodal[1] > 3.0);
    CHECK(nodal[1] / nodal[2] > 3.0);
    CHECK(h1[0] / h1[1] > 1.7);
    CHECK(h1[1] / h1[2] > 1.7);
}

TEST_CASE("unit source on the disc approaches the paraboloid peak 1/4") {
    std::vector<double> errs;
    for (const int refine : {3, 4, 5}) {
        const Triangulation tri = triangulate_disc({0, 0}, 1.0, refine);
        const HatMesh m = hat_mesh_from_triangulation(tri, Box{{-1, -1}, {1, 1}});
        const PoissonSolution sol = fem_poisson_solve(m, CellValues(m.cell_count(), 1.0));
        double peak = 0.0;
        for (double v : sol.phi) peak = std::max(peak, v);
        errs.push_back(std::abs(peak - 0.25));
    }
    CHECK(errs[2] < 2e-3);
    CHECK(errs[0] / errs[1] > 3.0);
    CHECK(errs[1] / errs[2] > 3.0);
}

TEST_CASE("overlap weights: nonnegative rows summing to one") {
    const HatMesh m = unit_hat(0.25);
    const P1Solver fem(m);
    const auto& A = fem.overlap();
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(A.rows());
    for (int c = 0; c < A.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
            CHECK(it.value() >= 0.0);
            rowsum(it.row()) += it.value();
        }
    for (int i = 0; i < rowsum.size(); ++i)
        CHECK(rowsum(i) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("solver rejections") {
    const HatMesh m = unit_hat(0.25);
    CHECK_THROWS_AS(fem_poisson_solve(m, CellValues(3, 1.0)), std::invalid_argument);
    Triangulation bad;
    bad.vertices = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    bad.triangles = {{0, 1, 2}, {0, 1, 3}};  // first triangle degenerate
    CHECK_THROWS(hat_mesh_from_triangulation(bad, kUnit));
}

// ============================================================================
// Coupled evolution
// ============================================================================

TEST_CASE("zero nonlinearity freezes the density") {
    const HatMesh m = unit_hat(1.0 / 16);
    const P1Solver fem(m);
    const CellValues u0 = bump(m, {0.5, 0.5}, 0.15);
    auto g = [](double) { return 0.0; };
    const auto traj = coupled_run(fem, u0, g, {0.25, 0.5});
    for (const auto& s : traj) {
        for (size_t i = 0; i < u0.size(); ++i)
            if (m.interior[i]) CHECK(s.state.u[i] == u0[i]);
        for (double v : s.potential) CHECK(v == 0.0);
        CHECK(s.div_sup == 0.0);
    }
}

TEST_CASE("divergence identity against the overlap weights") {
    const HatMesh m = unit_hat(1.0 / 16);
    const P1Solver fem(m);
    auto g = [](double u) { return u / (1.0 + u); };
    CoupledState s = coupled_init(fem, bump(m, {0.5, 0.5}, 0.2), g);

    const FaceCoeffs a = project_to_face(m, TriangleField(m, s.b_tri));
    const CellValues d = discrete_divergence(m, a);
    Eigen::VectorXd gu(static_cast<Eigen::Index>(m.cell_count()));
    for (size_t i = 0; i < m.cell_count(); ++i) gu(static_cast<Eigen::Index>(i)) = g(s.state.u[i]);
    const Eigen::VectorXd pred = -(fem.overlap() * gu);

    double worst = 0.0, gmax = 0.0;
    for (size_t i = 0; i < m.cell_count(); ++i) {
        if (!m.interior[i]) continue;
        worst = std::max(worst, std::abs(d[i] - pred(static_cast<Eigen::Index>(i))));
        gmax = std::max(gmax, std::abs(gu(static_cast<Eigen::Index>(i))));
    }
    CHECK(worst < 1e-10);
    // the divergence stays inside the range of the source values
    CHECK(s.div_sup <= gmax + 1e-12);
}

TEST_CASE("mass conserved while the support stays interior") {
    const HatMesh m = unit_hat(1.0 / 16);
    const P1Solver fem(m);
    const CellValues u0 = bump(m, {0.5, 0.5}, 0.15);
    auto g = [](double u) { return u / (1.0 + u); };
    const auto traj = coupled_run(fem, u0, g, {0.2, 0.4});
    const double m0 = mass_of(m, u0);
    double sup0 = 0.0;
    for (double v : u0) sup0 = std::max(sup0, v);
    double dmax = 0.0;
    for (const auto& s : traj) dmax = std::max(dmax, s.div_sup);
    for (const auto& s : traj) {
        CHECK(std::abs(mass_of(m, s.state.u) - m0) < 1e-10);
        CHECK(s.state.leaked < 1e-12);
        // a priori envelope from the measured divergence bound
        double sup = 0.0;
        for (double v : s.state.u) sup = std::max(sup, v);
        CHECK(sup <= sup0 * std::exp(dmax * s.state.t) + 1e-9);
    }
}

TEST_CASE("stage-exact mode agrees with the frozen-potential default") {
    const HatMesh m = unit_hat(1.0 / 8);
    const P1Solver fem(m);
    const CellValues u0 = bump(m, {0.5, 0.5}, 0.2);
    auto g = [](double u) { return u / (1.0 + u); };
    CoupledOptions frozen, exact;
    exact.stage_exact = true;
    const auto a = coupled_run(fem, u0, g, {0.25}, frozen);
    const auto b = coupled_run(fem, u0, g, {0.25}, exact);
    // the modes differ at the splitting order of the coupling, not more
    for (size_t i = 0; i < u0.size(); ++i)
        CHECK(std::abs(a[0].state.u[i] - b[0].state.u[i]) < 2e-3);
}

TEST_CASE("nonlinearity preconditions") {
    const HatMesh m = unit_hat(0.25);
    const P1Solver fem(m);
    CHECK_THROWS_AS(coupled_init(fem, CellValues(m.cell_count(), 0.1),
                                 [](double u) { return u + 1.0; }),
                    std::invalid_argument);
    // convex g only warns; the run still proceeds
    const auto s = coupled_init(fem, bump(m, {0.5, 0.5}, 0.2),
                                [](double u) { return u * u; });
    CHECK(s.state.t == 0.0);
}

TEST_CASE("leak trend report") {
    CHECK(leak_bound_check({0.1}, {0.0}, 1.0, 2.0, 1.0).skipped);  // λ = −0.5
    const std::vector<double> dxs{1.0 / 8, 1.0 / 16, 1.0 / 32};
    std::vector<double> leaks;
    for (double dx : dxs) leaks.push_back(std::exp(-0.2 / dx));
    const auto rep = leak_bound_check(dxs, leaks, 1.0, 0.5, 1.0);
    CHECK(!rep.skipped);
    CHECK(rep.lambda == doctest::Approx(0.25));
    CHECK(rep.slope == doctest::Approx(-0.2).epsilon(1e-9));
    const auto zero = leak_bound_check(dxs, {0.0, 0.0, 0.0}, 1.0, 0.5, 1.0);
    CHECK(!zero.skipped);
    CHECK(zero.slope == 0.0);
    CHECK_THROWS_AS(leak_bound_check({0.1}, {0.0, 0.0}, 1.0, 0.1, 1.0), std::invalid_argument);
}
