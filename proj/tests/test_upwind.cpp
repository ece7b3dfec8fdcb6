// Upwind scheme, leak accounting, integrators, and the jump-process oracle.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pum/montecarlo.hpp"
#include "pum/scheme.hpp"

using namespace pum;

namespace {

MollifiedMesh strip_mesh(double h) {
    const Box dom{{0, 0}, {2, 2}};
    return mollify_polygon_mesh(build_cartesian_mesh(h, dom, 1), h);
}

double total_mass(const GeneralMesh& m, const CellValues& u) {
    double s = 0.0;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * m.pi[i];
    return s;
}

}  // namespace

TEST_CASE("zero density, zero coefficients, mismatched sizes") {
    const MollifiedMesh m = strip_mesh(0.25);
    const FaceCoeffs a = project_to_face(m, ConstantField({1, 0}));
    const RhsResult r = assemble_rhs(m, a, CellValues(m.cell_count(), 0.0));
    for (double v : r.dudt) CHECK(v == 0.0);
    for (double v : r.leak.R) CHECK(v == 0.0);
    CHECK_THROWS_AS(assemble_rhs(m, a, CellValues(3, 0.0)), std::invalid_argument);
}

TEST_CASE("upwind stencil for unit horizontal transport") {
    const double h = 0.25;
    const MollifiedMesh m = strip_mesh(h);
    const FaceCoeffs a = project_to_face(m, ConstantField({1, 0}));

    // indicator of one deep-interior cell
    int mid = -1;
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (dist(m.barycenter[i], {1.125, 1.125}) < 1e-12) mid = static_cast<int>(i);
    REQUIRE(mid >= 0);
    CellValues u(m.cell_count(), 0.0);
    u[mid] = 1.0;
    const RhsResult r = assemble_rhs(m, a, u);
    for (size_t i = 0; i < m.cell_count(); ++i) {
        if (!m.interior[i]) continue;
        const Vec2 d = m.barycenter[i] - m.barycenter[mid];
        if (norm(d) < 1e-12)
            CHECK(r.dudt[i] == doctest::Approx(-1.0 / h));  // (u_{i-1} − u_i)/δx with u_{i-1}=0
        else if (dist(d, {h, 0}) < 1e-12)
            CHECK(r.dudt[i] == doctest::Approx(1.0 / h));  // downstream neighbor
        else
            CHECK(r.dudt[i] == doctest::Approx(0.0));
    }
}

TEST_CASE("mass balance identity with boundary leak") {
    const MollifiedMesh m = strip_mesh(0.25);
    const RoughField b(2, 2.0, 1.0, 5);
    const FaceCoeffs a = project_to_face(m, b, 0.0, {1, 0});
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    CellValues u(m.cell_count(), 0.0);
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) u[i] = u01(rng);
    const RhsResult r = assemble_rhs(m, a, u);
    double dmass = 0.0;
    for (size_t i = 0; i < m.cell_count(); ++i) dmass += r.dudt[i] * m.pi[i];
    CHECK(dmass == doctest::Approx(r.leak.total).epsilon(1e-12));
    for (double R : r.leak.R) CHECK(R <= 1e-15);
}

TEST_CASE("integration: frozen coefficients, conservation, monotone sup") {
    const double h = 1.0 / 16;
    const Box dom{{0, 0}, {1, 1}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 1), h);

    CellValues u0(m.cell_count(), 0.0);
    for (size_t i = 0; i < m.cell_count(); ++i) {
        const Vec2 c = m.barycenter[i];
        if (m.interior[i]) u0[i] = std::exp(-40.0 * norm2(c - Vec2{0.35, 0.5}));
    }

    SUBCASE("zero coefficients freeze the state") {
        FaceCoeffs zero;
        zero.into_a.assign(m.edges.size(), 0.0);
        zero.into_b.assign(m.edges.size(), 0.0);
        const auto traj = integrate(m, {0.0, u0, 0.0}, [&](double) { return zero; }, {0.5});
        for (size_t i = 0; i < m.cell_count(); ++i)
            if (m.interior[i]) CHECK(traj[0].u[i] == u0[i]);
    }

    SUBCASE("horizontal transport conserves mass away from the boundary") {
        const FaceCoeffs a = project_to_face(m, ConstantField({1, 0}));
        const auto traj =
            integrate(m, {0.0, u0, 0.0}, [&](double) { return a; }, {0.05, 0.1});
        const double m0 = total_mass(m, u0);
        for (const auto& s : traj) {
            CHECK(std::abs(total_mass(m, s.u) + s.leaked - m0) < 1e-10);
            CHECK(s.leaked >= 0.0);
            CHECK(s.leaked < 1e-3);  // support still far from the outflow side
        }
    }

    SUBCASE("divergence-free rotation: sup norm nonincreasing") {
        const RotationField rot({0.5, 0.5}, 1.0);
        const FaceCoeffs a = project_to_face(m, rot, 0.0, {1, 0});
        const auto traj = integrate(m, {0.0, u0, 0.0}, [&](double) { return a; },
                                    {0.05, 0.1, 0.15, 0.2});
        double prev = 1.0;  // sup of u0 is just under 1
        for (const auto& s : traj) {
            double sup = 0.0;
            for (double v : s.u) sup = std::max(sup, v);
            CHECK(sup <= prev * (1 + 1e-12));
            prev = sup;
        }
    }

    SUBCASE("explicit Euler: positivity holds, oversized fixed step rejected") {
        const FaceCoeffs a = project_to_face(m, ConstantField({1, 0}));
        StepperSpec euler;
        euler.method = StepperSpec::Method::Euler;
        const auto traj = integrate(m, {0.0, u0, 0.0}, [&](double) { return a; }, {0.2}, euler);
        for (double v : traj[0].u) CHECK(v >= 0.0);

        StepperSpec big = euler;
        big.fixed_dt = 10.0 * cfl_dt(m, a, euler.cfl);
        CHECK_THROWS_WITH_AS(
            integrate(m, {0.0, u0, 0.0}, [&](double) { return a; }, {0.2}, big),
            doctest::Contains("stability bound"), std::invalid_argument);
    }
}

TEST_CASE("jump oracle: immobile walkers reproduce the initial state") {
    const MollifiedMesh m = strip_mesh(0.5);
    FaceCoeffs zero;
    zero.into_a.assign(m.edges.size(), 0.0);
    zero.into_b.assign(m.edges.size(), 0.0);
    CellValues u0(m.cell_count(), 0.0);
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i]) u0[i] = 1.0 + m.barycenter[i].x;
    const MonteCarloResult r = monte_carlo_oracle(m, zero, u0, 1.0, 20000, 11);
    CHECK(r.leaked == 0.0);
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.interior[i])
            CHECK(std::abs(r.u[i] - u0[i]) <= 4.0 * r.stderr_u[i] + 1e-12);
    CHECK_THROWS_AS(monte_carlo_oracle(m, zero, u0, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("jump oracle matches the dense solution on a 3-cell chain") {
    const MollifiedMesh m = strip_mesh(0.25);
    // pick three consecutive deep-interior cells and hand-craft rates
    int c0 = -1, c1 = -1, c2 = -1;
    for (size_t i = 0; i < m.cell_count(); ++i) {
        const Vec2 c = m.barycenter[i];
        if (std::abs(c.y - 1.125) > 1e-12) continue;
        if (std::abs(c.x - 0.875) < 1e-12) c0 = static_cast<int>(i);
        if (std::abs(c.x - 1.125) < 1e-12) c1 = static_cast<int>(i);
        if (std::abs(c.x - 1.375) < 1e-12) c2 = static_cast<int>(i);
    }
    REQUIRE(c0 >= 0);
    REQUIRE(c1 >= 0);
    REQUIRE(c2 >= 0);
    FaceCoeffs a;
    a.into_a.assign(m.edges.size(), 0.0);
    a.into_b.assign(m.edges.size(), 0.0);
    auto set_rate = [&](int from, int to, double rate) {
        const int e = m.edge_of(from, to);
        REQUIRE(e >= 0);
        (m.edges[e].b == to ? a.into_b[e] : a.into_a[e]) = rate * m.pi[from];
    };
    set_rate(c0, c1, 1.7);
    set_rate(c1, c0, 0.4);
    set_rate(c1, c2, 0.9);
    set_rate(c2, c1, 1.2);

    CellValues u0(m.cell_count(), 0.0);
    u0[c0] = 1.0 / m.pi[c0];  // unit mass in the first cell

    // reference: tiny-step RK4 on the 3-state master equation
    double p[3] = {1.0, 0.0, 0.0};
    auto deriv = [&](const double q[3], double d[3]) {
        d[0] = -1.7 * q[0] + 0.4 * q[1];
        d[1] = 1.7 * q[0] - (0.4 + 0.9) * q[1] + 1.2 * q[2];
        d[2] = 0.9 * q[1] - 1.2 * q[2];
    };
    const double t_end = 0.8, dt = 1e-4;
    for (double t = 0; t < t_end - 1e-12; t += dt) {
        double k1[3], k2[3], k3[3], k4[3], tmp[3];
        deriv(p, k1);
        for (int j = 0; j < 3; ++j) tmp[j] = p[j] + dt / 2 * k1[j];
        deriv(tmp, k2);
        for (int j = 0; j < 3; ++j) tmp[j] = p[j] + dt / 2 * k2[j];
        deriv(tmp, k3);
        for (int j = 0; j < 3; ++j) tmp[j] = p[j] + dt * k3[j];
        deriv(tmp, k4);
        for (int j = 0; j < 3; ++j) p[j] += dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    }

    const MonteCarloResult r = monte_carlo_oracle(m, a, u0, t_end, 100000, 2024);
    CHECK(r.leaked == 0.0);  // the chain never exits
    const int cells[3] = {c0, c1, c2};
    for (int j = 0; j < 3; ++j) {
        const double est = r.u[cells[j]] * m.pi[cells[j]];
        const double se = r.stderr_u[cells[j]] * m.pi[cells[j]];
        CHECK(std::abs(est - p[j]) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("jump oracle: leak grows as support approaches the outflow boundary") {
    const double h = 1.0 / 8;
    const Box dom{{0, 0}, {1, 1}};
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, dom, 1), h);
    const FaceCoeffs a = project_to_face(m, ConstantField({1, 0}));
    auto leak_from = [&](double cx) {
        CellValues u0(m.cell_count(), 0.0);
        for (size_t i = 0; i < m.cell_count(); ++i)
            if (m.interior[i] && dist(m.barycenter[i], {cx, 0.5625}) < 1e-12)
                u0[i] = 1.0 / m.pi[i];
        return monte_carlo_oracle(m, a, u0, 0.3, 20000, 5).leaked;
    };
    CHECK(leak_from(0.8125) > leak_from(0.3125));
}
