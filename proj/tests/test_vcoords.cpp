// Coupling-matrix solver, one-period assembly, direction families of virtual
// coordinates, residue evaluation, and space/time field averaging.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pum/admissible.hpp"
#include "pum/averaged.hpp"

using namespace pum;

namespace {

const Box kUnit{{0, 0}, {1, 1}};

// random member of the zero-row/column-sum class built from weighted cycles
Eigen::MatrixXd random_cycle_matrix(int n, std::mt19937& rng, int cycles) {
    std::uniform_real_distribution<double> w(0.1, 1.0);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int c = 0; c < cycles; ++c) {
        std::shuffle(perm.begin(), perm.end(), rng);
        const double wc = w(rng);
        for (int i = 0; i < n; ++i) B(perm[i], perm[(i + 1) % n]) += wc;
    }
    Eigen::MatrixXd M = -B;
    for (int i = 0; i < n; ++i) M(i, i) = B.row(i).sum();
    return M;
}

}  // namespace

TEST_CASE("block decomposition: singletons, coupled pair, rejections") {
    const DiffusionMatrix z = block_decompose(Eigen::MatrixXd::Zero(3, 3));
    CHECK(z.blocks.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(z.blocks[i] == std::vector<int>{i});

    Eigen::MatrixXd pair(2, 2);
    pair << 1, -1, -1, 1;
    CHECK(block_decompose(pair).blocks.size() == 1);

    Eigen::MatrixXd pos = pair;
    pos(0, 1) = 1;  // positive off-diagonal
    CHECK_THROWS_AS(block_decompose(pos), std::invalid_argument);
    Eigen::MatrixXd bad = pair;
    bad(0, 0) = 2;  // row sum broken
    CHECK_THROWS_AS(block_decompose(bad), std::invalid_argument);
}

TEST_CASE("two decoupled cycles split into the reachability components") {
    std::mt19937 rng(21);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(6, 6);
    M.topLeftCorner(3, 3) = random_cycle_matrix(3, rng, 2);
    M.bottomRightCorner(3, 3) = random_cycle_matrix(3, rng, 2);
    const DiffusionMatrix dm = block_decompose(M);

    // brute-force reachability on the symmetrized support
    std::vector<std::vector<char>> reach(6, std::vector<char>(6, 0));
    for (int i = 0; i < 6; ++i) reach[i][i] = 1;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (std::abs(M(i, j)) + std::abs(M(j, i)) > 1e-12) reach[i][j] = 1;
    for (int k = 0; k < 6; ++k)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = 1;

    REQUIRE(dm.blocks.size() == 2);
    for (const auto& blk : dm.blocks)
        for (int i : blk)
            for (int j = 0; j < 6; ++j) {
                const bool inside =
                    std::find(blk.begin(), blk.end(), j) != blk.end();
                CHECK(inside == static_cast<bool>(reach[i][j]));
            }
}

TEST_CASE("bounded solve: closed form, zero input, range rejection") {
    Eigen::MatrixXd pair(2, 2);
    pair << 1, -1, -1, 1;
    const DiffusionMatrix dm = block_decompose(pair);
    Eigen::VectorXd phi(2);
    phi << 1, -1;
    const Eigen::VectorXd x = solve_bounded(dm, phi);
    CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(x(1) == doctest::Approx(-0.5).epsilon(1e-13));

    CHECK(solve_bounded(dm, Eigen::VectorXd::Zero(2)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd off(2);
    off << 1, 0;  // block sum 1: not in the range
    CHECK_THROWS_WITH_AS(solve_bounded(dm, off), doctest::Contains("block"),
                         std::invalid_argument);
}

TEST_CASE("bounded solve matches the pseudo-inverse on random systems") {
    std::mt19937 rng(33);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 5;
        const Eigen::MatrixXd M = random_cycle_matrix(n, rng, 3);
        const DiffusionMatrix dm = block_decompose(M);
        // right-hand side projected into the range (zero block sums)
        Eigen::VectorXd phi(n);
        for (int i = 0; i < n; ++i) phi(i) = u(rng);
        for (const auto& blk : dm.blocks) {
            double mean = 0.0;
            for (int i : blk) mean += phi(i);
            mean /= blk.size();
            for (int i : blk) phi(i) -= mean;
        }
        const Eigen::VectorXd x = solve_bounded(dm, phi);
        const Eigen::VectorXd xp =
            M.completeOrthogonalDecomposition().pseudoInverse() * phi;
        CHECK((x - xp).cwiseAbs().maxCoeff() < 1e-8);
        // inequality of the advertised shape: C·η₁^{n−2}·η₀^{−(n−1)}·‖φ‖_∞
        CHECK(x.cwiseAbs().maxCoeff() <=
              10.0 * std::pow(1.0, n - 2) * std::pow(0.1, -(n - 1)) *
                  phi.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("one-period assembly: single-slot row, class membership, oracle") {
    const double h = 0.25;
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, kUnit, 2), h, 0.0);
    const PeriodicStructure ps = declare_periodic(m);

    const PeriodicAssembly as = assemble_periodic_system(m, ps, {1, 0});
    REQUIRE(as.M.rows() == 1);
    CHECK(std::abs(as.M(0, 0)) < 1e-13);
    CHECK(std::abs(as.rhs(0, 0)) < 1e-13);
    CHECK(std::abs(as.rhs(0, 1)) < 1e-13);
    CHECK(as.vol[0] == doctest::Approx(h * h));
    CHECK(as.row_defect < 1e-12);

    // non-unit direction: normalized, same system
    const PeriodicAssembly as3 = assemble_periodic_system(m, ps, {3, 0});
    CHECK(as3.direction == Vec2{1, 0});
    CHECK((as3.M - as.M).cwiseAbs().maxCoeff() < 1e-14);

    const MollifiedMesh alt =
        mollify_polygon_mesh(build_alternating_mesh(h, kUnit, 2), h / 2, 0.0);
    const PeriodicStructure pa = declare_periodic(alt);
    const Vec2 diag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const PeriodicAssembly aa = assemble_periodic_system(alt, pa, diag);
    REQUIRE(aa.M.rows() == 3);
    // class membership is what block_decompose validates
    const DiffusionMatrix dm = block_decompose(aa.M);
    for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd x = solve_bounded(dm, aa.rhs.col(c));
        const Eigen::VectorXd xp =
            aa.M.completeOrthogonalDecomposition().pseudoInverse() * aa.rhs.col(c);
        CHECK((x - xp).cwiseAbs().maxCoeff() < 1e-8);
    }

    CHECK_THROWS_AS(assemble_periodic_system(m, pa, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(assemble_periodic_system(m, ps, {0, 0}), std::invalid_argument);
}

TEST_CASE("direction family on a cartesian grid keeps barycenters") {
    const double h = 1.0 / 8;
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, kUnit, 2), h, 0.0);
    const PeriodicStructure ps = declare_periodic(m);
    const AdmissibleFamily fam = build_admissible_family(m, ps, 16);

    CHECK(fam.m_beta < 1e-12);
    CHECK(fam.m_xi < 1e-10);
    for (size_t i = 0; i < m.cell_count(); ++i)
        if (m.meets_domain[i])
            CHECK(dist(fam.coords[3][i], m.barycenter[i]) < 1e-12);

    // scale-free lookup
    CHECK(fam.index_of({2, 1}) == fam.index_of({6, 3}));
    CHECK(fam.index_of({1, 0}) == 0);
    CHECK_THROWS_AS(fam.index_of({0, 0}), std::invalid_argument);
}

TEST_CASE("direction family on the alternating mesh: residue and drift scaling") {
    auto family = [](double h) {
        const MollifiedMesh m =
            mollify_polygon_mesh(build_alternating_mesh(h, kUnit, 2), h / 2, 0.0);
        const PeriodicStructure ps = declare_periodic(m);
        return build_admissible_family(m, ps, 8);
    };
    const AdmissibleFamily f8 = family(1.0 / 8);
    const AdmissibleFamily f16 = family(1.0 / 16);
    CHECK(f8.m_xi < 1e-10);
    CHECK(f16.m_xi < 1e-10);
    CHECK(f8.m_beta > 1e-4);  // genuinely off-barycenter
    // drift scales with the mesh: M_β/h constant across refinement
    const double c8 = f8.m_beta / (1.0 / 8), c16 = f16.m_beta / (1.0 / 16);
    CHECK(c16 == doctest::Approx(c8).epsilon(0.2));
}

TEST_CASE("residue field: zeros, and barycenters are not admissible") {
    const double h = 0.25;
    const MollifiedMesh alt =
        mollify_polygon_mesh(build_alternating_mesh(h, kUnit, 2), h / 2, 0.0);

    FaceCoeffs zero;
    zero.into_a.assign(alt.edges.size(), 0.0);
    zero.into_b.assign(alt.edges.size(), 0.0);
    const std::vector<Vec2> nob(alt.cell_count(), Vec2{0, 0});
    for (const Vec2& r : residue_field(alt, zero, nob, alt.barycenter)) {
        CHECK(r.x == 0.0);
        CHECK(r.y == 0.0);
    }

    const Vec2 diag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    const FaceCoeffs a = project_to_face(alt, ConstantField(diag));
    const std::vector<Vec2> bc(alt.cell_count(), diag);
    const std::vector<Vec2> r = residue_field(alt, a, bc, alt.barycenter);
    double worst = 0.0;
    for (size_t i = 0; i < alt.cell_count(); ++i)
        if (alt.interior[i]) worst = std::max(worst, std::max(std::abs(r[i].x), std::abs(r[i].y)));
    CHECK(worst > 1e-3);  // the motivation metric: barycenters leave a residue
}

TEST_CASE("hexagonal mesh: admissible family with zero interior residue") {
    const double s = 0.11;
    const MollifiedMesh hex =
        mollify_polygon_mesh(build_hexagonal_mesh(s, kUnit, 2), s / 2, 0.0);
    const PeriodicStructure ps = declare_periodic(hex);
    const AdmissibleFamily fam = build_admissible_family(hex, ps, 8);
    CHECK(fam.m_xi < 1e-10);
}

TEST_CASE("field averaging: constants, zero-mean oscillation, stripe means") {
    const double h = 1.0 / 96;  // keep 8·δx below the η = 1/4 boxes
    const MollifiedMesh m = mollify_polygon_mesh(build_cartesian_mesh(h, kUnit, 1), h / 4, 0.0);

    const AveragedField ca =
        average_field(ConstantField({0.7, -0.2}), m, 1.0, 0.5, 0.25);
    CHECK(ca.n_slabs == 2);
    CHECK(ca.nx == 4);
    for (const auto& slab : ca.bbar)
        for (size_t k = 0; k < slab.size(); ++k) {
            if (ca.box_cells[k].empty()) continue;
            CHECK(slab[k].x == doctest::Approx(0.7).epsilon(1e-10));
            CHECK(slab[k].y == doctest::Approx(-0.2).epsilon(1e-10));
        }
    CHECK(ca.value(0.1, {0.5, 0.5}).x == doctest::Approx(0.7));

    const OscillatoryField osc(std::make_shared<ConstantField>(Vec2{1, 0}), 1.0);
    const AveragedField oa = average_field(osc, m, 1.0, 1.0, 0.25);
    for (const auto& slab : oa.bbar)
        for (const Vec2& v : slab) CHECK(std::abs(v.x) < 1e-6);

    // b = (x₁, 0): each stripe's mean is the volume-weighted barycenter mean
    const FunctionField strip([](Vec2 x) { return Vec2{x.x, 0.0}; },
                              [](Vec2) { return 1.0; });
    const AveragedField sa = average_field(strip, m, 1.0, 1.0, 0.25);
    for (size_t k = 0; k < sa.box_cells.size(); ++k) {
        if (sa.box_cells[k].empty()) continue;
        double mass = 0.0, mx = 0.0;
        for (int i : sa.box_cells[k]) {
            mass += m.pi[i];
            mx += m.pi[i] * m.barycenter[i].x;
        }
        CHECK(sa.bbar[0][k].x == doctest::Approx(mx / mass).epsilon(1e-8));
        CHECK(std::abs(sa.bbar[0][k].y) < 1e-12);
    }
    // boundary sets: stripes touch their neighbors, interiors are nonempty
    CHECK(!sa.boundary[0].empty());
    CHECK(sa.boundary[0].size() < sa.box_cells[0].size());

    CHECK_THROWS_AS(average_field(ConstantField({1, 0}), m, 1.0, 0.5, 4 * h),
                    std::invalid_argument);
    CHECK_THROWS_AS(average_field(ConstantField({1, 0}), m, 1.0, 0.3, 0.25),
                    std::invalid_argument);
}

TEST_CASE("partition parameter plug-ins, clamping, infeasibility") {
    const PartitionChoice a =
        partition_parameters(std::pow(2.0, -10), 1.0, 1.0,
                             std::numeric_limits<double>::infinity(), 1.0, 1.0, 1.0, 1.0);
    CHECK(a.eta == doctest::Approx(std::pow(2.0, -5)).epsilon(1e-13));
    CHECK_FALSE(a.eta_clamped);
    CHECK(a.tau == doctest::Approx(std::pow(2.0, -5)).epsilon(1e-13));  // s = 1, M_β = M_γ
    CHECK_FALSE(a.tau_clamped);

    const PartitionChoice b = partition_parameters(1e-4, 0.5, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(b.eta == doctest::Approx(std::pow(10.0, -4.0 / 3.0)).epsilon(1e-10));

    const PartitionChoice c =
        partition_parameters(0.02, 1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0,
                             1.0, 1.0, 1.0);
    CHECK(c.eta == doctest::Approx(0.16));  // raised to 8·δx
    CHECK(c.eta_clamped);

    CHECK_THROWS_AS(partition_parameters(0.2, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(partition_parameters(1e-3, 1.5, 1.0, 2.0, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(partition_parameters(1e-3, 0.5, 2.0, 1.5, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
}
