#include "pum/admissible.hpp"

#include <cmath>
#include <stdexcept>

namespace pum {

int AdmissibleFamily::index_of(Vec2 b) const {
    const double len = norm(b);
    if (len == 0.0) throw std::invalid_argument("direction must be nonzero");
    const Vec2 u = b / len;
    int best = 0;
    double bd = -2.0;
    for (size_t k = 0; k < directions.size(); ++k) {
        const double d = dot(u, directions[k]);
        if (d > bd) {
            bd = d;
            best = static_cast<int>(k);
        }
    }
    return best;
}

AdmissibleFamily build_admissible_family(const GeneralMesh& mesh, const PeriodicStructure& ps,
                                         int direction_count) {
    if (direction_count <= 0) throw std::invalid_argument("direction count must be positive");
    AdmissibleFamily fam;
    fam.coords.reserve(direction_count);
    for (int k = 0; k < direction_count; ++k) {
        const double th = 2.0 * M_PI * k / direction_count;
        fam.directions.push_back({std::cos(th), std::sin(th)});
    }

    const size_t nc = mesh.cell_count();
    for (int k = 0; k < direction_count; ++k) {
        VirtualCoordinates xs(nc);
        try {
            const PeriodicAssembly as = assemble_periodic_system(mesh, ps, fam.directions[k]);
            const DiffusionMatrix dm = block_decompose(as.M, 1e-9);
            const int n = ps.pattern_size;

            // solve for the displacement from the representatives' barycenters,
            // anchored by zero block means
            Eigen::VectorXd bx(n), by(n);
            for (int s = 0; s < n; ++s) {
                bx(s) = mesh.barycenter[as.rep[s]].x;
                by(s) = mesh.barycenter[as.rep[s]].y;
            }
            const Eigen::VectorXd dx = solve_bounded(dm, as.rhs.col(0) - as.M * bx);
            const Eigen::VectorXd dy = solve_bounded(dm, as.rhs.col(1) - as.M * by);

            for (size_t i = 0; i < nc; ++i) {
                if (!mesh.meets_domain[i]) {
                    xs[i] = mesh.barycenter[i];
                    continue;
                }
                const int slot = ps.sigma[i][2];
                const Vec2 shift =
                    ps.lattice[0] * (ps.sigma[i][0] - ps.sigma[as.rep[slot]][0]) +
                    ps.lattice[1] * (ps.sigma[i][1] - ps.sigma[as.rep[slot]][1]);
                xs[i] = Vec2{bx(slot) + dx(slot), by(slot) + dy(slot)} + shift;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("direction " + std::to_string(k) +
                                     " unsolvable: " + e.what());
        }

        // drift and residue summaries
        for (size_t i = 0; i < nc; ++i)
            if (mesh.meets_domain[i])
                fam.m_beta = std::max(fam.m_beta, dist(xs[i], mesh.barycenter[i]));
        for (const auto& e : mesh.edges) {
            const double sep = dist(mesh.barycenter[e.a], mesh.barycenter[e.b]);
            if (sep > 0.0)
                fam.m_gamma = std::max(fam.m_gamma, dist(xs[e.a], xs[e.b]) / sep);
        }
        const FaceCoeffs a = project_to_face(mesh, ConstantField(fam.directions[k]));
        const std::vector<Vec2> bcell(nc, fam.directions[k]);
        const std::vector<Vec2> r = residue_field(mesh, a, bcell, xs);
        for (size_t i = 0; i < nc; ++i) {
            const double mag = std::max(std::abs(r[i].x), std::abs(r[i].y));
            if (mesh.interior[i]) fam.m_xi = std::max(fam.m_xi, mag);
            if (mesh.meets_domain[i]) fam.r_max_all = std::max(fam.r_max_all, mag);
        }

        fam.coords.push_back(std::move(xs));
    }
    return fam;
}

std::vector<Vec2> residue_field(const GeneralMesh& mesh, const FaceCoeffs& a,
                                const std::vector<Vec2>& b_cell, const VirtualCoordinates& x) {
    const size_t nc = mesh.cell_count();
    if (x.size() != nc || b_cell.size() != nc || a.into_a.size() != mesh.edges.size())
        throw std::invalid_argument("coordinates/field/coefficients do not match the mesh");
    std::vector<Vec2> r(nc, Vec2{0, 0});
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const int ca = mesh.edges[e].a, cb = mesh.edges[e].b;
        r[ca] += (x[cb] - x[ca]) * a.into_b[e];  // outflow a → b
        r[cb] += (x[ca] - x[cb]) * a.into_a[e];  // outflow b → a
    }
    for (size_t i = 0; i < nc; ++i) r[i] = r[i] / mesh.pi[i] - b_cell[i];
    return r;
}

}  // namespace pum
