#include "pum/periodic_system.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pum {

PeriodicAssembly assemble_periodic_system(const GeneralMesh& mesh, const PeriodicStructure& ps,
                                          Vec2 direction) {
    if (ps.mesh != &mesh || ps.pattern_size <= 0 || ps.sigma.size() != mesh.cell_count())
        throw std::invalid_argument("periodic structure does not describe this mesh");
    const double len = norm(direction);
    if (len == 0.0) throw std::invalid_argument("direction must be nonzero");
    if (std::abs(len - 1.0) > 1e-12) {
        std::fprintf(stderr, "warning: normalizing non-unit direction (%g, %g)\n", direction.x,
                     direction.y);
        direction = direction / len;
    }

    const FaceCoeffs a = project_to_face(mesh, ConstantField(direction));
    const int n = ps.pattern_size;

    // representatives: all slots from one common tile (the unknowns live in a
    // single period), chosen nearest the cell-cloud center so every neighbor
    // of a representative exists in the mesh
    Vec2 center{0, 0};
    for (const Vec2& x : mesh.barycenter) center += x;
    center = center / static_cast<double>(mesh.cell_count());
    std::vector<int> rep(n, -1);
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        if (ps.sigma[i][2] != 0) continue;
        const int m1 = ps.sigma[i][0], m2 = ps.sigma[i][1];
        std::vector<int> cand(n, -1);
        bool complete = true;
        double score = 0.0;
        for (int s = 0; s < n && complete; ++s) {
            cand[s] = ps.cell_at(m1, m2, s);
            if (cand[s] < 0)
                complete = false;
            else
                score = std::max(score, norm2(mesh.barycenter[cand[s]] - center));
        }
        if (complete && score < best) {
            best = score;
            rep = cand;
        }
    }
    if (rep[0] < 0)
        throw std::invalid_argument("no complete pattern tile found in the mesh");

    PeriodicAssembly out;
    out.direction = direction;
    out.rep = rep;
    out.A = Eigen::MatrixXd::Zero(n, n);
    out.rhs = Eigen::MatrixXd::Zero(n, 2);
    out.vol.resize(n);

    for (int s = 0; s < n; ++s) {
        const int c = rep[s];
        out.vol[s] = mesh.pi[c];
        for (int e : mesh.cell_edges[c]) {
            const bool is_a = mesh.edges[e].a == c;
            const int k = is_a ? mesh.edges[e].b : mesh.edges[e].a;
            const double outflow = is_a ? a.into_b[e] : a.into_a[e];  // transfer c → k
            if (outflow == 0.0) continue;
            out.A(ps.sigma[k][2], s) += outflow;
            const Vec2 shift = ps.lattice[0] * (ps.sigma[k][0] - ps.sigma[c][0]) +
                               ps.lattice[1] * (ps.sigma[k][1] - ps.sigma[c][1]);
            out.rhs(s, 0) += outflow * shift.x;
            out.rhs(s, 1) += outflow * shift.y;
        }
        out.rhs(s, 0) -= direction.x * mesh.pi[c];
        out.rhs(s, 1) -= direction.y * mesh.pi[c];
    }

    out.Phi = out.A.colwise().sum();
    out.M = -out.A.transpose();
    out.M.diagonal() += out.Phi;
    for (int i = 0; i < n; ++i) {
        const double defect = out.M.row(i).sum();
        out.row_defect = std::max(out.row_defect, std::abs(defect));
        out.M(i, i) -= defect;
    }
    return out;
}

}  // namespace pum
