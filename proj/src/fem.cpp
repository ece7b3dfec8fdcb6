#include "pum/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace pum {

P1Solver::P1Solver(const HatMesh& mesh) : mesh_(&mesh) {
    const Triangulation& tri = mesh.triangulation();
    const size_t nv = tri.vertices.size();
    const auto& bd = mesh.boundary_vertex();

    free_of_.assign(nv, -1);
    for (size_t v = 0; v < nv; ++v)
        if (!bd[v]) {
            free_of_[v] = static_cast<int>(vert_of_.size());
            vert_of_.push_back(static_cast<int>(v));
        }
    if (vert_of_.empty()) throw std::invalid_argument("triangulation has no free vertices");

    // per-triangle local matrices: stiffness area·∇λ_a·∇λ_b, mass
    // area/12·(1 + δ_ab); triangle order is already deterministic
    std::vector<Eigen::Triplet<double>> kt, mt;
    for (size_t t = 0; t < tri.triangles.size(); ++t) {
        const double area = mesh.tri_area(static_cast<int>(t));
        if (!(area > 0.0)) throw std::invalid_argument("degenerate triangle in the mesh");
        const auto& vs = tri.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const Vec2 ga = mesh.hat_grad(static_cast<int>(t), a);
                const Vec2 gb = mesh.hat_grad(static_cast<int>(t), b);
                mt.emplace_back(vs[a], vs[b], area / 12.0 * (a == b ? 2.0 : 1.0));
                if (free_of_[vs[a]] >= 0 && free_of_[vs[b]] >= 0)
                    kt.emplace_back(free_of_[vs[a]], free_of_[vs[b]], area * dot(ga, gb));
            }
    }
    const int nf = static_cast<int>(vert_of_.size());
    mass_.resize(static_cast<int>(nv), static_cast<int>(nv));
    mass_.setFromTriplets(mt.begin(), mt.end());
    stiff_.resize(nf, nf);
    stiff_.setFromTriplets(kt.begin(), kt.end());

    overlap_ = mass_;
    for (int i = 0; i < overlap_.outerSize(); ++i)
        for (Eigen::SparseMatrix<double>::InnerIterator it(overlap_, i); it; ++it)
            it.valueRef() /= mesh.pi[it.row()];

    ldlt_.compute(stiff_);
    if (ldlt_.info() != Eigen::Success)
        throw std::runtime_error("singular stiffness matrix (degenerate triangulation)");
}

PoissonSolution P1Solver::solve(const CellValues& g) const {
    const size_t nv = mesh_->triangulation().vertices.size();
    if (g.size() != nv) throw std::invalid_argument("source coefficients do not match the mesh");

    const Eigen::VectorXd load =
        mass_ * Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(nv));
    Eigen::VectorXd rhs(vert_of_.size());
    for (size_t k = 0; k < vert_of_.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = load(vert_of_[k]);

    const Eigen::VectorXd sol = ldlt_.solve(rhs);
    if (ldlt_.info() != Eigen::Success) throw std::runtime_error("stiffness solve failed");

    PoissonSolution out;
    out.phi.assign(nv, 0.0);
    for (size_t k = 0; k < vert_of_.size(); ++k)
        out.phi[vert_of_[k]] = sol(static_cast<Eigen::Index>(k));

    const Eigen::VectorXd res = stiff_ * sol - rhs;
    const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
    out.variational_residual = res.cwiseAbs().maxCoeff() / scale;

    const Triangulation& tri = mesh_->triangulation();
    out.grad.assign(tri.triangles.size(), Vec2{0, 0});
    for (size_t t = 0; t < tri.triangles.size(); ++t)
        for (int a = 0; a < 3; ++a)
            out.grad[t] += mesh_->hat_grad(static_cast<int>(t), a) * out.phi[tri.triangles[t][a]];
    return out;
}

PoissonSolution fem_poisson_solve(const HatMesh& mesh, const CellValues& g) {
    return P1Solver(mesh).solve(g);
}

}  // namespace pum
