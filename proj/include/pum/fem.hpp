#pragma once

// P1 finite elements on a hat mesh: the hats double as the Poisson shape
// functions, so the advection cells are structurally a subset of the FEM
// space (they are the same objects).

#include <Eigen/Sparse>

#include "pum/project.hpp"

namespace pum {

struct PoissonSolution {
    std::vector<double> phi;           // nodal potential, 0 at boundary vertices
    std::vector<Vec2> grad;            // ∇φ per triangle (exact, piecewise constant)
    double variational_residual = 0.;  // max_v |∫∇v·∇φ − ∫v g^χ|, relative
};

// Dirichlet Poisson solver on the hat basis: ∫∇v·∇φ = ∫v g^χ for every
// free hat v, φ = 0 at triangulation-boundary vertices, g^χ = Σ g_i χ_i.
// Factorizes the stiffness once; solve() reuses it.
class P1Solver {
  public:
    explicit P1Solver(const HatMesh& mesh);

    PoissonSolution solve(const CellValues& g) const;

    const HatMesh& mesh() const { return *mesh_; }
    // overlap weights A_{ij} = (1/π_i)∫χ_iχ_j: nonnegative, rows sum to 1
    const Eigen::SparseMatrix<double>& overlap() const { return overlap_; }

  private:
    const HatMesh* mesh_;
    std::vector<int> free_of_;  // vertex → free index, -1 at boundary vertices
    std::vector<int> vert_of_;  // free index → vertex
    Eigen::SparseMatrix<double> mass_;   // ∫χ_iχ_j, all vertices
    Eigen::SparseMatrix<double> stiff_;  // ∫∇χ_i·∇χ_j, free × free
    Eigen::SparseMatrix<double> overlap_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

// one-shot convenience wrapper
PoissonSolution fem_poisson_solve(const HatMesh& mesh, const CellValues& g);

}  // namespace pum
