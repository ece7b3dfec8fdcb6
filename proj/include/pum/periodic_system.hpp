#pragma once

// One-period reduction for virtual coordinates under a constant field: sum the
// upwind coefficients over all lattice translates of one pattern, form the
// coupling matrix Φ − Aᵀ, and build the lattice-shift right-hand side.

#include "pum/diffusion_matrix.hpp"
#include "pum/periodic.hpp"
#include "pum/project.hpp"

namespace pum {

struct PeriodicAssembly {
    Vec2 direction;          // unit direction actually used
    Eigen::MatrixXd A;       // A(i,j): transfer from slot j into slot i, all shifts
    Eigen::VectorXd Phi;     // total outflow per slot (column sums of A)
    Eigen::MatrixXd M;       // Φ − Aᵀ, row sums exactified into the diagonal
    Eigen::MatrixXd rhs;     // n×2: shift-weighted outflow minus direction·π
    std::vector<int> rep;    // representative cell per slot, from a deep tile
    std::vector<double> vol; // π per slot
    double row_defect = 0.0; // largest row-sum defect absorbed by the diagonal
};

// Non-unit directions are normalized with a warning; a structure that does not
// describe `mesh` is rejected.
PeriodicAssembly assemble_periodic_system(const GeneralMesh& mesh, const PeriodicStructure& ps,
                                          Vec2 direction);

}  // namespace pum
