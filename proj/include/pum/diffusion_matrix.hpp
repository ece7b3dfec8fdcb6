#pragma once

// Coupling matrices with nonpositive off-diagonals and zero row and column
// sums, as produced by the one-period coefficient assembly: class validation,
// decomposition into decoupled blocks, and the zero-mean-per-block solve.

#include <Eigen/Dense>
#include <vector>

namespace pum {

struct DiffusionMatrix {
    Eigen::MatrixXd M;
    std::vector<std::vector<int>> blocks;  // ascending indices, ascending heads
};

// Validates the sign/sum invariants (within tol, relative to the largest
// entry) and splits the index set into connected components of the
// symmetrized support graph. Throws std::invalid_argument on violation.
DiffusionMatrix block_decompose(Eigen::MatrixXd M, double tol = 1e-9);

// Unique solution of M x = phi with zero mean on every block. Throws when a
// block sum of phi exceeds range_tol·max(1, ‖phi‖_∞) — reporting the block and
// its sum — or when the final residual exceeds 1e-10 relative.
Eigen::VectorXd solve_bounded(const DiffusionMatrix& dm, const Eigen::VectorXd& phi,
                              double range_tol = 1e-9);

}  // namespace pum
