#pragma once

// Exact decomposition of the time derivative of the kernel double sum
// S(u) = Σ_{i,j} K_{ij}|u_i−u_j|π_iπ_j along the upwind dynamics, split into a
// kernel-transport part, a divergence part, a sign-defect part (always ≤ 0),
// and a boundary-leak part.

#include "pum/seminorm.hpp"

namespace pum {

struct KruzkovReport {
    double double_sum = 0.0;   // S(u) at the given state
    double transport = 0.0;    // kernel-difference transport term
    double divergence = 0.0;   // coefficient-imbalance term
    double sign_defect = 0.0;  // ≤ 0 for any state
    double leak = 0.0;         // boundary-loss term

    // exact value of dS/dt under the semi-discrete dynamics
    double ddt() const { return transport + divergence + 2.0 * sign_defect + leak; }
};

KruzkovReport kruzkov_decomposition(const GeneralMesh& mesh, const FaceCoeffs& a,
                                    const CellValues& u, const KernelSpec& kernel,
                                    const VirtualCoordinates& coords);

}  // namespace pum
