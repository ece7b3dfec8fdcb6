#pragma once

// Direction-indexed virtual coordinates from the one-period solve, extended
// over the whole mesh, with drift and residue summaries; the per-cell residue
// of a coordinate set against a projected field.

#include "pum/periodic_system.hpp"
#include "pum/seminorm.hpp"

namespace pum {

struct AdmissibleFamily {
    std::vector<Vec2> directions;            // uniform unit-circle grid
    std::vector<VirtualCoordinates> coords;  // per direction, one point per cell
    double m_beta = 0.0;     // max |x̂_i − x_i| over directions and cells in V_Ω
    double m_gamma = 0.0;    // max |x̂_i − x̂_j| / |x_i − x_j| over edges
    double m_xi = 0.0;       // max interior residue component over directions
    double r_max_all = 0.0;  // same maximum taken over all of V_Ω

    // nearest grid direction; scale-invariant, so b and λb (λ > 0) agree
    int index_of(Vec2 b) const;
    const VirtualCoordinates& lookup(Vec2 b) const { return coords[index_of(b)]; }
};

AdmissibleFamily build_admissible_family(const GeneralMesh& mesh, const PeriodicStructure& ps,
                                         int direction_count = 64);

// r_i = (1/π_i) Σ_{i'} (x̃_{i'} − x̃_i) a_{i',i} − b_i on every cell, where
// a_{i',i} is the outflow coefficient i → i' and b_i the cell average of the
// field.
std::vector<Vec2> residue_field(const GeneralMesh& mesh, const FaceCoeffs& a,
                                const std::vector<Vec2>& b_cell, const VirtualCoordinates& x);

}  // namespace pum
