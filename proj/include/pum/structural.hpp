#pragma once

// Structural report: tight measured constants for the uniform mesh-regularity
// bounds (support diameter vs δx, volume scaling, face-function magnitude,
// local cell overlap count).

#include "pum/general_mesh.hpp"

namespace pum {

struct StructuralReport {
    double diam_ratio_min = 0.0;   // min_i diam(supp χ_i)/δx
    double diam_ratio_max = 0.0;   // = 1 by the definition of δx
    double volume_ratio_min = 0.0; // min_i π_i/δx²
    double volume_ratio_max = 0.0;
    double n_sup_times_dx = 0.0;   // δx · sup |n| over sampled face points
    int max_cells_per_ball = 0;    // cells meeting some δx-ball
};

StructuralReport validate_structural(const GeneralMesh& mesh);

}  // namespace pum
