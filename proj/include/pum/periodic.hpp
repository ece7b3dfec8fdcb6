#pragma once

// Periodic structure on a generalized mesh: a pattern of cells, lattice
// vectors, and an index map identifying every cell with a translated pattern
// slot. `declare_periodic` validates a user-supplied structure by sampling; it
// never infers one.

#include <array>
#include <unordered_map>

#include "pum/general_mesh.hpp"

namespace pum {

struct PeriodicStructure {
    const GeneralMesh* mesh = nullptr;
    std::array<Vec2, 2> lattice;
    int pattern_size = 0;
    std::vector<std::array<int, 3>> sigma;  // cell -> (m1, m2, slot)

    Vec2 shift(int m1, int m2) const { return lattice[0] * m1 + lattice[1] * m2; }
    // cell with index map value (m1, m2, slot); -1 when absent from the mesh
    int cell_at(int m1, int m2, int slot) const;
    // translation action: the cell [m](i); -1 when absent
    int translate(int i, int m1, int m2) const {
        return cell_at(sigma[i][0] + m1, sigma[i][1] + m2, sigma[i][2]);
    }

    std::unordered_map<long long, int> index_;  // packed (m1,m2,slot) -> cell
};

// Validates: injectivity of the index map, χ/n translation consistency at
// random samples, and the tiling sum Σχ = 1 over Ω. Throws with the offending
// point or indices.
PeriodicStructure declare_periodic(const GeneralMesh& mesh, std::array<Vec2, 2> lattice,
                                   std::vector<std::array<int, 3>> sigma, int pattern_size,
                                   unsigned seed = 1234);

// Convenience: use the hint recorded by the mesh generator.
PeriodicStructure declare_periodic(const GeneralMesh& mesh, unsigned seed = 1234);

}  // namespace pum
