#pragma once

// Jump-process oracle for the upwind scheme: independent walkers follow the
// continuous-time chain with rate a_{i',i}/π_i for the jump i → i', absorbed
// on leaving the interior index set. Occupancy estimates u_i(t)·π_i.

#include "pum/project.hpp"

namespace pum {

struct MonteCarloResult {
    CellValues u;            // estimate of u_i(t)
    CellValues stderr_u;     // per-cell standard errors on u_i
    double leaked = 0.0;     // estimated absorbed fraction of the mass
    double leaked_stderr = 0.0;
};

MonteCarloResult monte_carlo_oracle(const GeneralMesh& mesh, const FaceCoeffs& a,
                                    const CellValues& u0, double t, long walkers,
                                    unsigned seed, int workers = 1);

}  // namespace pum
