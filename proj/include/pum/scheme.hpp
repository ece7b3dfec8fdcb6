#pragma once

// Semi-discrete upwind transport scheme with boundary leak accounting and
// explicit time integration (Euler / RK4 under a CFL bound).

#include <functional>

#include "pum/project.hpp"

namespace pum {

struct SchemeState {
    double t = 0.0;
    CellValues u;          // zero outside the interior index set
    double leaked = 0.0;   // cumulative mass lost through the boundary (≥ 0)
};

struct LeakLedger {
    CellValues R;       // R_i ≤ 0 for nonnegative u; nonzero only off-interior
    double total = 0.0; // Σ R_i π_i
};

struct StepperSpec {
    enum class Method { Euler, RK4 };
    Method method = Method::RK4;
    double cfl = 0.5;
    double fixed_dt = 0.0;  // 0 → adaptive from the CFL bound
};

struct RhsResult {
    CellValues dudt;
    LeakLedger leak;
};

// (du/dt)_i = (1/π_i)Σ_j(a_{i,j}u_j − a_{j,i}u_i) on interior cells, 0
// elsewhere; R_i collects the inflow discarded at frozen boundary cells.
RhsResult assemble_rhs(const GeneralMesh& mesh, const FaceCoeffs& a, const CellValues& u);

// largest stable Δt: cfl · min_i π_i / Σ_j a_{j,i}
double cfl_dt(const GeneralMesh& mesh, const FaceCoeffs& a, double cfl);

// Integrate to each output time (ascending, ≥ state.t). The provider is
// evaluated at every stage time; leaked mass advances with the same stages so
// conservation holds to rounding.
std::vector<SchemeState> integrate(const GeneralMesh& mesh, SchemeState state,
                                   const std::function<FaceCoeffs(double)>& coeffs,
                                   const std::vector<double>& output_times,
                                   const StepperSpec& spec = {});

}  // namespace pum
