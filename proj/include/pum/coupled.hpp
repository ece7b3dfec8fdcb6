#pragma once

// Coupled density–potential evolution: the density sources a Dirichlet
// Poisson problem on the hat basis, and the gradient of the resulting
// potential advects the density with the upwind scheme. One Poisson solve
// per time step by default; a stage-exact mode re-solves at every RK stage.

#include <functional>

#include "pum/fem.hpp"
#include "pum/scheme.hpp"

namespace pum {

// piecewise-constant per-triangle velocity on a hat mesh; exposes the exact
// positive-part face integrals of the projection
class TriangleField : public VectorField {
  public:
    TriangleField(const HatMesh& mesh, std::vector<Vec2> per_tri);
    Vec2 value(Vec2 x, double) const override;
    double divergence(Vec2, double) const override { return 0.0; }  // away from triangle edges
    std::optional<Vec2> value_on_triangle(int t, double) const override { return per_tri_[t]; }

  private:
    const HatMesh* mesh_;
    std::vector<Vec2> per_tri_;
};

struct CoupledState {
    SchemeState state;
    std::vector<double> potential;  // nodal φ for the current density
    std::vector<Vec2> b_tri;        // b = ∇φ, constant per triangle
    double div_sup = 0.0;           // max interior |D_i| for the current coefficients
};

struct CoupledOptions {
    StepperSpec stepper;
    bool stage_exact = false;  // re-solve the potential at every RK stage
    QuadratureSpec quad;
};

// Nonlinearity g must satisfy g(0) = 0 (checked); concavity is spot-checked
// on the observed value range and violations only warn on stderr.
CoupledState coupled_init(const P1Solver& fem, CellValues u0,
                          const std::function<double(double)>& g);

// one CFL-limited step toward t_target (potential and b are refreshed for
// the new density before returning)
CoupledState coupled_step(const P1Solver& fem, CoupledState s,
                          const std::function<double(double)>& g, double t_target,
                          const CoupledOptions& opt = {});

// integrate from u0 at t = 0 and record the state at each output time
std::vector<CoupledState> coupled_run(const P1Solver& fem, CellValues u0,
                                      const std::function<double(double)>& g,
                                      const std::vector<double>& output_times,
                                      const CoupledOptions& opt = {});

struct LeakTrendReport {
    double lambda = 0.0;    // (L_∂ − M_b·T)/2
    bool skipped = false;   // λ ≤ 0: the horizon outruns the support margin
    double slope = 0.0;     // log-linear fit of log(leak) against 1/δx
    std::string note;
};

// report-only: fits the measured leaks against the expected exp(−λ/δx) decay
LeakTrendReport leak_bound_check(const std::vector<double>& dxs,
                                 const std::vector<double>& leaks, double L_boundary,
                                 double M_field, double T);

}  // namespace pum
