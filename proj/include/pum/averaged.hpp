#pragma once

// Piecewise-constant space/time averaging of a velocity field: uniform time
// slabs of width τ, an η-box partition of the domain with cells assigned by
// barycenter, and per-piece weighted means against the cell functions.

#include "pum/field.hpp"
#include "pum/general_mesh.hpp"
#include "pum/project.hpp"

namespace pum {

struct AveragedField {
    const GeneralMesh* mesh = nullptr;
    double T = 0.0, tau = 0.0, eta = 0.0;
    int n_slabs = 0;
    int nx = 0, ny = 0;                      // η-boxes covering Ω, row-major
    std::vector<std::vector<int>> box_cells; // cell sets V_k
    std::vector<std::vector<int>> boundary;  // cells of V_k with a neighbor outside V_k
    std::vector<std::vector<Vec2>> bbar;     // [slab][box]

    int box_of(Vec2 x) const;            // clamped index of the containing box
    double psi(int k, Vec2 x) const;     // Σ_{i∈V_k} χ_i
    Vec2 value(double t, Vec2 x) const;  // piecewise-constant average at (t, x)
};

// Requires η ≥ 8·δx and τ dividing T.
AveragedField average_field(const VectorField& b, const GeneralMesh& mesh, double T, double tau,
                            double eta, const QuadratureSpec& spec = {});

struct PartitionChoice {
    double eta = 0.0, tau = 0.0;
    bool eta_clamped = false, tau_clamped = false;
};

// η = δx^{α/(1+α)} with α = 1/p − 1/q, τ = (δx·M_β/M_γ)^{1/(1+s)}; η is then
// clamped up to 8δx, τ down to T and snapped to a divisor of T. Throws when no
// feasible η ≤ domain_size remains.
PartitionChoice partition_parameters(double dx, double s, double p, double q, double m_beta,
                                     double m_gamma, double T, double domain_size);

}  // namespace pum
