#pragma once

// Discrete log-scale semi-norms on cell densities: kernel double sums over
// cell pairs, weighted by |log h|^{−θ} and maximized over a grid of kernel
// scales. Also: the mollification-gap compactness diagnostic, a two-coordinate
// equivalence check, and a Gagliardo-type fractional difference quotient.

#include <optional>

#include "pum/kernel.hpp"
#include "pum/project.hpp"

namespace pum {

// per-cell points x̃_i standing in for cell positions in the kernel
using VirtualCoordinates = std::vector<Vec2>;

struct SemiNormParams {
    double h0 = 1.0 / 16;  // smallest kernel scale, in (0, 1/2)
    double p = 1.0;        // increment exponent, ≥ 1
    double theta = 1.0;    // log-weight exponent, in (0, 1]
    double p_star = 2.0;   // conjugate exponent entering the derived exponent below
    int h_count = 24;      // geometric grid size on [h0, 1/2]
};

// geometric grid on [h0, 1/2] with both endpoints (a single point when
// h_count == 1 or h0 == 1/2); throws for empty or out-of-range parameters
std::vector<double> seminorm_h_grid(const SemiNormParams& prm);

// p(θ − 1/p*), the log-exponent used for difference-quotient variants; may be
// negative for small θ — flagged by the companion predicate, never clamped
double divergence_log_exponent(const SemiNormParams& prm);
bool divergence_log_exponent_flagged(const SemiNormParams& prm);

struct SemiNormValue {
    double value = 0.0;
    double arg_h = 0.0;  // maximizing kernel scale
};

// sup over the h-grid of |log h|^{−θ} Σ_{i,j} K^h(x̃_i−x̃_j)|u_i−u_j|^p π_iπ_j,
// pairs truncated at separation 2 via a bucket index
SemiNormValue discrete_seminorm(const std::vector<Vec2>& coords, const std::vector<double>& vol,
                                const CellValues& u, const SemiNormParams& prm, int dim = 2);
SemiNormValue discrete_seminorm(const GeneralMesh& mesh, const CellValues& u,
                                const SemiNormParams& prm, const VirtualCoordinates& coords);
// barycenter coordinates
SemiNormValue discrete_seminorm(const GeneralMesh& mesh, const CellValues& u,
                                const SemiNormParams& prm);

// ‖u° − K̄^h⋆u°‖_{L^p}^p on a midpoint sampling grid over `region` (default:
// the mesh domain), where u° is the piecewise-constant extension of u (polygon
// cells when available, nearest barycenter otherwise) and K̄^h is the kernel
// normalized to unit mass on the same convolution rule. p = inf gives the sup.
// Rejects sampling grids coarser than δx/2.
double mollification_gap(const GeneralMesh& mesh, const CellValues& u, double h, double p,
                         double sample_spacing, std::optional<Box> region = {});

struct EquivalenceReport {
    double ratio = 1.0;   // semi-norm with coords1 over semi-norm with coords2
    double drift1 = 0.0;  // max_i |coords1_i − barycenter_i|
    double drift2 = 0.0;
};

// rejects when either coordinate drift reaches 1/16
EquivalenceReport coordinate_equivalence_ratio(const GeneralMesh& mesh, const CellValues& u,
                                               const SemiNormParams& prm,
                                               const VirtualCoordinates& coords1,
                                               const VirtualCoordinates& coords2);

// Σ_{i≠j, |x_i−x_j| ≤ 1} |u_i−u_j| π_iπ_j / |x_i−x_j|^{dim+s}; s ∈ (0,1)
double fractional_sobolev(const std::vector<Vec2>& coords, const std::vector<double>& vol,
                          const CellValues& u, double s, int dim = 2);
double fractional_sobolev(const GeneralMesh& mesh, const CellValues& u, double s);

}  // namespace pum
