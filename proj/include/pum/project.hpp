#pragma once

// Projection operators and discrete calculus: cell averages, upwind face
// coefficients (positive part inside or outside the integral), discrete
// divergence, and discrete L^p norms on cells and faces.

#include <functional>

#include "pum/field.hpp"
#include "pum/general_mesh.hpp"

namespace pum {

struct QuadratureSpec {
    int level = 1;     // refinement knob for cell/face rules
    unsigned seed = 0; // reserved for stochastic rules; fixed for determinism
};

// per-cell values; projection results vanish outside the interior index set
using CellValues = std::vector<double>;

struct FaceCoeffs {
    // aligned with mesh.edges: for edge e = (a,b),
    //   into_b[e] = transfer a→b  (coefficient indexed (b,a)),
    //   into_a[e] = transfer b→a  (coefficient indexed (a,b)).
    std::vector<double> into_a, into_b;
    double time = 0.0;
};

// (1/π_i)∫ f χ_i on interior cells, 0 elsewhere.
CellValues project_to_cell(const GeneralMesh& mesh,
                           const std::function<double(Vec2)>& f,
                           const QuadratureSpec& spec = {});
// cell averages on ALL cells (no interior mask): needed by the scheme's
// boundary terms and the virtual-coordinate residues
std::vector<double> cell_average(const GeneralMesh& mesh,
                                 const std::function<double(Vec2)>& f,
                                 const QuadratureSpec& spec = {});
std::vector<Vec2> cell_average_vec(const GeneralMesh& mesh, const VectorField& b, double t,
                                   const QuadratureSpec& spec = {});

// a = ∫ (b·n)⁺ per directed edge, on every edge of the mesh (the scheme's
// boundary-leak terms need the edges that cross out of the interior set).
// Closed forms are used when the field is spatially uniform (mollified faces)
// or constant per triangle (hat faces); otherwise both directions share one
// set of quadrature points.
FaceCoeffs project_to_face(const GeneralMesh& mesh, const VectorField& b, double t = 0.0,
                           const QuadratureSpec& spec = {});

// a = (∫ b·n)⁺: positive part outside the integral. Requires face functions of
// the form N·w with scalar w ≥ 0, i.e. mollified polygon meshes.
FaceCoeffs project_to_face_alt(const GeneralMesh& mesh, const VectorField& b, double t = 0.0,
                               const QuadratureSpec& spec = {});

// max over edges of |level vs level+1| coefficient change (self-estimate)
double face_projection_error_estimate(const GeneralMesh& mesh, const VectorField& b, double t,
                                      const QuadratureSpec& spec);

// D_k = (1/π_k)Σ_i(a_{i,k} − a_{k,i}) on interior cells, 0 elsewhere.
CellValues discrete_divergence(const GeneralMesh& mesh, const FaceCoeffs& a);

// (Σ_i |v_i|^p π_i)^{1/p} over interior cells; p = inf -> sup
double discrete_cell_norm(const GeneralMesh& mesh, const CellValues& v, double p);
// (Σ |a_{i,j}|^p)^{1/p} · δx^{2/p − 1} over interior directed edges
double discrete_face_norm(const GeneralMesh& mesh, const FaceCoeffs& a, double p);

}  // namespace pum
