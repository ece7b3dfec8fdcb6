#include "pum/kruzkov.hpp"

#include <cmath>
#include <stdexcept>

#include "pum/scheme.hpp"

namespace pum {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

KruzkovReport kruzkov_decomposition(const GeneralMesh& mesh, const FaceCoeffs& a,
                                    const CellValues& u, const KernelSpec& kernel,
                                    const VirtualCoordinates& coords) {
    const size_t n = mesh.cell_count();
    if (u.size() != n || coords.size() != n || a.into_a.size() != mesh.edges.size())
        throw std::invalid_argument("state/coefficients/coordinates do not match the mesh");

    // kernel matrix on the coordinates (desk-scale meshes: dense is fine)
    std::vector<std::vector<double>> K(n, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            K[i][j] = K[j][i] = kernel_eval(kernel, dist(coords[i], coords[j]));

    // coefficient imbalance on every cell (no interior mask here: the leak
    // ledger accounts for the frozen-cell correction separately)
    std::vector<double> div(n, 0.0);
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const int ca = mesh.edges[e].a, cb = mesh.edges[e].b;
        div[ca] += a.into_b[e] - a.into_a[e];  // outflow − inflow at a
        div[cb] += a.into_a[e] - a.into_b[e];
    }
    for (size_t i = 0; i < n; ++i) div[i] /= mesh.pi[i];

    const RhsResult rhs = assemble_rhs(mesh, a, u);

    KruzkovReport rep;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            rep.double_sum += 2.0 * K[i][j] * std::abs(u[i] - u[j]) * mesh.pi[i] * mesh.pi[j];

    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const double s = sgn(u[i] - u[j]);
            if (s == 0.0) continue;
            rep.divergence += -2.0 * K[i][j] * s * div[i] * u[j] * mesh.pi[i] * mesh.pi[j];
            rep.leak += 2.0 * K[i][j] * s * rhs.leak.R[i] * mesh.pi[i] * mesh.pi[j];
        }

    // directed neighbor pairs i → i′ (both orientations of every edge)
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const int ca = mesh.edges[e].a, cb = mesh.edges[e].b;
        const int pair_i[2] = {ca, cb}, pair_ip[2] = {cb, ca};
        const double out_coeff[2] = {a.into_b[e], a.into_a[e]};  // a_{i′,i}: i → i′
        const double in_coeff[2] = {a.into_a[e], a.into_b[e]};   // a_{i,i′}: i′ → i
        for (int d = 0; d < 2; ++d) {
            const int i = pair_i[d], ip = pair_ip[d];
            for (size_t j = 0; j < n; ++j) {
                if (out_coeff[d] > 0.0)
                    rep.transport += 2.0 * (K[ip][j] - K[i][j]) * out_coeff[d] *
                                     std::abs(u[i] - u[j]) * mesh.pi[j];
                if (in_coeff[d] > 0.0) {
                    const double ds = sgn(u[ip] - u[j]) - sgn(u[i] - u[j]);
                    if (ds != 0.0)
                        rep.sign_defect +=
                            K[i][j] * ds * in_coeff[d] * (u[j] - u[ip]) * mesh.pi[j];
                }
            }
        }
    }
    return rep;
}

}  // namespace pum
