#include "pum/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pum {

RhsResult assemble_rhs(const GeneralMesh& mesh, const FaceCoeffs& a, const CellValues& u) {
    const size_t nc = mesh.cell_count();
    if (u.size() != nc || a.into_a.size() != mesh.edges.size())
        throw std::invalid_argument("state/coefficients do not match the mesh");
    RhsResult r;
    r.dudt.assign(nc, 0.0);
    r.leak.R.assign(nc, 0.0);
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const int ca = mesh.edges[e].a, cb = mesh.edges[e].b;
        const double flow_ab = a.into_b[e] * u[ca];  // mass/time a→b
        const double flow_ba = a.into_a[e] * u[cb];
        r.dudt[ca] += flow_ba - flow_ab;
        r.dudt[cb] += flow_ab - flow_ba;
    }
    for (size_t i = 0; i < nc; ++i) {
        if (mesh.interior[i]) {
            r.dudt[i] /= mesh.pi[i];
        } else {
            // frozen cell: arriving mass is discarded — that is the leak;
            // with u = 0 here the accumulated net rate is pure inflow, so
            // R_i = −(1/π_i)·Σ_j a_{i,j} u_j
            r.leak.R[i] = -r.dudt[i] / mesh.pi[i];
            r.dudt[i] = 0.0;
        }
    }
    double total = 0.0;
    for (size_t i = 0; i < nc; ++i) total += r.leak.R[i] * mesh.pi[i];
    r.leak.total = total;
    return r;
}

double cfl_dt(const GeneralMesh& mesh, const FaceCoeffs& a, double cfl) {
    double dt = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        if (!mesh.interior[i]) continue;
        double outflow = 0.0;
        for (int e : mesh.cell_edges[i])
            outflow += (mesh.edges[e].a == static_cast<int>(i)) ? a.into_b[e] : a.into_a[e];
        if (outflow > 0.0) dt = std::min(dt, cfl * mesh.pi[i] / outflow);
    }
    return dt;
}

namespace {

void axpy(CellValues& y, double s, const CellValues& x) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace

std::vector<SchemeState> integrate(const GeneralMesh& mesh, SchemeState state,
                                   const std::function<FaceCoeffs(double)>& coeffs,
                                   const std::vector<double>& output_times,
                                   const StepperSpec& spec) {
    for (size_t i = 0; i < mesh.cell_count(); ++i)
        if (!mesh.interior[i]) state.u[i] = 0.0;

    std::vector<SchemeState> out;
    for (double t_out : output_times) {
        if (t_out < state.t - 1e-14)
            throw std::invalid_argument("output times must be ascending");
        while (state.t < t_out - 1e-14) {
            const FaceCoeffs a_now = coeffs(state.t);
            const double dt_max = cfl_dt(mesh, a_now, spec.cfl);
            double dt;
            if (spec.fixed_dt > 0.0) {
                if (spec.fixed_dt > dt_max) {
                    // report the limiting cell
                    size_t worst = 0;
                    double best = std::numeric_limits<double>::infinity();
                    for (size_t i = 0; i < mesh.cell_count(); ++i) {
                        if (!mesh.interior[i]) continue;
                        double outflow = 0.0;
                        for (int e : mesh.cell_edges[i])
                            outflow += (mesh.edges[e].a == static_cast<int>(i)) ? a_now.into_b[e]
                                                                                : a_now.into_a[e];
                        if (outflow > 0.0 && spec.cfl * mesh.pi[i] / outflow < best) {
                            best = spec.cfl * mesh.pi[i] / outflow;
                            worst = i;
                        }
                    }
                    throw std::invalid_argument("fixed time step violates the stability bound "
                                                "at cell " +
                                                std::to_string(worst));
                }
                dt = std::min(spec.fixed_dt, t_out - state.t);
            } else {
                const double span = t_out - state.t;
                const int steps =
                    std::isfinite(dt_max) ? static_cast<int>(std::ceil(span / dt_max)) : 1;
                dt = span / std::max(steps, 1);
            }

            if (spec.method == StepperSpec::Method::Euler) {
                const RhsResult k = assemble_rhs(mesh, a_now, state.u);
                axpy(state.u, dt, k.dudt);
                state.leaked += dt * (-k.leak.total);
                for (size_t i = 0; i < state.u.size(); ++i)
                    if (mesh.interior[i] && state.u[i] < -1e-12)
                        throw std::logic_error("positivity lost at cell " + std::to_string(i));
            } else {
                const RhsResult k1 = assemble_rhs(mesh, a_now, state.u);
                CellValues u2 = state.u;
                axpy(u2, dt / 2, k1.dudt);
                const FaceCoeffs a_half = coeffs(state.t + dt / 2);
                const RhsResult k2 = assemble_rhs(mesh, a_half, u2);
                CellValues u3 = state.u;
                axpy(u3, dt / 2, k2.dudt);
                const RhsResult k3 = assemble_rhs(mesh, a_half, u3);
                CellValues u4 = state.u;
                axpy(u4, dt, k3.dudt);
                const RhsResult k4 = assemble_rhs(mesh, coeffs(state.t + dt), u4);
                for (size_t i = 0; i < state.u.size(); ++i)
                    state.u[i] += dt / 6 *
                                  (k1.dudt[i] + 2 * k2.dudt[i] + 2 * k3.dudt[i] + k4.dudt[i]);
                state.leaked += dt / 6 *
                                (-k1.leak.total - 2 * k2.leak.total - 2 * k3.leak.total -
                                 k4.leak.total);
            }
            state.t += dt;
        }
        state.t = t_out;
        out.push_back(state);
    }
    return out;
}

}  // namespace pum
