#include "pum/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pum {

TriangleField::TriangleField(const HatMesh& mesh, std::vector<Vec2> per_tri)
    : mesh_(&mesh), per_tri_(std::move(per_tri)) {
    if (per_tri_.size() != mesh.triangulation().triangles.size())
        throw std::invalid_argument("per-triangle values do not match the triangulation");
}

Vec2 TriangleField::value(Vec2 x, double) const {
    const int t = mesh_->locate(x);
    return t < 0 ? Vec2{0, 0} : per_tri_[t];
}

namespace {

CellValues apply_g(const std::function<double(double)>& g, const CellValues& u) {
    CellValues out(u.size());
    for (size_t i = 0; i < u.size(); ++i) out[i] = g(u[i]);
    return out;
}

// solve the potential for the current density and rebuild the face
// coefficients; records div_sup over the interior cells
FaceCoeffs refresh(const P1Solver& fem, CoupledState& s, const std::function<double(double)>& g,
                   const QuadratureSpec& quad) {
    const PoissonSolution sol = fem.solve(apply_g(g, s.state.u));
    s.potential = sol.phi;
    s.b_tri = sol.grad;
    const FaceCoeffs a =
        project_to_face(fem.mesh(), TriangleField(fem.mesh(), sol.grad), s.state.t, quad);
    const CellValues d = discrete_divergence(fem.mesh(), a);
    s.div_sup = 0.0;
    for (double v : d) s.div_sup = std::max(s.div_sup, std::abs(v));
    return a;
}

}  // namespace

CoupledState coupled_init(const P1Solver& fem, CellValues u0,
                          const std::function<double(double)>& g) {
    if (u0.size() != fem.mesh().cell_count())
        throw std::invalid_argument("initial density does not match the mesh");
    if (std::abs(g(0.0)) > 1e-12)
        throw std::invalid_argument("nonlinearity must vanish at zero");

    // concavity spot check over the observed value range (warning only)
    double lo = 0.0, hi = 0.0;
    for (double v : u0) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi > lo) {
        bool warned = false;
        for (int k = 0; k < 32 && !warned; ++k) {
            const double a = lo + (hi - lo) * k / 32.0;
            const double b = lo + (hi - lo) * (k + 2) / 32.0;
            const double mid = 0.5 * (a + b);
            if (g(mid) < 0.5 * (g(a) + g(b)) - 1e-12 * std::max(1.0, std::abs(g(mid)))) {
                std::fprintf(stderr, "warning: nonlinearity fails a concavity spot check near %g\n",
                             mid);
                warned = true;
            }
        }
    }

    CoupledState s;
    s.state.u = std::move(u0);
    for (size_t i = 0; i < fem.mesh().cell_count(); ++i)
        if (!fem.mesh().interior[i]) s.state.u[i] = 0.0;
    refresh(fem, s, g, QuadratureSpec{});
    return s;
}

CoupledState coupled_step(const P1Solver& fem, CoupledState s,
                          const std::function<double(double)>& g, double t_target,
                          const CoupledOptions& opt) {
    const GeneralMesh& mesh = fem.mesh();
    if (t_target <= s.state.t + 1e-14) return s;

    const FaceCoeffs a0 = project_to_face(mesh, TriangleField(fem.mesh(), s.b_tri), s.state.t,
                                          opt.quad);
    const double dt_max = cfl_dt(mesh, a0, opt.stepper.cfl);
    double dt;
    if (opt.stepper.fixed_dt > 0.0) {
        if (opt.stepper.fixed_dt > dt_max)
            throw std::invalid_argument("fixed time step violates the stability bound");
        dt = std::min(opt.stepper.fixed_dt, t_target - s.state.t);
    } else {
        dt = std::min(std::isfinite(dt_max) ? dt_max : t_target - s.state.t,
                      t_target - s.state.t);
    }

    auto axpy = [](CellValues y, double c, const CellValues& x) {
        for (size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
        return y;
    };
    // stage coefficients: frozen by default, re-solved from the stage density
    // in stage-exact mode
    auto stage = [&](const CellValues& u) -> RhsResult {
        if (!opt.stage_exact) return assemble_rhs(mesh, a0, u);
        const PoissonSolution sol = fem.solve(apply_g(g, u));
        const FaceCoeffs a =
            project_to_face(mesh, TriangleField(fem.mesh(), sol.grad), s.state.t, opt.quad);
        return assemble_rhs(mesh, a, u);
    };

    if (opt.stepper.method == StepperSpec::Method::Euler) {
        const RhsResult k = stage(s.state.u);
        s.state.u = axpy(std::move(s.state.u), dt, k.dudt);
        s.state.leaked += dt * (-k.leak.total);
    } else {
        const RhsResult k1 = stage(s.state.u);
        const RhsResult k2 = stage(axpy(s.state.u, dt / 2, k1.dudt));
        const RhsResult k3 = stage(axpy(s.state.u, dt / 2, k2.dudt));
        const RhsResult k4 = stage(axpy(s.state.u, dt, k3.dudt));
        for (size_t i = 0; i < s.state.u.size(); ++i)
            s.state.u[i] += dt / 6 * (k1.dudt[i] + 2 * k2.dudt[i] + 2 * k3.dudt[i] + k4.dudt[i]);
        s.state.leaked +=
            dt / 6 * (-k1.leak.total - 2 * k2.leak.total - 2 * k3.leak.total - k4.leak.total);
    }
    s.state.t += dt;
    refresh(fem, s, g, opt.quad);
    return s;
}

std::vector<CoupledState> coupled_run(const P1Solver& fem, CellValues u0,
                                      const std::function<double(double)>& g,
                                      const std::vector<double>& output_times,
                                      const CoupledOptions& opt) {
    CoupledState s = coupled_init(fem, std::move(u0), g);
    std::vector<CoupledState> out;
    for (double t_out : output_times) {
        if (t_out < s.state.t - 1e-14)
            throw std::invalid_argument("output times must be ascending");
        while (s.state.t < t_out - 1e-14) s = coupled_step(fem, s, g, t_out, opt);
        s.state.t = t_out;
        out.push_back(s);
    }
    return out;
}

LeakTrendReport leak_bound_check(const std::vector<double>& dxs, const std::vector<double>& leaks,
                                 double L_boundary, double M_field, double T) {
    if (dxs.size() != leaks.size()) throw std::invalid_argument("mismatched refinement sequence");
    LeakTrendReport rep;
    rep.lambda = 0.5 * (L_boundary - M_field * T);
    if (!(rep.lambda > 0.0)) {
        rep.skipped = true;
        rep.note = "horizon too long for the support margin; no decay guaranteed";
        return rep;
    }
    // least squares of log(leak) against 1/δx, ignoring exact zeros (already
    // below the decay bound at any rate)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t k = 0; k < dxs.size(); ++k) {
        if (!(dxs[k] > 0.0)) throw std::invalid_argument("discretization sizes must be positive");
        if (leaks[k] <= 0.0) continue;
        const double x = 1.0 / dxs[k], y = std::log(leaks[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) {
        rep.note = "fewer than two nonzero leaks; decay consistent with the bound";
        return rep;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.note = rep.slope < 0.0 ? "leak decays with refinement" : "leak does not decay";
    return rep;
}

}  // namespace pum
