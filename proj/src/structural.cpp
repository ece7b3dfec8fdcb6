#include "pum/structural.hpp"

#include <algorithm>
#include <cmath>

namespace pum {

StructuralReport validate_structural(const GeneralMesh& mesh) {
    StructuralReport r;
    const int nc = static_cast<int>(mesh.cell_count());
    const double dx = mesh.dx;
    r.diam_ratio_min = 1e300;
    r.volume_ratio_min = 1e300;
    double dmax = 0.0;  // same diameter notion in numerator and denominator
    for (int i = 0; i < nc; ++i) dmax = std::max(dmax, mesh.support[i].diameter());
    for (int i = 0; i < nc; ++i) {
        const double d = mesh.support[i].diameter() / dmax;
        r.diam_ratio_min = std::min(r.diam_ratio_min, d);
        r.diam_ratio_max = std::max(r.diam_ratio_max, d);
        const double v = mesh.pi[i] / (dx * dx);
        r.volume_ratio_min = std::min(r.volume_ratio_min, v);
        r.volume_ratio_max = std::max(r.volume_ratio_max, v);
    }
    for (size_t e = 0; e < mesh.edges.size(); ++e)
        for (const auto& qp : mesh.face_quad(static_cast<int>(e), 0))
            r.n_sup_times_dx =
                std::max(r.n_sup_times_dx, dx * norm(mesh.face_n(static_cast<int>(e), qp.x)));
    // overlap count: δx-balls centered at cell barycenters (scale-invariant
    // centers, so refinement of a periodic mesh reproduces the count)
    for (int i = 0; i < nc; ++i) {
        if (!mesh.meets_domain[i]) continue;
        const Vec2 c = mesh.barycenter[i];
        const Box ball{{c.x - dx, c.y - dx}, {c.x + dx, c.y + dx}};
        int count = 0;
        for (int j : mesh.cells_overlapping(ball)) {
            // keep only cells whose support box meets the actual disc
            const Box& s = mesh.support[j];
            const Vec2 p{std::clamp(c.x, s.lo.x, s.hi.x), std::clamp(c.y, s.lo.y, s.hi.y)};
            if (dist(p, c) <= dx * (1.0 - 1e-12)) ++count;
        }
        r.max_cells_per_ball = std::max(r.max_cells_per_ball, count);
    }
    return r;
}

}  // namespace pum
