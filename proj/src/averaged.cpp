#include "pum/averaged.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pum {

int AveragedField::box_of(Vec2 x) const {
    const Box dom = mesh->domain;
    int ix = static_cast<int>(std::floor((x.x - dom.lo.x) / eta));
    int iy = static_cast<int>(std::floor((x.y - dom.lo.y) / eta));
    ix = std::clamp(ix, 0, nx - 1);
    iy = std::clamp(iy, 0, ny - 1);
    return iy * nx + ix;
}

double AveragedField::psi(int k, Vec2 x) const {
    double s = 0.0;
    for (int i : box_cells[k]) s += mesh->chi(i, x);
    return s;
}

Vec2 AveragedField::value(double t, Vec2 x) const {
    int l = static_cast<int>(std::floor(t / tau));
    l = std::clamp(l, 0, n_slabs - 1);
    return bbar[l][box_of(x)];
}

AveragedField average_field(const VectorField& b, const GeneralMesh& mesh, double T, double tau,
                            double eta, const QuadratureSpec& spec) {
    if (!(T > 0.0) || !(tau > 0.0)) throw std::invalid_argument("T and tau must be positive");
    if (eta < 8.0 * mesh.dx)
        throw std::invalid_argument("space scale eta must be at least 8 times dx");
    const int n_slabs = static_cast<int>(std::round(T / tau));
    if (n_slabs < 1 || std::abs(n_slabs * tau - T) > 1e-9 * T)
        throw std::invalid_argument("tau must divide T");

    AveragedField av;
    av.mesh = &mesh;
    av.T = T;
    av.tau = tau;
    av.eta = eta;
    av.n_slabs = n_slabs;
    const Vec2 sz = mesh.domain.size();
    av.nx = std::max(1, static_cast<int>(std::ceil(sz.x / eta - 1e-12)));
    av.ny = std::max(1, static_cast<int>(std::ceil(sz.y / eta - 1e-12)));

    // every cell goes to exactly one box, so the ψ_k add up to the full
    // partition of unity on Ω
    av.box_cells.assign(av.nx * av.ny, {});
    for (size_t i = 0; i < mesh.cell_count(); ++i)
        av.box_cells[av.box_of(mesh.barycenter[i])].push_back(static_cast<int>(i));

    std::vector<int> box_of_cell(mesh.cell_count());
    for (size_t k = 0; k < av.box_cells.size(); ++k)
        for (int i : av.box_cells[k]) box_of_cell[i] = static_cast<int>(k);
    av.boundary.assign(av.box_cells.size(), {});
    for (size_t k = 0; k < av.box_cells.size(); ++k)
        for (int i : av.box_cells[k])
            for (int j : mesh.nbr[i])
                if (box_of_cell[j] != static_cast<int>(k)) {
                    av.boundary[k].push_back(i);
                    break;
                }

    const Quad1D tq = gauss_legendre(8);
    av.bbar.assign(n_slabs, std::vector<Vec2>(av.box_cells.size(), Vec2{0, 0}));
    for (size_t k = 0; k < av.box_cells.size(); ++k) {
        if (av.box_cells[k].empty()) continue;
        double mass = 0.0;
        for (int i : av.box_cells[k]) mass += mesh.pi[i];
        // cache the spatial rule for the box once; reuse at every time node
        std::vector<QuadPoint> pts;
        for (int i : av.box_cells[k])
            for (const QuadPoint& q : mesh.cell_quad(i, spec.level)) pts.push_back(q);
        for (int l = 0; l < n_slabs; ++l) {
            Vec2 acc{0, 0};
            for (size_t m = 0; m < tq.nodes.size(); ++m) {
                const double t = (l + tq.nodes[m]) * tau;
                Vec2 sp{0, 0};
                for (const QuadPoint& q : pts) sp += b.value(q.x, t) * q.w;
                acc += sp * tq.weights[m];
            }
            av.bbar[l][k] = acc / mass;
        }
    }
    return av;
}

PartitionChoice partition_parameters(double dx, double s, double p, double q, double m_beta,
                                     double m_gamma, double T, double domain_size) {
    if (!(dx > 0.0) || !(T > 0.0) || !(domain_size > 0.0))
        throw std::invalid_argument("dx, T and the domain size must be positive");
    if (!(p >= 1.0) || !(q > p)) throw std::invalid_argument("exponents must satisfy 1 <= p < q");
    if (!(s > 0.0) || !(s <= 1.0)) throw std::invalid_argument("order s must lie in (0, 1]");
    if (!(m_gamma > 0.0) || m_beta < 0.0)
        throw std::invalid_argument("drift constants must be positive");

    PartitionChoice ch;
    const double alpha = 1.0 / p - (std::isinf(q) ? 0.0 : 1.0 / q);
    ch.eta = std::pow(dx, alpha / (1.0 + alpha));
    if (ch.eta < 8.0 * dx) {
        ch.eta = 8.0 * dx;
        ch.eta_clamped = true;
    }
    if (ch.eta > domain_size)
        throw std::invalid_argument("no feasible space scale: 8 dx exceeds the domain");

    ch.tau = std::pow(dx * m_beta / m_gamma, 1.0 / (1.0 + s));
    if (!(ch.tau > 0.0) || ch.tau > T) {
        ch.tau = T;
        ch.tau_clamped = true;
    } else {
        // snap to a divisor of T so the slabs tile [0, T] exactly
        const double snapped = T / std::ceil(T / ch.tau - 1e-12);
        if (std::abs(snapped - ch.tau) > 1e-12 * T) ch.tau_clamped = true;
        ch.tau = snapped;
    }
    return ch;
}

}  // namespace pum
