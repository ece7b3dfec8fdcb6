#include "pum/periodic.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace pum {

namespace {

long long pack(int m1, int m2, int slot) {
    return ((static_cast<long long>(m1) + (1 << 20)) << 42) +
           ((static_cast<long long>(m2) + (1 << 20)) << 21) + slot;
}

}  // namespace

int PeriodicStructure::cell_at(int m1, int m2, int slot) const {
    auto it = index_.find(pack(m1, m2, slot));
    return it == index_.end() ? -1 : it->second;
}

PeriodicStructure declare_periodic(const GeneralMesh& mesh, std::array<Vec2, 2> lattice,
                                   std::vector<std::array<int, 3>> sigma, int pattern_size,
                                   unsigned seed) {
    const int nc = static_cast<int>(mesh.cell_count());
    if (static_cast<int>(sigma.size()) != nc)
        throw std::invalid_argument("index map size does not match the cell count");
    if (std::abs(cross(lattice[0], lattice[1])) < 1e-14)
        throw std::invalid_argument("lattice vectors are linearly dependent");

    PeriodicStructure ps;
    ps.mesh = &mesh;
    ps.lattice = lattice;
    ps.pattern_size = pattern_size;
    ps.sigma = std::move(sigma);
    for (int i = 0; i < nc; ++i) {
        const auto& s = ps.sigma[i];
        if (s[2] < 0 || s[2] >= pattern_size)
            throw std::invalid_argument("pattern slot out of range at cell " + std::to_string(i));
        if (!ps.index_.emplace(pack(s[0], s[1], s[2]), i).second)
            throw std::invalid_argument("index map collision at cell " + std::to_string(i));
    }

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> cell_pick(0, nc - 1);
    std::uniform_int_distribution<int> shift_pick(-2, 2);

    // translation consistency: χ_{[m](i)}(x + mL) = χ_i(x), same for n
    int checked = 0;
    for (int trial = 0; trial < 4000 && checked < 100; ++trial) {
        const int i = cell_pick(rng);
        const int m1 = shift_pick(rng), m2 = shift_pick(rng);
        const int j = ps.translate(i, m1, m2);
        if (j < 0) continue;
        const Box& s = mesh.support[i];
        const Vec2 x{s.lo.x + u01(rng) * (s.hi.x - s.lo.x),
                     s.lo.y + u01(rng) * (s.hi.y - s.lo.y)};
        const double ci = mesh.chi(i, x);
        const double cj = mesh.chi(j, x + ps.shift(m1, m2));
        if (std::abs(ci - cj) > 1e-12)
            throw std::invalid_argument("cell-function translation mismatch between cells " +
                                        std::to_string(i) + " and " + std::to_string(j));
        ++checked;
    }
    // face-function translation consistency
    checked = 0;
    const int ne = static_cast<int>(mesh.edges.size());
    std::uniform_int_distribution<int> edge_pick(0, ne - 1);
    for (int trial = 0; trial < 4000 && checked < 100 && ne > 0; ++trial) {
        const int e = edge_pick(rng);
        const int a = mesh.edges[e].a, b = mesh.edges[e].b;
        const int m1 = shift_pick(rng), m2 = shift_pick(rng);
        const int a2 = ps.translate(a, m1, m2), b2 = ps.translate(b, m1, m2);
        if (a2 < 0 || b2 < 0) continue;
        const int e2 = mesh.edge_of(a2, b2);
        if (e2 < 0)
            throw std::invalid_argument("edge between cells " + std::to_string(a) + "," +
                                        std::to_string(b) + " has no translate");
        const Box& s = mesh.support[a];
        const Vec2 x{s.lo.x + u01(rng) * (s.hi.x - s.lo.x),
                     s.lo.y + u01(rng) * (s.hi.y - s.lo.y)};
        Vec2 n1 = mesh.face_n(e, x);
        if (mesh.edges[e].a != a) n1 = -n1;
        Vec2 n2 = mesh.face_n(e2, x + ps.shift(m1, m2));
        if (mesh.edges[e2].a != a2) n2 = -n2;
        if (dist(n1, n2) > 1e-10)
            throw std::invalid_argument("face-function translation mismatch on edge " +
                                        std::to_string(e));
        ++checked;
    }

    // tiling sum over Ω
    const Box& om = mesh.domain;
    for (int jy = 0; jy < 24; ++jy)
        for (int jx = 0; jx < 24; ++jx) {
            const Vec2 x{om.lo.x + (jx + u01(rng)) / 24.0 * om.size().x,
                         om.lo.y + (jy + u01(rng)) / 24.0 * om.size().y};
            double sum = 0.0;
            for (int i : mesh.cells_near(x)) sum += mesh.chi(i, x);
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("tiling sum violated at (" + std::to_string(x.x) +
                                            ", " + std::to_string(x.y) +
                                            "): sum = " + std::to_string(sum));
        }
    return ps;
}

PeriodicStructure declare_periodic(const GeneralMesh& mesh, unsigned seed) {
    if (!mesh.periodic_hint)
        throw std::invalid_argument("mesh carries no periodic hint");
    const PeriodicHint& h = *mesh.periodic_hint;
    return declare_periodic(mesh, h.lattice, h.sigma, h.pattern_size, seed);
}

}  // namespace pum
