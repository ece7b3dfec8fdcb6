#include "pum/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace pum {

// ============================================================================
// Parameters
// ============================================================================

std::vector<double> seminorm_h_grid(const SemiNormParams& prm) {
    if (!(prm.h0 > 0.0) || !(prm.h0 <= 0.5))
        throw std::invalid_argument("h0 must lie in (0, 1/2]");
    if (prm.h_count <= 0) throw std::invalid_argument("kernel-scale grid is empty");
    if (prm.p < 1.0) throw std::invalid_argument("increment exponent p must be >= 1");
    std::vector<double> grid;
    if (prm.h_count == 1 || prm.h0 == 0.5) {
        grid.push_back(prm.h0);
        return grid;
    }
    const double ratio = std::pow(0.5 / prm.h0, 1.0 / (prm.h_count - 1));
    for (int k = 0; k < prm.h_count; ++k) grid.push_back(prm.h0 * std::pow(ratio, k));
    grid.back() = 0.5;  // exact upper endpoint
    return grid;
}

double divergence_log_exponent(const SemiNormParams& prm) {
    return prm.p * (prm.theta - 1.0 / prm.p_star);
}

bool divergence_log_exponent_flagged(const SemiNormParams& prm) {
    return divergence_log_exponent(prm) < 0.0;
}

// ============================================================================
// Kernel double sum
// ============================================================================

namespace {

// unordered pairs with separation < 2, found through a bucket grid of pitch 2
struct PairData {
    double r;  // |x̃_i − x̃_j|
    double w;  // |u_i − u_j|^p π_i π_j
};

std::vector<PairData> collect_pairs(const std::vector<Vec2>& coords,
                                    const std::vector<double>& vol, const CellValues& u,
                                    double p) {
    const size_t n = coords.size();
    if (vol.size() != n || u.size() != n)
        throw std::invalid_argument("coordinate/volume/value sizes do not match");
    auto key = [](Vec2 x) {
        const long long kx = static_cast<long long>(std::floor(x.x / 2.0));
        const long long ky = static_cast<long long>(std::floor(x.y / 2.0));
        return (kx << 32) ^ (ky & 0xffffffffLL);
    };
    std::unordered_map<long long, std::vector<int>> buckets;
    for (size_t i = 0; i < n; ++i) buckets[key(coords[i])].push_back(static_cast<int>(i));

    std::vector<PairData> pairs;
    for (size_t i = 0; i < n; ++i) {
        const long long bx = static_cast<long long>(std::floor(coords[i].x / 2.0));
        const long long by = static_cast<long long>(std::floor(coords[i].y / 2.0));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                const auto it = buckets.find(((bx + dx) << 32) ^ ((by + dy) & 0xffffffffLL));
                if (it == buckets.end()) continue;
                for (int j : it->second) {
                    if (j <= static_cast<int>(i)) continue;
                    const double r = dist(coords[i], coords[j]);
                    if (r >= 2.0) continue;
                    const double du = std::abs(u[i] - u[j]);
                    if (du == 0.0) continue;
                    pairs.push_back({r, std::pow(du, p) * vol[i] * vol[j]});
                }
            }
    }
    return pairs;
}

}  // namespace

SemiNormValue discrete_seminorm(const std::vector<Vec2>& coords, const std::vector<double>& vol,
                                const CellValues& u, const SemiNormParams& prm, int dim) {
    const std::vector<double> grid = seminorm_h_grid(prm);
    const std::vector<PairData> pairs = collect_pairs(coords, vol, u, prm.p);
    SemiNormValue best;
    best.arg_h = grid.front();
    for (double h : grid) {
        const KernelSpec ker{h};
        double s = 0.0;
        for (const PairData& pd : pairs) s += 2.0 * kernel_eval(ker, pd.r, dim) * pd.w;
        const double v = std::pow(std::abs(std::log(h)), -prm.theta) * s;
        if (v > best.value) {
            best.value = v;
            best.arg_h = h;
        }
    }
    return best;
}

SemiNormValue discrete_seminorm(const GeneralMesh& mesh, const CellValues& u,
                                const SemiNormParams& prm, const VirtualCoordinates& coords) {
    return discrete_seminorm(coords, mesh.pi, u, prm, 2);
}

SemiNormValue discrete_seminorm(const GeneralMesh& mesh, const CellValues& u,
                                const SemiNormParams& prm) {
    return discrete_seminorm(mesh.barycenter, mesh.pi, u, prm, 2);
}

// ============================================================================
// Mollification gap
// ============================================================================

namespace {

bool point_in_convex(const std::vector<Vec2>& poly, Vec2 x) {
    for (size_t k = 0; k < poly.size(); ++k) {
        const Vec2 a = poly[k], b = poly[(k + 1) % poly.size()];
        if (cross(b - a, x - a) < -1e-12) return false;
    }
    return true;
}

// piecewise-constant extension of u: polygon cells when the mesh carries them,
// nearest barycenter otherwise; 0 outside every cell
class StepExtension {
  public:
    StepExtension(const GeneralMesh& mesh, const CellValues& u)
        : mesh_(mesh), u_(u), moll_(dynamic_cast<const MollifiedMesh*>(&mesh)) {}

    double operator()(Vec2 x) const {
        const std::vector<int> near = mesh_.cells_near(x);
        if (moll_) {
            for (int i : near)
                if (point_in_convex(moll_->polygon().cell_polygon(i), x)) return u_[i];
            return 0.0;
        }
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int i : near) {
            const double d = norm2(x - mesh_.barycenter[i]);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        if (best < 0) {
            for (size_t i = 0; i < mesh_.cell_count(); ++i) {
                const double d = norm2(x - mesh_.barycenter[i]);
                if (d < bd) {
                    bd = d;
                    best = static_cast<int>(i);
                }
            }
        }
        return best >= 0 ? u_[best] : 0.0;
    }

  private:
    const GeneralMesh& mesh_;
    const CellValues& u_;
    const MollifiedMesh* moll_;
};

}  // namespace

double mollification_gap(const GeneralMesh& mesh, const CellValues& u, double h, double p,
                         double sample_spacing, std::optional<Box> region) {
    if (!(sample_spacing > 0.0) || sample_spacing > mesh.dx / 2.0)
        throw std::invalid_argument("sampling grid must be at least as fine as dx/2");
    const KernelSpec ker{h};
    const Box reg = region.value_or(mesh.domain);
    const StepExtension ext(mesh, u);

    // fixed convolution offsets; weights renormalized on the rule itself so a
    // constant input reproduces exactly
    const std::vector<QuadPoint> rule = disc_rule({0, 0}, 2.0, 24, 48);
    std::vector<QuadPoint> kq;
    double wsum = 0.0;
    for (const QuadPoint& q : rule) {
        const double kw = q.w * kernel_eval(ker, q.x);
        if (kw > 0.0) {
            kq.push_back({q.x, kw});
            wsum += kw;
        }
    }
    for (QuadPoint& q : kq) q.w /= wsum;

    const int nx = std::max(1, static_cast<int>(std::ceil((reg.hi.x - reg.lo.x) / sample_spacing)));
    const int ny = std::max(1, static_cast<int>(std::ceil((reg.hi.y - reg.lo.y) / sample_spacing)));
    const double hx = (reg.hi.x - reg.lo.x) / nx, hy = (reg.hi.y - reg.lo.y) / ny;
    const bool sup_norm = std::isinf(p);
    double acc = 0.0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 x{reg.lo.x + (ix + 0.5) * hx, reg.lo.y + (iy + 0.5) * hy};
            double conv = 0.0;
            for (const QuadPoint& q : kq) conv += q.w * ext(x + q.x);
            const double diff = std::abs(ext(x) - conv);
            if (sup_norm)
                acc = std::max(acc, diff);
            else
                acc += std::pow(diff, p) * hx * hy;
        }
    return acc;
}

// ============================================================================
// Coordinate equivalence
// ============================================================================

EquivalenceReport coordinate_equivalence_ratio(const GeneralMesh& mesh, const CellValues& u,
                                               const SemiNormParams& prm,
                                               const VirtualCoordinates& coords1,
                                               const VirtualCoordinates& coords2) {
    if (coords1.size() != mesh.cell_count() || coords2.size() != mesh.cell_count())
        throw std::invalid_argument("coordinate sets do not match the mesh");
    EquivalenceReport rep;
    for (size_t i = 0; i < mesh.cell_count(); ++i) {
        rep.drift1 = std::max(rep.drift1, dist(coords1[i], mesh.barycenter[i]));
        rep.drift2 = std::max(rep.drift2, dist(coords2[i], mesh.barycenter[i]));
    }
    if (rep.drift1 >= 1.0 / 16 || rep.drift2 >= 1.0 / 16)
        throw std::invalid_argument("coordinate drift from barycenters reaches 1/16");
    const double v1 = discrete_seminorm(mesh, u, prm, coords1).value;
    const double v2 = discrete_seminorm(mesh, u, prm, coords2).value;
    rep.ratio = (v1 == v2) ? 1.0 : v1 / v2;
    return rep;
}

// ============================================================================
// Fractional difference quotient
// ============================================================================

double fractional_sobolev(const std::vector<Vec2>& coords, const std::vector<double>& vol,
                          const CellValues& u, double s, int dim) {
    if (!(s > 0.0) || !(s < 1.0)) throw std::invalid_argument("order s must lie in (0, 1)");
    const size_t n = coords.size();
    if (vol.size() != n || u.size() != n)
        throw std::invalid_argument("coordinate/volume/value sizes do not match");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const double r = dist(coords[i], coords[j]);
            if (r > 1.0 || r == 0.0) continue;
            const double du = std::abs(u[i] - u[j]);
            if (du == 0.0) continue;
            acc += 2.0 * du * vol[i] * vol[j] / std::pow(r, dim + s);
        }
    return acc;
}

double fractional_sobolev(const GeneralMesh& mesh, const CellValues& u, double s) {
    return fractional_sobolev(mesh.barycenter, mesh.pi, u, s, 2);
}

}  // namespace pum
