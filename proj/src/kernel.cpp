#include "pum/kernel.hpp"

#include <stdexcept>

namespace pum {

double kernel_cutoff(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double t = r - 1.0;
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

namespace {

void check(const KernelSpec& k) {
    // closed upper endpoint so the scale grid's top value 1/2 is usable
    if (!(k.h > 0.0) || !(k.h <= 0.5))
        throw std::invalid_argument("kernel scale h must lie in (0, 1/2]");
}

}  // namespace

double kernel_eval(const KernelSpec& k, double r, int dim) {
    check(k);
    const double phi = kernel_cutoff(r);
    if (phi == 0.0) return 0.0;
    double d = r + k.h;
    double denom = d;
    for (int i = 1; i < dim; ++i) denom *= d;
    return phi / denom;
}

double kernel_l1(const KernelSpec& k, int dim) {
    check(k);
    if (dim != 1 && dim != 2) throw std::invalid_argument("kernel_l1: dim must be 1 or 2");
    // panels refine geometrically toward 0 where the profile peaks at scale h
    std::vector<double> cuts{0.0};
    for (double c = k.h; c < 2.0; c *= 2.0) cuts.push_back(c);
    cuts.push_back(2.0);
    const Quad1D q = gauss_legendre(16);
    double total = 0.0;
    for (size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double a = cuts[p], b = cuts[p + 1];
        for (size_t n = 0; n < q.nodes.size(); ++n) {
            const double r = a + (b - a) * q.nodes[n];
            const double jac = (dim == 2) ? 2.0 * 3.14159265358979323846 * r : 2.0;
            total += (b - a) * q.weights[n] * jac * kernel_eval(k, r, dim);
        }
    }
    return total;
}

}  // namespace pum
