#pragma once

// Interaction kernel K^h(x) = φ(|x|)/(|x|+h)^d: a fixed-support pair weight
// whose strength near zero separation is regularized by the scale h. The
// cutoff φ equals 1 on [0,1], vanishes beyond 2, and is C² in between.

#include "pum/geom.hpp"

namespace pum {

// quintic smoothstep cutoff: 1 for r ≤ 1, 0 for r ≥ 2, monotone C² between
double kernel_cutoff(double r);

struct KernelSpec {
    double h = 0.1;  // must lie in (0, 1/2)
};

// K^h at separation r (radial profile); throws for h outside (0, 1/2)
double kernel_eval(const KernelSpec& k, double r, int dim = 2);
inline double kernel_eval(const KernelSpec& k, Vec2 x) { return kernel_eval(k, norm(x)); }

// ∫ K^h over R^dim (dim ∈ {1, 2}), composite Gauss on geometric panels
double kernel_l1(const KernelSpec& k, int dim = 2);

}  // namespace pum
