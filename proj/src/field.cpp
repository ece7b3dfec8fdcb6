#include "pum/field.hpp"

#include <cmath>
#include <random>

namespace pum {

RoughField::RoughField(int max_mode, double decay, double amplitude, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int kx = -max_mode; kx <= max_mode; ++kx)
        for (int ky = -max_mode; ky <= max_mode; ++ky) {
            if (kx == 0 && ky == 0) continue;
            const double kn = std::sqrt(static_cast<double>(kx * kx + ky * ky));
            const double amp = amplitude / std::pow(kn, decay);
            const double th = 2 * M_PI * u(rng);
            const double ph = 2 * M_PI * u(rng);
            modes_.push_back({Vec2{2 * M_PI * kx, 2 * M_PI * ky},
                              Vec2{std::cos(th), std::sin(th)} * amp, ph});
        }
}

Vec2 RoughField::value(Vec2 x, double) const {
    Vec2 v{0, 0};
    for (const Mode& m : modes_) v += m.dir * std::cos(dot(m.k, x) + m.phase);
    return v;
}

double RoughField::divergence(Vec2 x, double) const {
    double d = 0.0;
    for (const Mode& m : modes_) d -= dot(m.k, m.dir) * std::sin(dot(m.k, x) + m.phase);
    return d;
}

}  // namespace pum
