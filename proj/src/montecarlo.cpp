#include "pum/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pum/rng.hpp"

namespace pum {

MonteCarloResult monte_carlo_oracle(const GeneralMesh& mesh, const FaceCoeffs& a,
                                    const CellValues& u0, double t, long walkers, unsigned seed,
                                    int workers) {
    if (walkers <= 0) throw std::invalid_argument("walker count must be positive");
    const size_t nc = mesh.cell_count();

    // initial distribution ∝ u_i π_i on interior cells
    std::vector<double> cdf(nc, 0.0);
    double mass = 0.0;
    for (size_t i = 0; i < nc; ++i) {
        double w = 0.0;
        if (mesh.interior[i]) {
            if (u0[i] < 0.0) throw std::invalid_argument("initial density must be nonnegative");
            w = u0[i] * mesh.pi[i];
        }
        mass += w;
        cdf[i] = mass;
    }
    if (mass <= 0.0) throw std::invalid_argument("initial density carries no mass");

    // per-cell jump table: targets and outgoing rates a_{j,i}/π_i
    struct Jump {
        int target;
        double cum_rate;
    };
    std::vector<std::vector<Jump>> jumps(nc);
    std::vector<double> total_rate(nc, 0.0);
    for (size_t i = 0; i < nc; ++i) {
        if (!mesh.interior[i]) continue;
        double cum = 0.0;
        for (int e : mesh.cell_edges[i]) {
            const bool is_a = mesh.edges[e].a == static_cast<int>(i);
            const int j = is_a ? mesh.edges[e].b : mesh.edges[e].a;
            const double rate = (is_a ? a.into_b[e] : a.into_a[e]) / mesh.pi[i];
            if (rate <= 0.0) continue;
            cum += rate;
            jumps[i].push_back({j, cum});
        }
        total_rate[i] = cum;
    }

    const int nw = std::max(workers, 1);
    std::vector<std::vector<long>> counts(nw, std::vector<long>(nc, 0));
    std::vector<long> absorbed(nw, 0);

    auto run = [&](int w) {
        const long lo = walkers * w / nw, hi = walkers * (w + 1) / nw;
        for (long k = lo; k < hi; ++k) {
            auto rng = stream_rng(seed, static_cast<uint64_t>(k));
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            // sample start cell from the cdf
            const double r = u01(rng) * mass;
            int cell = static_cast<int>(
                std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
            double clock = 0.0;
            bool alive = true;
            while (alive) {
                const double rate = total_rate[cell];
                if (rate <= 0.0) break;  // nothing leaves this cell
                clock += -std::log(1.0 - u01(rng)) / rate;
                if (clock >= t) break;
                const double pick = u01(rng) * rate;
                const auto& js = jumps[cell];
                size_t lo2 = 0, hi2 = js.size();
                while (lo2 + 1 < hi2) {
                    const size_t mid = (lo2 + hi2) / 2;
                    (js[mid - 1].cum_rate <= pick ? lo2 : hi2) = mid;
                }
                cell = js[lo2].target;
                if (!mesh.interior[cell]) {
                    alive = false;
                    ++absorbed[w];
                }
            }
            if (alive) ++counts[w][cell];
        }
    };
    if (nw == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }

    MonteCarloResult res;
    res.u.assign(nc, 0.0);
    res.stderr_u.assign(nc, 0.0);
    long nabs = 0;
    for (int w = 0; w < nw; ++w) nabs += absorbed[w];
    const double n = static_cast<double>(walkers);
    for (size_t i = 0; i < nc; ++i) {
        long c = 0;
        for (int w = 0; w < nw; ++w) c += counts[w][i];
        const double p = c / n;
        res.u[i] = p * mass / mesh.pi[i];
        res.stderr_u[i] = std::sqrt(std::max(p * (1.0 - p), 0.0) / n) * mass / mesh.pi[i];
    }
    const double pl = nabs / n;
    res.leaked = pl * mass;
    res.leaked_stderr = std::sqrt(std::max(pl * (1.0 - pl), 0.0) / n) * mass;
    return res;
}

}  // namespace pum
