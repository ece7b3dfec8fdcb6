#include "pum/diffusion_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pum {

DiffusionMatrix block_decompose(Eigen::MatrixXd M, double tol) {
    const int n = static_cast<int>(M.rows());
    if (M.cols() != n || n == 0) throw std::invalid_argument("matrix must be square and nonempty");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && M(i, j) > tol * scale)
                throw std::invalid_argument("positive off-diagonal entry at (" +
                                            std::to_string(i) + ", " + std::to_string(j) + ")");
    for (int i = 0; i < n; ++i) {
        if (std::abs(M.row(i).sum()) > tol * scale)
            throw std::invalid_argument("row " + std::to_string(i) + " does not sum to zero");
        if (std::abs(M.col(i).sum()) > tol * scale)
            throw std::invalid_argument("column " + std::to_string(i) + " does not sum to zero");
    }

    DiffusionMatrix dm;
    dm.M = std::move(M);
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = nc;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j)
                if (comp[j] < 0 &&
                    std::abs(dm.M(i, j)) + std::abs(dm.M(j, i)) > tol * scale) {
                    comp[j] = nc;
                    stack.push_back(j);
                }
        }
        ++nc;
    }
    dm.blocks.assign(nc, {});
    for (int i = 0; i < n; ++i) dm.blocks[comp[i]].push_back(i);
    return dm;
}

Eigen::VectorXd solve_bounded(const DiffusionMatrix& dm, const Eigen::VectorXd& phi,
                              double range_tol) {
    const int n = static_cast<int>(dm.M.rows());
    if (phi.size() != n) throw std::invalid_argument("right-hand side size mismatch");
    const double scale = std::max(1.0, phi.cwiseAbs().maxCoeff());

    Eigen::VectorXd x(n);
    for (size_t b = 0; b < dm.blocks.size(); ++b) {
        const auto& blk = dm.blocks[b];
        const int k = static_cast<int>(blk.size());
        double bsum = 0.0;
        for (int i : blk) bsum += phi(i);
        if (std::abs(bsum) > range_tol * scale)
            throw std::invalid_argument("right-hand side sums to " + std::to_string(bsum) +
                                        " over block " + std::to_string(b) +
                                        "; the system is unsolvable");
        // the one-dimensional null space is removed by penalizing the mean
        Eigen::MatrixXd Mb(k, k);
        Eigen::VectorXd pb(k);
        for (int r = 0; r < k; ++r) {
            pb(r) = phi(blk[r]);
            for (int c = 0; c < k; ++c) Mb(r, c) = dm.M(blk[r], blk[c]) + 1.0 / k;
        }
        Eigen::VectorXd xb = Mb.partialPivLu().solve(pb);
        xb.array() -= xb.mean();
        for (int r = 0; r < k; ++r) x(blk[r]) = xb(r);
    }

    const double resid = (dm.M * x - phi).cwiseAbs().maxCoeff();
    if (resid > 1e-10 * scale)
        throw std::runtime_error("solver residual " + std::to_string(resid) +
                                 " exceeds tolerance");
    return x;
}

}  // namespace pum
