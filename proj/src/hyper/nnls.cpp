// SPDX-License-Identifier: Apache-2.0

#include "prom/hyper/nnls.hpp"

#include <Eigen/QR>

#include <limits>
#include <vector>

namespace prom {

NnlsResult nnls_lawson_hanson(const Matrix& g, const Vector& b, double epsilon_rel,
                              int max_iterations) {
    if (g.rows() != b.size()) {
        throw ContractError("nnls: dimension mismatch");
    }
    if (epsilon_rel < 0.0 || epsilon_rel >= 1.0) {
        throw ContractError("nnls: relative tolerance must lie in [0, 1)");
    }
    const Index ncols = g.cols();
    if (max_iterations <= 0) max_iterations = static_cast<int>(3 * ncols) + 30;

    const double bnorm = b.norm();
    const double target = epsilon_rel * bnorm;
    const double dual_tol = 1e-12 * (g.transpose() * b).lpNorm<Eigen::Infinity>();

    Vector x = Vector::Zero(ncols);
    std::vector<bool> passive(static_cast<size_t>(ncols), false);
    std::vector<Index> passive_list;
    Vector r = b;

    auto passive_solve = [&]() {
        Matrix gp(g.rows(), static_cast<Index>(passive_list.size()));
        for (size_t i = 0; i < passive_list.size(); ++i) {
            gp.col(static_cast<Index>(i)) = g.col(passive_list[i]);
        }
        Vector z = gp.colPivHouseholderQr().solve(b);
        return z;
    };

    int outer = 0;
    while (true) {
        if (r.norm() <= target) break;  // early exit at the training tolerance
        Vector dual = g.transpose() * r;
        Index best = -1;
        double best_val = dual_tol;
        for (Index j = 0; j < ncols; ++j) {
            if (passive[static_cast<size_t>(j)]) continue;
            if (dual(j) > best_val) {
                best_val = dual(j);
                best = j;
            }
        }
        if (best < 0) break;  // dual feasibility: optimum reached
        if (++outer > max_iterations) {
            throw SolverError("nnls: iteration cap reached", r.norm());
        }
        passive[static_cast<size_t>(best)] = true;
        passive_list.push_back(best);

        Vector z = passive_solve();
        // Inner loop: walk back toward x until z is feasible on the passive set.
        int inner_guard = 0;
        while (z.minCoeff() <= 0.0) {
            if (++inner_guard > max_iterations) {
                throw SolverError("nnls: inner loop stalled", r.norm());
            }
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < passive_list.size(); ++i) {
                const double zi = z(static_cast<Index>(i));
                if (zi <= 0.0) {
                    const double xi = x(passive_list[i]);
                    alpha = std::min(alpha, xi / (xi - zi));
                }
            }
            for (size_t i = 0; i < passive_list.size(); ++i) {
                const Index j = passive_list[i];
                x(j) += alpha * (z(static_cast<Index>(i)) - x(j));
            }
            // Drop zeroed columns from the passive set.
            std::vector<Index> still;
            for (Index j : passive_list) {
                if (x(j) > 1e-14 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
                    still.push_back(j);
                } else {
                    x(j) = 0.0;
                    passive[static_cast<size_t>(j)] = false;
                }
            }
            passive_list = std::move(still);
            if (passive_list.empty()) break;
            z = passive_solve();
        }
        for (size_t i = 0; i < passive_list.size(); ++i) {
            x(passive_list[i]) = z(static_cast<Index>(i));
        }
        r = b - g * x;
    }

    NnlsResult result;
    result.x = std::move(x);
    result.residual_norm = r.norm();
    result.iterations = outer;
    return result;
}

}  // namespace prom
