// SPDX-License-Identifier: Apache-2.0

#include "prom/rom/pod.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>

namespace prom {

Index pod_dimension_for_energy(const Vector& sigma, double energy) {
    if (energy <= 0.0 || energy >= 1.0) {
        throw ConfigError("pod: energy fraction must lie in (0, 1)");
    }
    const double total = sigma.squaredNorm();
    double acc = 0.0;
    for (Index i = 0; i < sigma.size(); ++i) {
        acc += sigma(i) * sigma(i);
        if (acc / total >= energy) return i + 1;
    }
    return sigma.size();
}

ReducedBasis build_pod(const SnapshotSet& snapshots, const Vector& u0,
                       const PodOptions& options,
                       const std::vector<StateBlock>& blocks) {
    const Index n_full = snapshots.state_dim();
    const Index s = snapshots.count();
    if (s < 1) {
        throw ContractError("pod: at least one snapshot required");
    }
    if (u0.size() != n_full) {
        throw ContractError("pod: offset length does not match snapshots");
    }
    if (options.explicit_n <= 0 && (options.energy <= 0.0 || options.energy >= 1.0)) {
        throw ConfigError("pod: either an explicit dimension or an energy fraction in (0,1) is required");
    }

    Matrix centered = snapshots.states.colwise() - u0;

    std::vector<StateBlock> layout = blocks;
    if (layout.empty()) layout.push_back(StateBlock{"u", 0, n_full});
    Vector scales = Vector::Ones(static_cast<Index>(layout.size()));
    if (options.normalize) {
        for (size_t b = 0; b < layout.size(); ++b) {
            const auto& blk = layout[b];
            double peak = centered.middleRows(blk.offset, blk.size)
                              .cwiseAbs()
                              .maxCoeff();
            scales(static_cast<Index>(b)) = peak > 0.0 ? peak : 1.0;
            centered.middleRows(blk.offset, blk.size) /= scales(static_cast<Index>(b));
        }
    }

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
    Vector sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) <= 0.0) {
        throw DegenerateBasisError("pod: snapshot matrix is zero");
    }

    Index n = options.explicit_n > 0
                  ? std::min<Index>(options.explicit_n, sigma.size())
                  : pod_dimension_for_energy(sigma, options.energy);
    // Drop numerically rank-deficient trailing directions.
    while (n > 1 && sigma(n - 1) <= 1e-14 * sigma(0)) --n;

    Matrix v = svd.matrixU().leftCols(n);
    if (options.normalize) {
        // Undo the block scaling and restore orthonormality in the plain
        // inner product; the selected subspace is unchanged.
        for (size_t b = 0; b < layout.size(); ++b) {
            const auto& blk = layout[b];
            v.middleRows(blk.offset, blk.size) *= scales(static_cast<Index>(b));
        }
        Eigen::HouseholderQR<Matrix> qr(v);
        v = qr.householderQ() * Matrix::Identity(n_full, n);
    }
    // Deterministic column signs: largest-magnitude entry positive.
    for (Index j = 0; j < v.cols(); ++j) {
        Index argmax = 0;
        v.col(j).cwiseAbs().maxCoeff(&argmax);
        if (v(argmax, j) < 0.0) v.col(j) = -v.col(j);
    }

    ReducedBasis basis;
    basis.u0 = u0;
    basis.v = std::move(v);
    basis.sigma = std::move(sigma);
    basis.energy_criterion = options.explicit_n > 0 ? 0.0 : options.energy;
    basis.normalized = options.normalize;
    basis.block_scales = scales;
    return basis;
}

}  // namespace prom
