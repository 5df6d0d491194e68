// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "prom/core/model.hpp"
#include "prom/rom/snapshots.hpp"

namespace prom {

/// Affine offset plus column-orthonormal right basis, with the singular-value
/// history of the (normalized) training snapshot matrix.
struct ReducedBasis {
    Vector u0;
    Matrix v;              // N x n, V^T V = I
    Vector sigma;          // all singular values, non-increasing
    double energy_criterion = 0.0;  // 0 when an explicit n was requested
    bool normalized = false;
    Vector block_scales;   // per-block factors used during normalization
    std::string provenance;

    Index full_dim() const { return v.rows(); }
    Index n() const { return v.cols(); }

    Vector reconstruct(const Vector& y) const { return u0 + v * y; }
    Vector project(const Vector& u) const { return v.transpose() * (u - u0); }
    double orthonormality_error() const {
        return (v.transpose() * v - Matrix::Identity(n(), n())).lpNorm<Eigen::Infinity>();
    }
};

struct PodOptions {
    double energy = 0.0;   // squared-singular-value energy fraction in (0, 1)
    Index explicit_n = 0;  // overrides the energy criterion when positive
    bool normalize = true;
};

/// Builds a POD basis: subtract u0 from every snapshot, optionally scale each
/// state block by its max absolute value over the set, thin SVD, select the
/// smallest n whose squared singular values reach the energy criterion (or
/// the explicit n), and re-orthonormalize the unscaled directions. Column
/// signs are fixed deterministically.
ReducedBasis build_pod(const SnapshotSet& snapshots, const Vector& u0,
                       const PodOptions& options,
                       const std::vector<StateBlock>& blocks = {});

/// n required by build_pod for a given energy fraction (selection only).
Index pod_dimension_for_energy(const Vector& sigma, double energy);

}  // namespace prom
