// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "prom/rom/reduced_system.hpp"
#include "prom/rom/snapshots.hpp"

namespace prom {

/// Training system for ECSW: column e stacks, over the training snapshots,
/// the projected contribution W^T r_e of cell e; b holds the row sums, i.e.
/// the exact projected residuals (unit weights reproduce them identically).
struct EcswTrainingSystem {
    Matrix g;  // (n * n_train) x n_cells
    Vector b;  // g * 1
    std::vector<Index> snapshot_indices;
    double epsilon = 0.0;
    Index n_cells = 0;
};

/// Sampled cells with strictly positive ECSW weights.
struct EcswSampleSet {
    std::vector<Index> cells;
    Vector weights;
    double achieved_residual = 0.0;  // |G xi - b| / |b| on the training system
    double epsilon = 0.0;
    std::string basis_provenance;
};

/// Assembles the ECSW training system from the force contributions of each
/// cell at the training snapshots. For Petrov-Galerkin strategies the test
/// basis rows include the online stage shift c_dt (pass 0 for a steady test
/// basis); the same per-timestep freeze used online applies, with W evaluated
/// once per training snapshot.
EcswTrainingSystem assemble_training(const SemiDiscreteModel& model,
                                     const ReducedBasis& basis,
                                     const LeftBasisStrategy& strategy,
                                     const SnapshotSet& training, const ParamPoint& mu,
                                     double stage_shift, double epsilon);

/// Nonnegative least squares with early exit at |G xi - b| <= epsilon |b|;
/// returns only the strictly positive weights.
EcswSampleSet nnls_solve(const Matrix& g, const Vector& b, double epsilon);

/// Hyperreduced steady projection sum_{e in E} xi_e W^T r_e(u0 + V y),
/// evaluating only sampled cells and their stencils.
Vector hyperreduced_residual(const SemiDiscreteModel& model, const ReducedBasis& basis,
                             const LeftBasisStrategy& strategy,
                             const EcswSampleSet& sample, const Vector& y,
                             const ParamPoint& mu);

void save_sample_set(const EcswSampleSet& sample, const std::string& path);
EcswSampleSet load_sample_set(const std::string& path);

}  // namespace prom
