// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/hyper/ecsw.hpp"

namespace prom {

/// ECSW-sampled stage evaluator: reconstructs the state only on the reduced
/// mesh (sampled cells plus stencils) and assembles projected quantities as
/// weighted row sums, so online work scales with the sample size, not N.
/// Supports the galerkin and lspg strategies.
class HyperreducedEvaluator : public ReducedStageEvaluator {
public:
    HyperreducedEvaluator(const SemiDiscreteModel& model, ParamPoint mu,
                          const ReducedBasis& basis, LeftBasisStrategy strategy,
                          EcswSampleSet sample);

    Index n() const override { return basis_.n(); }
    RecomputePolicy policy() const override { return strategy_.recompute; }
    bool petrov_galerkin() const override { return strategy_.petrov_galerkin(); }
    void rebuild(const Vector& y, const StageProblem& p) override;
    Vector reduced_residual(const Vector& y, const StageProblem& p) override;
    Matrix reduced_jacobian(const Vector& y, const StageProblem& p) override;

    Index reduced_mesh_size() const { return static_cast<Index>(support_.size()); }
    const EcswSampleSet& sample() const { return sample_; }

private:
    void scatter_state(const Vector& y);
    /// Rows of (c_dt M + J(u)) V at the sampled cells, at the current scratch
    /// state.
    Matrix stage_jv_rows(double c_dt) const;

    const SemiDiscreteModel& model_;
    ParamPoint mu_;
    const ReducedBasis& basis_;
    LeftBasisStrategy strategy_;
    EcswSampleSet sample_;
    std::vector<Index> support_;  // sampled cells plus stencil neighbors
    Matrix v_support_;            // V rows on the support
    Vector u0_support_;
    Matrix v_cells_;              // V rows at sampled cells
    Matrix mv_cells_;             // M V rows at sampled cells
    mutable Vector u_scratch_;    // full-length buffer, valid on the support
    Vector udot_zero_;
    Matrix w_rows_;               // frozen test-basis rows (PG)
    Matrix gn_matrix_;
};

}  // namespace prom
