// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "prom/core/model.hpp"
#include "prom/rom/pod.hpp"
#include "prom/rom/strategy.hpp"
#include "prom/timeint/integrators.hpp"

namespace prom {

/// Supplies the projected residual and solver matrix for implicit reduced
/// stage solves. Implementations: full-order assembly, precomputed quadratic
/// tensors, ECSW-sampled assembly.
class ReducedStageEvaluator {
public:
    virtual ~ReducedStageEvaluator() = default;
    virtual Index n() const = 0;
    virtual RecomputePolicy policy() const = 0;
    virtual bool petrov_galerkin() const = 0;

    /// Rebuilds the (frozen) test basis and Gauss-Newton matrix at (y, p).
    /// No-op for the Galerkin strategy.
    virtual void rebuild(const Vector& y, const StageProblem& p) = 0;

    /// W^T r_stage(y) with W from the last rebuild (Galerkin: V^T r).
    virtual Vector reduced_residual(const Vector& y, const StageProblem& p) = 0;

    /// Solver matrix: Galerkin uses the current reduced Jacobian
    /// V^T (c_dt M + J(y)) V; Petrov-Galerkin strategies use the
    /// Gauss-Newton matrix W^T (J_stage V) frozen at the last rebuild.
    virtual Matrix reduced_jacobian(const Vector& y, const StageProblem& p) = 0;
};

/// Full-order evaluator: reconstructs u = u0 + V y and assembles the
/// projected quantities from the model.
class DirectReducedEvaluator : public ReducedStageEvaluator {
public:
    DirectReducedEvaluator(const SemiDiscreteModel& model, ParamPoint mu,
                           const ReducedBasis& basis, LeftBasisStrategy strategy);

    Index n() const override { return basis_.n(); }
    RecomputePolicy policy() const override { return strategy_.recompute; }
    bool petrov_galerkin() const override { return strategy_.petrov_galerkin(); }
    void rebuild(const Vector& y, const StageProblem& p) override;
    Vector reduced_residual(const Vector& y, const StageProblem& p) override;
    Matrix reduced_jacobian(const Vector& y, const StageProblem& p) override;

    /// Full-order stage residual at reduced coordinates y.
    Vector stage_residual_full(const Vector& y, const StageProblem& p) const;

private:
    const SemiDiscreteModel& model_;
    ParamPoint mu_;
    const ReducedBasis& basis_;
    LeftBasisStrategy strategy_;
    Matrix mv_;        // M V
    Matrix mhat_;      // V^T M V
    Matrix w_;         // frozen test basis
    Matrix gn_matrix_; // W^T (J_stage V) at the last rebuild
};

/// Implicit stage solver for reduced systems: Newton for Galerkin, (frozen)
/// Gauss-Newton for Petrov-Galerkin strategies. Works with any evaluator.
class RomStageSolver : public StageSolver {
public:
    RomStageSolver(ReducedStageEvaluator& evaluator, NewtonConfig config)
        : evaluator_(evaluator), config_(config) {
        config_.validate();
    }

    Index dim() const override { return evaluator_.n(); }
    void begin_step(double t, const Vector& w) override;
    Vector solve_stage(const StageProblem& problem, const Vector& guess) override;

private:
    ReducedStageEvaluator& evaluator_;
    NewtonConfig config_;
    bool needs_rebuild_ = true;
};

/// V^T (M udot + f(u0 + V y)).
Vector galerkin_reduced_residual(const SemiDiscreteModel& model, const ReducedBasis& basis,
                                 const Vector& y, const Vector& udot, const ParamPoint& mu);

/// Steady-form Petrov-Galerkin reduced pair (W^T r, W^T J V) at reduced state
/// y, with W per strategy evaluated at the current iterate.
std::pair<Vector, Matrix> pg_reduced_system(const SemiDiscreteModel& model,
                                            const ReducedBasis& basis,
                                            const LeftBasisStrategy& strategy,
                                            const Vector& y, const ParamPoint& mu);

/// Advances the reduced coordinates one DIRK step.
Vector solve_prom_step(const SemiDiscreteModel& model, const ReducedBasis& basis,
                       const LeftBasisStrategy& strategy, const ButcherTableau& tableau,
                       const Vector& y_n, double t_n, double dt,
                       const NewtonConfig& config);

/// Linear step-direction equivalence check: solves J du = -r exactly, then
/// compares the Petrov-Galerkin reduced solution (W = Theta J V) against the
/// dense normal-equations minimizer of |V x - du| in the J^T Theta J norm.
/// Returns the max-norm discrepancy between the two reduced solutions.
double step_direction_error_check(const Matrix& j, const Vector& r, const Matrix& v,
                                  const Matrix& theta);

}  // namespace prom
