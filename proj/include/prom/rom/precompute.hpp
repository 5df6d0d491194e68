// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "prom/models/quadratic_model.hpp"
#include "prom/rom/reduced_system.hpp"

namespace prom {

/// Reduced operators of an exactly quadratic model f(u) = c + A u + H(u, u)
/// under the subspace u = u0 + V y, pre-contracted so that all online
/// evaluations are independent of the full dimension N.
///
/// Galerkin quantities are the classic reduced tensors (O(n^3) online).
/// Petrov-Galerkin (LSPG) quantities are assembled from the Gram matrix of
/// the vector collection [c~, M V, A~ V, H(V_j, V_k)...]: both J_stage V
/// columns and the stage residual are linear combinations of that collection
/// with coefficients polynomial in y, so reduced inner products reduce to
/// Gram contractions (O(n^4) online storage and work).
struct QuadraticRomOperators {
    Index n = 0;
    Vector chat;   // V^T c~
    Matrix mhat;   // V^T M V
    Matrix ahat;   // V^T A~ V
    Matrix hhat;   // n x n^2, column j*n+k holds V^T H(V_j, V_k)
    Matrix gram;   // (1 + 2n + n^2)^2 Gram matrix of the collection
    std::string provenance;

    Index collection_size() const { return 1 + 2 * n + n * n; }

    /// V^T f(u0 + V y), O(n^3).
    Vector galerkin_force(const Vector& y) const;
    /// V^T J(u0 + V y) V, O(n^3).
    Matrix galerkin_force_jacobian(const Vector& y) const;

    /// Coefficients of the stage residual r = c_dt M V (y - z) + f(u0 + V y)
    /// over the collection.
    Vector residual_coefficients(const Vector& y, const Vector& z, double c_dt) const;
    /// Sparse coefficients of column a of J_stage V evaluated at y_w.
    std::vector<std::pair<Index, double>> jv_column_coefficients(const Vector& y_w,
                                                                 double c_dt,
                                                                 Index a) const;
};

/// Builds the reduced operators. Requires the model to implement
/// QuadraticStructure and verifies quadraticity with a third-difference
/// probe; throws ContractError when inapplicable.
QuadraticRomOperators precompute_quadratic(const SemiDiscreteModel& model,
                                           const ReducedBasis& basis,
                                           const ParamPoint& mu);

/// Stage evaluator backed by precomputed tensors; supports the galerkin and
/// lspg strategies with no reference back to the full-order model.
class PrecomputedReducedEvaluator : public ReducedStageEvaluator {
public:
    PrecomputedReducedEvaluator(QuadraticRomOperators ops, LeftBasisStrategy strategy);

    Index n() const override { return ops_.n; }
    RecomputePolicy policy() const override { return strategy_.recompute; }
    bool petrov_galerkin() const override { return strategy_.petrov_galerkin(); }
    void rebuild(const Vector& y, const StageProblem& p) override;
    Vector reduced_residual(const Vector& y, const StageProblem& p) override;
    Matrix reduced_jacobian(const Vector& y, const StageProblem& p) override;

    const QuadraticRomOperators& operators() const { return ops_; }

private:
    QuadraticRomOperators ops_;
    LeftBasisStrategy strategy_;
    Matrix gram_alpha_;  // Gram * alpha at the last rebuild (m x n)
    Matrix gn_matrix_;   // alpha^T Gram alpha
};

}  // namespace prom
