// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/timeint/newton.hpp"

namespace prom {

enum class RomStrategyKind { galerkin, lspg, theta_weighted, l1_irls };

enum class RecomputePolicy { per_timestep, per_iteration };

/// Choice of left reduced-order (test) basis:
///   galerkin        W = V
///   lspg            W = J V                 (l2 residual minimization)
///   theta_weighted  W = Theta J V           (SPD Theta supplied)
///   l1_irls         W = diag(1/|r_i|) J V   (reweighted toward the l1 norm)
/// The recompute policy controls how often W (and the Gauss-Newton matrix)
/// is rebuilt during implicit stage solves.
struct LeftBasisStrategy {
    RomStrategyKind kind = RomStrategyKind::galerkin;
    RecomputePolicy recompute = RecomputePolicy::per_timestep;
    ThetaOp theta;  // used by theta_weighted; identity otherwise

    static LeftBasisStrategy galerkin() { return {RomStrategyKind::galerkin, RecomputePolicy::per_timestep, {}}; }
    static LeftBasisStrategy lspg(RecomputePolicy policy = RecomputePolicy::per_timestep) {
        return {RomStrategyKind::lspg, policy, {}};
    }
    static LeftBasisStrategy theta_weighted(ThetaOp theta,
                                            RecomputePolicy policy = RecomputePolicy::per_iteration) {
        return {RomStrategyKind::theta_weighted, policy, std::move(theta)};
    }
    static LeftBasisStrategy l1_irls(RecomputePolicy policy = RecomputePolicy::per_iteration) {
        return {RomStrategyKind::l1_irls, policy, {}};
    }

    bool petrov_galerkin() const { return kind != RomStrategyKind::galerkin; }

    /// Weighting applied to J V when assembling W, for the current residual.
    ThetaOp weighting() const;

    const char* label() const;
};

LeftBasisStrategy strategy_from_name(const std::string& name,
                                     RecomputePolicy policy = RecomputePolicy::per_timestep);

}  // namespace prom
