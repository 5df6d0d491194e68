// SPDX-License-Identifier: Apache-2.0

#include "prom/rom/strategy.hpp"

namespace prom {

ThetaOp LeftBasisStrategy::weighting() const {
    switch (kind) {
        case RomStrategyKind::galerkin:
        case RomStrategyKind::lspg:
            return ThetaOp::identity();
        case RomStrategyKind::theta_weighted:
            return theta;
        case RomStrategyKind::l1_irls:
            return ThetaOp::l1();
    }
    return ThetaOp::identity();
}

const char* LeftBasisStrategy::label() const {
    switch (kind) {
        case RomStrategyKind::galerkin:
            return "galerkin";
        case RomStrategyKind::lspg:
            return "lspg";
        case RomStrategyKind::theta_weighted:
            return "theta";
        case RomStrategyKind::l1_irls:
            return "l1";
    }
    return "unknown";
}

LeftBasisStrategy strategy_from_name(const std::string& name, RecomputePolicy policy) {
    if (name == "galerkin") return LeftBasisStrategy::galerkin();
    if (name == "lspg") return LeftBasisStrategy::lspg(policy);
    if (name == "l1" || name == "l1_irls") return LeftBasisStrategy::l1_irls(policy);
    throw ConfigError("rom: unknown strategy '" + name +
                      "' (theta-weighted strategies are constructed programmatically)");
}

}  // namespace prom
