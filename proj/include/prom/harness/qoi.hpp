// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "prom/core/model.hpp"

namespace prom {

enum class QoIKind { point_value, volume_kinetic_energy, enstrophy_dissipation, integral_custom };

/// Scalar quantity of interest extracted from a full-order state.
struct QoIProbe {
    QoIKind kind = QoIKind::point_value;
    std::string name = "probe";
    std::string block;         // state block; defaults to the first block
    double frac[3] = {0.75, 0.25, 0.5};  // probe location as domain fractions
};

/// Evaluates one QoI on a full-order state; throws ContractError when the
/// kind is not supported by the model or the probe lies outside the domain.
double evaluate_qoi(const QoIProbe& probe, const SemiDiscreteModel& model, const Vector& u);

/// Percent relative error 100 |Q - Qt|_2 / |Q|_2 over a sampled series.
/// Throws ContractError for length mismatches and for identically zero Q.
double relative_error_percent(const Vector& q, const Vector& q_tilde);

}  // namespace prom
