// SPDX-License-Identifier: Apache-2.0

#include "prom/harness/qoi.hpp"

#include <cmath>

#include "prom/models/burgers_model.hpp"
#include "prom/models/spectral_model.hpp"

namespace prom {

namespace {

const StateBlock& find_block(const std::vector<StateBlock>& blocks, const std::string& name) {
    if (name.empty()) return blocks.front();
    for (const StateBlock& b : blocks) {
        if (b.name == name) return b;
    }
    throw ContractError("qoi: unknown state block '" + name + "'");
}

void check_fraction(double f) {
    if (f < 0.0 || f >= 1.0) {
        throw ContractError("qoi: probe fraction outside [0, 1)");
    }
}

}  // namespace

double evaluate_qoi(const QoIProbe& probe, const SemiDiscreteModel& model, const Vector& u) {
    model.check_length(u, "qoi state");
    const auto* spectral = dynamic_cast<const SpectralNSModel*>(&model);
    switch (probe.kind) {
        case QoIKind::point_value: {
            const auto blocks = model.state_blocks();
            const StateBlock& block = find_block(blocks, probe.block);
            check_fraction(probe.frac[0]);
            if (spectral) {
                check_fraction(probe.frac[1]);
                const Index r = spectral->resolution();
                const Index ix = static_cast<Index>(probe.frac[0] * static_cast<double>(r));
                const Index iy = static_cast<Index>(probe.frac[1] * static_cast<double>(r));
                Index iz = 0;
                if (spectral->config().spatial_dim == 3) {
                    check_fraction(probe.frac[2]);
                    iz = static_cast<Index>(probe.frac[2] * static_cast<double>(r));
                }
                return u(block.offset + spectral->grid_index(ix, iy, iz));
            }
            const Index i = static_cast<Index>(probe.frac[0] * static_cast<double>(block.size));
            return u(block.offset + i);
        }
        case QoIKind::volume_kinetic_energy: {
            if (spectral) return spectral->kinetic_energy(u);
            // Scalar transport analogue: mean of u^2 / 2 over the cells.
            return 0.5 * u.squaredNorm() / static_cast<double>(u.size());
        }
        case QoIKind::enstrophy_dissipation: {
            if (!spectral) {
                throw ContractError("qoi: enstrophy dissipation requires the spectral model");
            }
            return spectral->enstrophy_dissipation(u);
        }
        case QoIKind::integral_custom: {
            const auto blocks = model.state_blocks();
            const StateBlock& block = find_block(blocks, probe.block);
            return u.segment(block.offset, block.size).mean();
        }
    }
    throw ContractError("qoi: unknown kind");
}

double relative_error_percent(const Vector& q, const Vector& q_tilde) {
    if (q.size() != q_tilde.size()) {
        throw ContractError("relative error: series lengths differ");
    }
    const double denom = q.norm();
    if (denom == 0.0) {
        throw ContractError("relative error: reference series is identically zero");
    }
    return 100.0 * (q - q_tilde).norm() / denom;
}

}  // namespace prom
