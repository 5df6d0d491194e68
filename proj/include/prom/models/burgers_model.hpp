// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/core/model.hpp"

namespace prom {

/// Periodic viscous Burgers equation u_t + (u^2/2)_x = nu u_xx on a uniform
/// finite-volume grid, written as du/dt + f(u) = 0 with
///
///   f_i = (F_{i+1/2} - F_{i-1/2}) / dx - nu (u_{i+1} - 2 u_i + u_{i-1}) / dx^2
///
/// Convective interface fluxes are upwinded (first or second order) on the
/// sign of the local interface speed (u_i + u_{i+1}) / 2; diffusion uses
/// central differences. One FV cell per grid point is the residual
/// decomposition unit.
class BurgersModel : public SemiDiscreteModel {
public:
    struct Config {
        Index n = 256;
        double domain_length = 1.0;
        double viscosity = 1e-2;
        int upwind_order = 1;  // 1 or 2
    };

    explicit BurgersModel(const Config& config);

    Index dim() const override { return config_.n; }
    std::string name() const override { return "burgers"; }

    Vector f_eval(const Vector& u, const ParamPoint& mu) const override;
    Vector jacobian_apply(const Vector& u, const ParamPoint& mu,
                          const Vector& x) const override;
    Matrix jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                const Matrix& X) const override;
    bool has_sparse_jacobian() const override { return true; }
    SparseMatrix jacobian_sparse(const Vector& u, const ParamPoint& mu) const override;
    double residual_row(Index cell, const Vector& u, const Vector& udot,
                        const ParamPoint& mu) const override;
    void jacobian_row(Index cell, const Vector& u, const ParamPoint& mu,
                      SparseVector& row) const override;
    std::vector<Index> stencil(Index cell) const override;

    const Config& config() const { return config_; }
    double dx() const { return dx_; }

    /// Grid coordinate of cell center i.
    double x_of(Index i) const { return (static_cast<double>(i) + 0.5) * dx_; }

    /// Sampled initial profile mean + amplitude * sin(2 pi x / Lx).
    Vector sine_initial_condition(double mean, double amplitude) const;

private:
    double flux_row(Index i, const Vector& u) const;  // f_i
    // d F_{i+1/2} / d(u_{i-1} .. u_{i+2}) for the interface right of cell i,
    // written into four coefficients addressed relative to cell i.
    void interface_flux_derivative(Index i, const Vector& u, double coeff[4]) const;
    double interface_flux(Index i, const Vector& u) const;  // F_{i+1/2}

    Index wrap(Index i) const {
        Index n = config_.n;
        return ((i % n) + n) % n;
    }

    Config config_;
    double dx_;
};

}  // namespace prom
