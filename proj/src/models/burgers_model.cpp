// SPDX-License-Identifier: Apache-2.0

#include "prom/models/burgers_model.hpp"

#include <cmath>
#include <numbers>

namespace prom {

BurgersModel::BurgersModel(const Config& config) : config_(config) {
    if (config_.n < 3) {
        throw ConfigError("burgers: grid size must be at least 3");
    }
    if (config_.domain_length <= 0.0) {
        throw ConfigError("burgers: domain length must be positive");
    }
    if (config_.viscosity < 0.0) {
        // Zero viscosity is admitted for inviscid conservation tests.
        throw ConfigError("burgers: viscosity must be nonnegative");
    }
    if (config_.upwind_order != 1 && config_.upwind_order != 2) {
        throw ConfigError("burgers: upwind order must be 1 or 2");
    }
    dx_ = config_.domain_length / static_cast<double>(config_.n);
}

double BurgersModel::interface_flux(Index i, const Vector& u) const {
    // Interface i+1/2; upwind side picked by the local convective speed.
    const double ul = u(wrap(i));
    const double ur = u(wrap(i + 1));
    const double speed = 0.5 * (ul + ur);
    if (config_.upwind_order == 1) {
        return speed >= 0.0 ? 0.5 * ul * ul : 0.5 * ur * ur;
    }
    if (speed >= 0.0) {
        const double um = u(wrap(i - 1));
        return 0.25 * (3.0 * ul * ul - um * um);
    }
    const double urr = u(wrap(i + 2));
    return 0.25 * (3.0 * ur * ur - urr * urr);
}

void BurgersModel::interface_flux_derivative(Index i, const Vector& u, double coeff[4]) const {
    // coeff[k] = dF_{i+1/2}/du at relative offsets {-1, 0, +1, +2} from cell i.
    // The upwind branch is held fixed; the switch is non-differentiable only
    // on the measure-zero set where the interface speed vanishes.
    coeff[0] = coeff[1] = coeff[2] = coeff[3] = 0.0;
    const double ul = u(wrap(i));
    const double ur = u(wrap(i + 1));
    const double speed = 0.5 * (ul + ur);
    if (config_.upwind_order == 1) {
        if (speed >= 0.0) {
            coeff[1] = ul;
        } else {
            coeff[2] = ur;
        }
        return;
    }
    if (speed >= 0.0) {
        coeff[0] = -0.5 * u(wrap(i - 1));
        coeff[1] = 1.5 * ul;
    } else {
        coeff[2] = 1.5 * ur;
        coeff[3] = -0.5 * u(wrap(i + 2));
    }
}

double BurgersModel::flux_row(Index i, const Vector& u) const {
    const double nu = config_.viscosity;
    const double conv = (interface_flux(i, u) - interface_flux(i - 1, u)) / dx_;
    const double diff =
        nu * (u(wrap(i + 1)) - 2.0 * u(wrap(i)) + u(wrap(i - 1))) / (dx_ * dx_);
    return conv - diff;
}

Vector BurgersModel::f_eval(const Vector& u, const ParamPoint& mu) const {
    check_length(u, "state");
    check_param(mu);
    Vector out(dim());
    for (Index i = 0; i < dim(); ++i) out(i) = flux_row(i, u);
    return out;
}

Vector BurgersModel::jacobian_apply(const Vector& u, const ParamPoint& mu,
                                    const Vector& x) const {
    check_length(u, "state");
    check_param(mu);
    check_length(x, "direction");
    SparseMatrix j = jacobian_sparse(u, mu);
    return j * x;
}

Matrix BurgersModel::jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                          const Matrix& X) const {
    check_length(u, "state");
    check_param(mu);
    SparseMatrix j = jacobian_sparse(u, mu);
    return j * X;
}

SparseMatrix BurgersModel::jacobian_sparse(const Vector& u, const ParamPoint& mu) const {
    check_length(u, "state");
    check_param(mu);
    const Index n = dim();
    const double nu = config_.viscosity;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 7);
    double right[4];
    double left[4];
    for (Index i = 0; i < n; ++i) {
        interface_flux_derivative(i, u, right);     // F_{i+1/2}, offsets i-1..i+2
        interface_flux_derivative(i - 1, u, left);  // F_{i-1/2}, offsets i-2..i+1
        for (int k = 0; k < 4; ++k) {
            if (right[k] != 0.0) {
                trip.emplace_back(i, wrap(i - 1 + k), right[k] / dx_);
            }
            if (left[k] != 0.0) {
                trip.emplace_back(i, wrap(i - 2 + k), -left[k] / dx_);
            }
        }
        const double d = nu / (dx_ * dx_);
        trip.emplace_back(i, wrap(i - 1), -d);
        trip.emplace_back(i, i, 2.0 * d);
        trip.emplace_back(i, wrap(i + 1), -d);
    }
    SparseMatrix j(n, n);
    j.setFromTriplets(trip.begin(), trip.end());
    return j;
}

double BurgersModel::residual_row(Index cell, const Vector& u, const Vector& udot,
                                  const ParamPoint&) const {
    check_cell(cell);
    return udot(cell) + flux_row(cell, u);
}

void BurgersModel::jacobian_row(Index cell, const Vector& u, const ParamPoint&,
                                SparseVector& row) const {
    check_cell(cell);
    const double nu = config_.viscosity;
    double contrib[5] = {0, 0, 0, 0, 0};  // offsets -2..+2 from cell
    double right[4];
    double left[4];
    interface_flux_derivative(cell, u, right);
    interface_flux_derivative(cell - 1, u, left);
    for (int k = 0; k < 4; ++k) {
        contrib[k + 1] += right[k] / dx_;
        contrib[k] -= left[k] / dx_;
    }
    const double d = nu / (dx_ * dx_);
    contrib[1] -= d;
    contrib[2] += 2.0 * d;
    contrib[3] -= d;
    row = SparseVector(dim());
    for (int k = 0; k < 5; ++k) {
        if (contrib[k] != 0.0) {
            row.coeffRef(wrap(cell - 2 + k)) += contrib[k];
        }
    }
}

std::vector<Index> BurgersModel::stencil(Index cell) const {
    check_cell(cell);
    const Index reach = config_.upwind_order == 1 ? 1 : 2;
    std::vector<Index> idx;
    for (Index k = -reach; k <= reach; ++k) {
        Index w = wrap(cell + k);
        bool seen = false;
        for (Index prev : idx) seen = seen || prev == w;
        if (!seen) idx.push_back(w);
    }
    return idx;
}

Vector BurgersModel::sine_initial_condition(double mean, double amplitude) const {
    Vector u(dim());
    const double lx = config_.domain_length;
    for (Index i = 0; i < dim(); ++i) {
        u(i) = mean + amplitude * std::sin(2.0 * std::numbers::pi * x_of(i) / lx);
    }
    return u;
}

}  // namespace prom
