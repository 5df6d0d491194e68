// SPDX-License-Identifier: Apache-2.0

#include "prom/core/model.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <random>

namespace prom {

SparseMatrix SemiDiscreteModel::mass_sparse() const {
    SparseMatrix m(dim(), dim());
    m.setIdentity();
    return m;
}

Matrix SemiDiscreteModel::jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                               const Matrix& X) const {
    Matrix out(dim(), X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        out.col(j) = jacobian_apply(u, mu, X.col(j));
    }
    return out;
}

SparseMatrix SemiDiscreteModel::jacobian_sparse(const Vector&, const ParamPoint&) const {
    throw ContractError(name() + ": sparse Jacobian materialization not available");
}

Vector SemiDiscreteModel::solve_shifted_jacobian(const Vector& u, const ParamPoint& mu,
                                                 double c, const Vector& b) const {
    check_length(b, "solve_shifted_jacobian rhs");
    SparseMatrix system = jacobian_sparse(u, mu);
    if (c != 0.0) {
        system += SparseMatrix(c * mass_sparse());
    }
    system.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu(system);
    if (lu.info() != Eigen::Success) {
        throw SolverError(name() + ": sparse factorization of the stage system failed");
    }
    Vector x = lu.solve(b);
    if (lu.info() != Eigen::Success) {
        throw SolverError(name() + ": sparse triangular solve failed");
    }
    return x;
}

double SemiDiscreteModel::residual_row(Index cell, const Vector& u, const Vector& udot,
                                       const ParamPoint& mu) const {
    check_cell(cell);
    Vector r = mass_apply(udot) + f_eval(u, mu);
    return r(cell);
}

void SemiDiscreteModel::jacobian_row(Index cell, const Vector& u, const ParamPoint& mu,
                                     SparseVector& row) const {
    check_cell(cell);
    if (!has_sparse_jacobian()) {
        throw ContractError(name() + ": jacobian_row requires a sparse Jacobian");
    }
    SparseMatrix j = jacobian_sparse(u, mu);
    row = j.row(cell);
}

std::vector<Index> SemiDiscreteModel::stencil(Index cell) const {
    check_cell(cell);
    std::vector<Index> all(static_cast<size_t>(dim()));
    for (Index i = 0; i < dim(); ++i) all[static_cast<size_t>(i)] = i;
    return all;
}

void SemiDiscreteModel::check_length(const Vector& x, const char* what) const {
    if (x.size() != dim()) {
        throw ContractError(name() + ": " + what + " has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(dim()));
    }
}

void SemiDiscreteModel::check_param(const ParamPoint& mu) const {
    if (mu.dim() != param_dim()) {
        throw ContractError(name() + ": parameter point has dimension " +
                            std::to_string(mu.dim()) + ", expected " +
                            std::to_string(param_dim()));
    }
    for (Index i = 0; i < mu.dim(); ++i) {
        if (!std::isfinite(mu.values(i))) {
            throw ContractError(name() + ": non-finite parameter entry " + std::to_string(i));
        }
    }
}

void SemiDiscreteModel::check_cell(Index cell) const {
    if (cell < 0 || cell >= cell_count()) {
        throw ContractError(name() + ": cell index " + std::to_string(cell) +
                            " out of range [0, " + std::to_string(cell_count()) + ")");
    }
}

void require_finite(const Vector& v, const char* what) {
    for (Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) {
            throw NumericalError(std::string(what) + ": non-finite value at index " +
                                 std::to_string(i));
        }
    }
}

Vector residual(const SemiDiscreteModel& model, const Vector& u, const Vector& udot,
                const ParamPoint& mu) {
    model.check_length(u, "residual state");
    model.check_length(udot, "residual time-derivative");
    model.check_param(mu);
    Vector r = model.mass_apply(udot) + model.f_eval(u, mu);
    require_finite(r, "residual");
    return r;
}

SparseVector per_cell_residual(const SemiDiscreteModel& model, const Vector& u,
                               const Vector& udot, const ParamPoint& mu, Index cell) {
    model.check_cell(cell);
    SparseVector out(model.dim());
    out.insert(cell) = model.residual_row(cell, u, udot, mu);
    return out;
}

double jacobian_fd_check(const SemiDiscreteModel& model, const Vector& u,
                         const ParamPoint& mu, double h, int directions,
                         std::uint64_t seed) {
    if (h <= 0.0) {
        throw ContractError("jacobian_fd_check: step size must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < directions; ++k) {
        Vector d(u.size());
        for (Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
        d /= d.norm();
        Vector jd = model.jacobian_apply(u, mu, d);
        Vector fd = (model.f_eval(u + h * d, mu) - model.f_eval(u - h * d, mu)) / (2.0 * h);
        double err = (jd - fd).lpNorm<Eigen::Infinity>() /
                     (1.0 + jd.lpNorm<Eigen::Infinity>());
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace prom
