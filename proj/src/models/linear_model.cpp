// SPDX-License-Identifier: Apache-2.0

#include "prom/models/linear_model.hpp"

#include <Eigen/Cholesky>

namespace prom {

namespace {

void verify_spd(const SparseMatrix& a) {
    Matrix dense(a);
    double asym = (dense - dense.transpose()).lpNorm<Eigen::Infinity>();
    if (asym >= 1e-12) {
        throw ContractError("linear: spd flag set but A is not symmetric (|A - A^T| = " +
                            std::to_string(asym) + ")");
    }
    Eigen::LLT<Matrix> llt(dense);
    if (llt.info() != Eigen::Success) {
        throw ContractError("linear: spd flag set but Cholesky factorization failed");
    }
}

}  // namespace

LinearModel::LinearModel(SparseMatrix a, Vector b, bool spd)
    : a_(std::move(a)), b_(std::move(b)), spd_(spd) {
    if (a_.rows() != a_.cols()) {
        throw ContractError("linear: A must be square");
    }
    if (b_.size() != a_.rows()) {
        throw ContractError("linear: forcing length does not match A");
    }
    a_.makeCompressed();
    rows_ = a_;
    if (spd_) verify_spd(a_);
}

LinearModel::LinearModel(const Matrix& a, Vector b, bool spd)
    : LinearModel(SparseMatrix(a.sparseView()), std::move(b), spd) {}

Vector LinearModel::f_eval(const Vector& u, const ParamPoint& mu) const {
    check_length(u, "state");
    check_param(mu);
    return a_ * u - b_;
}

Vector LinearModel::jacobian_apply(const Vector& u, const ParamPoint& mu,
                                   const Vector& x) const {
    check_length(u, "state");
    check_param(mu);
    check_length(x, "direction");
    return a_ * x;
}

Matrix LinearModel::jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                         const Matrix& X) const {
    check_length(u, "state");
    check_param(mu);
    return a_ * X;
}

SparseMatrix LinearModel::jacobian_sparse(const Vector&, const ParamPoint&) const {
    return a_;
}

double LinearModel::residual_row(Index cell, const Vector& u, const Vector& udot,
                                 const ParamPoint&) const {
    check_cell(cell);
    double acc = udot(cell) - b_(cell);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows_, cell); it; ++it) {
        acc += it.value() * u(it.index());
    }
    return acc;
}

void LinearModel::jacobian_row(Index cell, const Vector&, const ParamPoint&,
                               SparseVector& row) const {
    check_cell(cell);
    row = SparseVector(dim());
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows_, cell); it; ++it) {
        row.insert(it.index()) = it.value();
    }
}

std::vector<Index> LinearModel::stencil(Index cell) const {
    check_cell(cell);
    std::vector<Index> idx;
    idx.push_back(cell);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rows_, cell); it; ++it) {
        if (it.index() != cell) idx.push_back(it.index());
    }
    return idx;
}

}  // namespace prom
