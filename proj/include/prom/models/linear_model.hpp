// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/core/model.hpp"

namespace prom {

/// Linear dynamics f(u) = A u - b with identity mass. The spd flag asserts
/// that A is symmetric positive definite; it is verified at construction.
class LinearModel : public SemiDiscreteModel {
public:
    LinearModel(SparseMatrix a, Vector b, bool spd = false);
    LinearModel(const Matrix& a, Vector b, bool spd = false);

    Index dim() const override { return a_.rows(); }
    std::string name() const override { return "linear"; }

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

    bool spd() const { return spd_; }
    const SparseMatrix& matrix() const { return a_; }
    const Vector& forcing() const { return b_; }

private:
    SparseMatrix a_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> rows_;
    Vector b_;
    bool spd_;
};

}  // namespace prom
