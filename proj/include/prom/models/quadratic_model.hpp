// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/core/model.hpp"

namespace prom {

/// Exposes the affine-quadratic decomposition f(u) = c + A u + H(u, u) with a
/// symmetric bilinear H. Models implementing this alongside SemiDiscreteModel
/// qualify for exact offline pre-computation of reduced operators.
class QuadraticStructure {
public:
    virtual ~QuadraticStructure() = default;
    virtual Vector constant_term(const ParamPoint& mu) const = 0;
    virtual Vector linear_apply(const Vector& x, const ParamPoint& mu) const = 0;
    /// Symmetric bilinear action H(x, y) = H(y, x).
    virtual Vector bilinear_apply(const Vector& x, const Vector& y,
                                  const ParamPoint& mu) const = 0;
};

/// One entry of the sparse symmetric quadratic form:
/// adds coeff * u(j) * u(k) to f(row).
struct QuadTerm {
    Index row = 0;
    Index j = 0;
    Index k = 0;
    double coeff = 0.0;
};

/// Generic quadratic ODE model f(u) = c + A u + H(u, u) with identity mass and
/// sparse storage of both A and H.
class QuadraticModel : public SemiDiscreteModel, public QuadraticStructure {
public:
    QuadraticModel(SparseMatrix a, std::vector<QuadTerm> terms, Vector c);

    /// Elementwise square f(u) = u .* u of dimension n.
    static QuadraticModel elementwise_square(Index n);

    Index dim() const override { return a_.rows(); }
    std::string name() const override { return "quadratic"; }

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

    Vector constant_term(const ParamPoint& mu) const override;
    Vector linear_apply(const Vector& x, const ParamPoint& mu) const override;
    Vector bilinear_apply(const Vector& x, const Vector& y,
                          const ParamPoint& mu) const override;

private:
    SparseMatrix a_;
    Eigen::SparseMatrix<double, Eigen::RowMajor> a_rows_;
    std::vector<QuadTerm> terms_;   // sorted by row
    std::vector<Index> row_begin_;  // CSR-style offsets into terms_
    Vector c_;
};

/// Verifies that f is exactly quadratic along random directions by checking
/// that third differences vanish to roundoff. Returns the worst scaled third
/// difference encountered.
double third_difference_check(const SemiDiscreteModel& model, const Vector& u,
                              const ParamPoint& mu, int directions = 8,
                              std::uint64_t seed = 0x5eed);

}  // namespace prom
