// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "prom/common.hpp"

namespace prom {

/// Nonlinear solver settings shared by Newton and Gauss-Newton.
struct NewtonConfig {
    double atol = 1e-10;
    double rtol = 1e-8;
    int max_iterations = 20;

    void validate() const {
        if (atol <= 0.0 || rtol < 0.0) {
            throw ConfigError("newton: tolerances must be positive");
        }
        if (max_iterations < 1) {
            throw ConfigError("newton: at least one iteration required");
        }
    }
};

/// SPD weighting defining the residual-minimization norm. The l1 variant
/// builds a diagonal from the current residual so that the weighted square
/// norm equals the residual l1 norm.
class ThetaOp {
public:
    enum class Kind { identity, dense, diagonal, l1 };

    ThetaOp() : kind_(Kind::identity) {}

    static ThetaOp identity();
    /// Dense SPD matrix; Cholesky-verified at construction (throws SolverError
    /// if the factorization fails).
    static ThetaOp dense(Matrix theta);
    static ThetaOp diagonal(Vector d);
    static ThetaOp l1();

    Kind kind() const { return kind_; }
    bool is_identity() const { return kind_ == Kind::identity; }

    /// Theta(r) * X where r is the current residual (used by the l1 kind).
    Matrix apply(const Matrix& x, const Vector& r) const;
    Vector apply(const Vector& x, const Vector& r) const;

    /// Row scaling by sqrt(Theta) for least-squares forms; dense kind uses the
    /// Cholesky factor transpose.
    Matrix half_apply(const Matrix& x, const Vector& r) const;
    Vector half_apply(const Vector& x, const Vector& r) const;

    const Matrix& dense_matrix() const { return dense_; }

private:
    explicit ThetaOp(Kind kind) : kind_(kind) {}
    Vector effective_diagonal(const Vector& r) const;

    Kind kind_;
    Matrix dense_;       // dense kind
    Matrix chol_lt_;     // transpose of the Cholesky factor of dense_
    Vector diag_;        // diagonal kind
};

/// Diagonal weights with entries 1/|r_i| (1 where r_i == 0), so that the
/// weighted square norm of r reproduces its l1 norm.
Vector l1_theta_diagonal(const Vector& r);

/// Same diagonal with entries clamped away from infinity for use inside
/// iteratively reweighted least-squares solves.
Vector l1_theta_smoothed(const Vector& r);

/// sum_i d_i r_i^2.
double weighted_norm_sq(const Vector& r, const Vector& diag);

/// Newton iteration on residual_fn with a dense Jacobian; stops when
/// |r|_2 <= atol + rtol |r(y0)|_2. Throws SolverError on a singular Jacobian
/// or iteration exhaustion (the latter with the achieved residual attached).
Vector newton_solve(const std::function<Vector(const Vector&)>& residual_fn,
                    const std::function<Matrix(const Vector&)>& jacobian_fn,
                    const Vector& y0, const NewtonConfig& config,
                    int* iterations = nullptr);

/// Gauss-Newton for min |residual(y)|_Theta^2 over the column span mapped by
/// jv_fn(y) = J(y) V. Stops on the first-order condition
/// |(JV)^T Theta r|_2 <= atol + rtol * (initial gradient norm).
/// on_iterate is invoked after every accepted update.
Vector gauss_newton_solve(const std::function<Vector(const Vector&)>& residual_fn,
                          const std::function<Matrix(const Vector&)>& jv_fn,
                          const ThetaOp& theta, const Vector& y0,
                          const NewtonConfig& config,
                          const std::function<void(int, const Vector&)>& on_iterate = {},
                          int* iterations = nullptr);

}  // namespace prom
