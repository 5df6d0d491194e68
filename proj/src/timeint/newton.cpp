// SPDX-License-Identifier: Apache-2.0

#include "prom/timeint/newton.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>

namespace prom {

ThetaOp ThetaOp::identity() { return ThetaOp(Kind::identity); }

ThetaOp ThetaOp::dense(Matrix theta) {
    if (theta.rows() != theta.cols()) {
        throw ContractError("theta: weighting matrix must be square");
    }
    ThetaOp op(Kind::dense);
    Eigen::LLT<Matrix> llt(theta);
    if (llt.info() != Eigen::Success) {
        throw SolverError("theta: weighting matrix is not SPD (Cholesky failed)");
    }
    op.dense_ = std::move(theta);
    op.chol_lt_ = llt.matrixL().transpose();
    return op;
}

ThetaOp ThetaOp::diagonal(Vector d) {
    for (Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0)) {
            throw SolverError("theta: diagonal weights must be strictly positive");
        }
    }
    ThetaOp op(Kind::diagonal);
    op.diag_ = std::move(d);
    return op;
}

ThetaOp ThetaOp::l1() { return ThetaOp(Kind::l1); }

Vector ThetaOp::effective_diagonal(const Vector& r) const {
    if (kind_ == Kind::diagonal) return diag_;
    return l1_theta_smoothed(r);
}

Matrix ThetaOp::apply(const Matrix& x, const Vector& r) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::dense:
            return dense_ * x;
        default:
            return effective_diagonal(r).asDiagonal() * x;
    }
}

Vector ThetaOp::apply(const Vector& x, const Vector& r) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::dense:
            return dense_ * x;
        default:
            return effective_diagonal(r).cwiseProduct(x);
    }
}

Matrix ThetaOp::half_apply(const Matrix& x, const Vector& r) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::dense:
            return chol_lt_ * x;
        default:
            return effective_diagonal(r).cwiseSqrt().asDiagonal() * x;
    }
}

Vector ThetaOp::half_apply(const Vector& x, const Vector& r) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::dense:
            return chol_lt_ * x;
        default:
            return effective_diagonal(r).cwiseSqrt().cwiseProduct(x);
    }
}

Vector l1_theta_diagonal(const Vector& r) {
    Vector d(r.size());
    for (Index i = 0; i < r.size(); ++i) {
        d(i) = r(i) != 0.0 ? 1.0 / std::abs(r(i)) : 1.0;
    }
    return d;
}

Vector l1_theta_smoothed(const Vector& r) {
    const double floor = 1e-10 * (1.0 + r.lpNorm<Eigen::Infinity>());
    Vector d(r.size());
    for (Index i = 0; i < r.size(); ++i) {
        d(i) = 1.0 / std::max(std::abs(r(i)), floor);
    }
    return d;
}

double weighted_norm_sq(const Vector& r, const Vector& diag) {
    if (r.size() != diag.size()) {
        throw ContractError("weighted_norm_sq: length mismatch");
    }
    double acc = 0.0;
    for (Index i = 0; i < r.size(); ++i) acc += diag(i) * r(i) * r(i);
    return acc;
}

Vector newton_solve(const std::function<Vector(const Vector&)>& residual_fn,
                    const std::function<Matrix(const Vector&)>& jacobian_fn,
                    const Vector& y0, const NewtonConfig& config, int* iterations) {
    config.validate();
    Vector y = y0;
    Vector r = residual_fn(y);
    const double target = config.atol + config.rtol * r.norm();
    int it = 0;
    while (r.norm() > target) {
        if (it >= config.max_iterations) {
            throw SolverError("newton: no convergence after " +
                                  std::to_string(config.max_iterations) + " iterations",
                              r.norm());
        }
        Eigen::FullPivLU<Matrix> lu(jacobian_fn(y));
        if (!lu.isInvertible()) {
            throw SolverError("newton: singular Jacobian");
        }
        y -= lu.solve(r);
        r = residual_fn(y);
        if (!r.allFinite()) {
            throw NumericalError("newton: non-finite residual during iteration");
        }
        ++it;
    }
    if (iterations) *iterations = it;
    return y;
}

Vector gauss_newton_solve(const std::function<Vector(const Vector&)>& residual_fn,
                          const std::function<Matrix(const Vector&)>& jv_fn,
                          const ThetaOp& theta, const Vector& y0,
                          const NewtonConfig& config,
                          const std::function<void(int, const Vector&)>& on_iterate,
                          int* iterations) {
    config.validate();
    Vector y = y0;
    double g0 = -1.0;
    int it = 0;
    while (true) {
        Vector r = residual_fn(y);
        Matrix jv = jv_fn(y);
        Vector grad = jv.transpose() * theta.apply(r, r);
        const double gnorm = grad.norm();
        if (g0 < 0.0) g0 = gnorm;
        if (gnorm <= config.atol + config.rtol * g0) break;
        if (it >= config.max_iterations) {
            throw SolverError("gauss-newton: no convergence after " +
                                  std::to_string(config.max_iterations) + " iterations",
                              gnorm);
        }
        Matrix b = theta.half_apply(jv, r);
        Vector rhs = theta.half_apply(r, r);
        Eigen::ColPivHouseholderQR<Matrix> qr(b);
        if (qr.rank() < b.cols()) {
            throw SolverError("gauss-newton: rank-deficient J V in least-squares solve");
        }
        Vector step = qr.solve(rhs);
        y -= step;
        if (!y.allFinite()) {
            throw NumericalError("gauss-newton: non-finite iterate");
        }
        ++it;
        if (on_iterate) on_iterate(it, y);
        // Reweighted iterations (l1) approach their fixed point with a
        // gradient that stalls near the weighting floor; a stagnant step
        // means the iteration is numerically converged.
        if (step.lpNorm<Eigen::Infinity>() <=
            1e-14 * (1.0 + y.lpNorm<Eigen::Infinity>())) {
            break;
        }
    }
    if (iterations) *iterations = it;
    return y;
}

}  // namespace prom
