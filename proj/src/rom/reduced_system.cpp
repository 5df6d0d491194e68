// SPDX-License-Identifier: Apache-2.0

#include "prom/rom/reduced_system.hpp"

#include <Eigen/LU>

namespace prom {

DirectReducedEvaluator::DirectReducedEvaluator(const SemiDiscreteModel& model,
                                               ParamPoint mu, const ReducedBasis& basis,
                                               LeftBasisStrategy strategy)
    : model_(model), mu_(std::move(mu)), basis_(basis), strategy_(std::move(strategy)) {
    if (basis_.full_dim() != model_.dim()) {
        throw ContractError("rom: basis does not match the model dimension");
    }
    mv_ = Matrix(model_.dim(), basis_.n());
    for (Index j = 0; j < basis_.n(); ++j) {
        mv_.col(j) = model_.mass_apply(basis_.v.col(j));
    }
    mhat_ = basis_.v.transpose() * mv_;
}

Vector DirectReducedEvaluator::stage_residual_full(const Vector& y,
                                                   const StageProblem& p) const {
    Vector r = model_.f_eval(basis_.reconstruct(y), mu_);
    if (p.c_dt != 0.0) {
        r += p.c_dt * (mv_ * (y - p.z));
    }
    require_finite(r, "reduced stage residual");
    return r;
}

void DirectReducedEvaluator::rebuild(const Vector& y, const StageProblem& p) {
    if (!petrov_galerkin()) return;
    Vector u = basis_.reconstruct(y);
    Matrix stage_jv = model_.jacobian_apply_block(u, mu_, basis_.v);
    if (p.c_dt != 0.0) stage_jv += p.c_dt * mv_;
    ThetaOp theta = strategy_.weighting();
    if (theta.is_identity()) {
        w_ = stage_jv;
    } else {
        Vector r = stage_residual_full(y, p);
        w_ = theta.apply(stage_jv, r);
    }
    gn_matrix_ = w_.transpose() * stage_jv;
}

Vector DirectReducedEvaluator::reduced_residual(const Vector& y, const StageProblem& p) {
    Vector r = stage_residual_full(y, p);
    if (!petrov_galerkin()) {
        return basis_.v.transpose() * r;
    }
    if (w_.size() == 0) {
        throw ContractError("rom: test basis queried before any rebuild");
    }
    return w_.transpose() * r;
}

Matrix DirectReducedEvaluator::reduced_jacobian(const Vector& y, const StageProblem& p) {
    if (petrov_galerkin()) {
        if (gn_matrix_.size() == 0) {
            throw ContractError("rom: test basis queried before any rebuild");
        }
        return gn_matrix_;
    }
    Vector u = basis_.reconstruct(y);
    Matrix jv = model_.jacobian_apply_block(u, mu_, basis_.v);
    Matrix reduced = basis_.v.transpose() * jv;
    if (p.c_dt != 0.0) reduced += p.c_dt * mhat_;
    return reduced;
}

void RomStageSolver::begin_step(double, const Vector&) { needs_rebuild_ = true; }

Vector RomStageSolver::solve_stage(const StageProblem& problem, const Vector& guess) {
    Vector y = guess;
    double qnorm = 0.0;
    try {
        double target = -1.0;
        for (int it = 0; it <= config_.max_iterations; ++it) {
            if (evaluator_.petrov_galerkin() &&
                (needs_rebuild_ || evaluator_.policy() == RecomputePolicy::per_iteration)) {
                evaluator_.rebuild(y, problem);
                needs_rebuild_ = false;
            }
            Vector q = evaluator_.reduced_residual(y, problem);
            qnorm = q.norm();
            if (target < 0.0) target = config_.atol + config_.rtol * qnorm;
            if (qnorm <= target) return y;
            if (it == config_.max_iterations) break;
            Matrix g = evaluator_.reduced_jacobian(y, problem);
            Eigen::FullPivLU<Matrix> lu(g);
            if (!lu.isInvertible()) {
                throw SolverError("rom: singular reduced stage system");
            }
            y -= lu.solve(q);
            if (!y.allFinite()) {
                throw NumericalError("rom: non-finite reduced iterate");
            }
        }
    } catch (const NumericalError& e) {
        throw StepFailure(std::string("reduced stage solve failed: ") + e.what(),
                          problem.t, qnorm);
    } catch (const SolverError& e) {
        throw StepFailure(std::string("reduced stage solve failed: ") + e.what(),
                          problem.t, qnorm);
    }
    throw StepFailure("reduced stage solve did not converge", problem.t, qnorm);
}

Vector galerkin_reduced_residual(const SemiDiscreteModel& model, const ReducedBasis& basis,
                                 const Vector& y, const Vector& udot,
                                 const ParamPoint& mu) {
    if (y.size() != basis.n()) {
        throw ContractError("rom: reduced coordinate length mismatch");
    }
    Vector r = residual(model, basis.reconstruct(y), udot, mu);
    return basis.v.transpose() * r;
}

std::pair<Vector, Matrix> pg_reduced_system(const SemiDiscreteModel& model,
                                            const ReducedBasis& basis,
                                            const LeftBasisStrategy& strategy,
                                            const Vector& y, const ParamPoint& mu) {
    if (y.size() != basis.n()) {
        throw ContractError("rom: reduced coordinate length mismatch");
    }
    Vector u = basis.reconstruct(y);
    Vector r = model.f_eval(u, mu);
    Matrix jv = model.jacobian_apply_block(u, mu, basis.v);
    if (!strategy.petrov_galerkin()) {
        return {basis.v.transpose() * r, basis.v.transpose() * jv};
    }
    ThetaOp theta = strategy.weighting();
    Matrix w = theta.is_identity() ? jv : theta.apply(jv, r);
    return {w.transpose() * r, w.transpose() * jv};
}

Vector solve_prom_step(const SemiDiscreteModel& model, const ReducedBasis& basis,
                       const LeftBasisStrategy& strategy, const ButcherTableau& tableau,
                       const Vector& y_n, double t_n, double dt,
                       const NewtonConfig& config) {
    DirectReducedEvaluator evaluator(model, ParamPoint::none(), basis, strategy);
    RomStageSolver solver(evaluator, config);
    return dirk_step(solver, tableau, t_n, y_n, dt);
}

double step_direction_error_check(const Matrix& j, const Vector& r, const Matrix& v,
                                  const Matrix& theta) {
    Eigen::FullPivLU<Matrix> lu(j);
    if (!lu.isInvertible()) {
        throw SolverError("step direction check: J is singular");
    }
    Vector du = lu.solve(-r);

    Matrix w = theta * j * v;
    Matrix reduced = w.transpose() * (j * v);
    Eigen::FullPivLU<Matrix> rlu(reduced);
    if (!rlu.isInvertible()) {
        throw SolverError("step direction check: singular reduced system");
    }
    Vector x_pg = rlu.solve(-w.transpose() * r);

    Matrix metric = j.transpose() * theta * j;
    Matrix normal = v.transpose() * metric * v;
    Vector rhs = v.transpose() * (metric * du);
    Vector x_min = normal.ldlt().solve(rhs);

    return (x_pg - x_min).lpNorm<Eigen::Infinity>();
}

}  // namespace prom
