// SPDX-License-Identifier: Apache-2.0

#include "prom/timeint/integrators.hpp"

#include <cmath>

namespace prom {

Vector NewtonStageSolver::solve_stage(const StageProblem& problem, const Vector& guess) {
    auto stage_residual = [&](const Vector& w) {
        Vector r = problem.c_dt * system_.mass_apply(w - problem.z) +
                   system_.force(problem.t, w);
        if (!r.allFinite()) {
            throw NumericalError("stage residual has non-finite entries");
        }
        return r;
    };
    Vector w = guess;
    double rnorm = 0.0;
    try {
        Vector r = stage_residual(w);
        rnorm = r.norm();
        const double target = config_.atol + config_.rtol * rnorm;
        for (int it = 0; it <= config_.max_iterations; ++it) {
            if (rnorm <= target) return w;
            if (it == config_.max_iterations) break;
            w -= system_.solve_shifted(problem.t, w, problem.c_dt, r);
            r = stage_residual(w);
            rnorm = r.norm();
        }
    } catch (const NumericalError& e) {
        throw StepFailure(std::string("stage solve failed: ") + e.what(), problem.t, rnorm);
    } catch (const SolverError& e) {
        throw StepFailure(std::string("stage solve failed: ") + e.what(), problem.t, rnorm);
    }
    throw StepFailure("stage Newton did not converge", problem.t, rnorm);
}

Vector dirk_step(StageSolver& solver, const ButcherTableau& tableau, double t,
                 const Vector& u, double dt) {
    if (dt <= 0.0) {
        throw ContractError("dirk_step: dt must be positive");
    }
    tableau.validate();
    const Index s = tableau.stages();
    const Index n = u.size();
    solver.begin_step(t, u);
    Matrix k(n, s);
    for (Index i = 0; i < s; ++i) {
        Vector z = u;
        for (Index j = 0; j < i; ++j) z += dt * tableau.a(i, j) * k.col(j);
        StageProblem problem;
        problem.t = t + tableau.c(i) * dt;
        problem.c_dt = 1.0 / (dt * tableau.a(i, i));
        problem.z = z;
        Vector w = solver.solve_stage(problem, z);
        k.col(i) = problem.c_dt * (w - z);
    }
    Vector out = u;
    for (Index i = 0; i < s; ++i) out += dt * tableau.b(i) * k.col(i);
    return out;
}

Vector bdf3_step(StageSolver& solver, double t_next, const Vector& u_n,
                 const Vector& u_nm1, const Vector& u_nm2, double dt) {
    if (dt <= 0.0) {
        throw ContractError("bdf3_step: dt must be positive");
    }
    solver.begin_step(t_next - dt, u_n);
    StageProblem problem;
    problem.t = t_next;
    problem.c_dt = 11.0 / (6.0 * dt);
    problem.z = (18.0 * u_n - 9.0 * u_nm1 + 2.0 * u_nm2) / 11.0;
    return solver.solve_stage(problem, u_n);
}

Vector rk4_step(const std::function<Vector(double, const Vector&)>& rhs, double t,
                const Vector& u, double dt) {
    Vector k1 = rhs(t, u);
    Vector k2 = rhs(t + 0.5 * dt, u + 0.5 * dt * k1);
    Vector k3 = rhs(t + 0.5 * dt, u + 0.5 * dt * k2);
    Vector k4 = rhs(t + dt, u + dt * k3);
    return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TransientResult run_transient(StageSolver& solver, const TransientOptions& options,
                              const Vector& w0, const StepObserver& observe) {
    if (options.dt <= 0.0 || options.t_end < options.t0) {
        throw ConfigError("transient: invalid time window or step");
    }
    const auto nsteps = static_cast<Index>(
        std::llround((options.t_end - options.t0) / options.dt));
    TransientResult result;
    Vector w = w0;
    Vector wm1, wm2;  // BDF history
    if (observe) observe(0, options.t0, w);
    const ButcherTableau dirk = options.scheme == TimeScheme::dirk2
                                    ? dirk2_tableau()
                                    : dirk3_tableau();
    const ButcherTableau startup = dirk3_tableau();
    for (Index step = 1; step <= nsteps; ++step) {
        const double t_prev = options.t0 + static_cast<double>(step - 1) * options.dt;
        const double t_next = options.t0 + static_cast<double>(step) * options.dt;
        Vector next;
        try {
            if (options.scheme == TimeScheme::bdf3) {
                if (step <= 2) {
                    next = dirk_step(solver, startup, t_prev, w, options.dt);
                } else {
                    next = bdf3_step(solver, t_next, w, wm1, wm2, options.dt);
                }
            } else {
                next = dirk_step(solver, dirk, t_prev, w, options.dt);
            }
            if (!next.allFinite()) {
                throw StepFailure("non-finite state after step", t_next, 0.0);
            }
        } catch (const StepFailure& e) {
            result.completed = false;
            result.diverged_at = std::min(t_next, e.time > 0.0 ? e.time : t_next);
            return result;
        } catch (const SolverError&) {
            result.completed = false;
            result.diverged_at = t_next;
            return result;
        } catch (const NumericalError&) {
            result.completed = false;
            result.diverged_at = t_next;
            return result;
        }
        wm2 = wm1;
        wm1 = w;
        w = next;
        result.steps = step;
        if (observe) observe(step, t_next, w);
    }
    return result;
}

}  // namespace prom
