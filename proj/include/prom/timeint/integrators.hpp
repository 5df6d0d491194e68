// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>

#include "prom/core/model.hpp"
#include "prom/timeint/newton.hpp"
#include "prom/timeint/tableau.hpp"

namespace prom {

/// Implicit stage (or multistep) equation: find w with
///   c_dt * M (w - z) + g(t, w) = 0.
struct StageProblem {
    double t = 0.0;
    double c_dt = 0.0;
    Vector z;
};

/// Solves the implicit stage equations of an M dw/dt + g(t, w) = 0 system.
/// PROM solvers implement this directly; HDM-style systems go through
/// NewtonStageSolver.
class StageSolver {
public:
    virtual ~StageSolver() = default;
    virtual Index dim() const = 0;
    /// Called once per time step before its stages (hook for per-timestep
    /// test-basis freezing).
    virtual void begin_step(double /*t*/, const Vector& /*w*/) {}
    virtual Vector solve_stage(const StageProblem& problem, const Vector& guess) = 0;
};

/// First-order system M dw/dt + g(t, w) = 0 with the linear-solve hook Newton
/// stage solves need.
class OdeSystem {
public:
    virtual ~OdeSystem() = default;
    virtual Index dim() const = 0;
    virtual Vector mass_apply(const Vector& x) const = 0;
    virtual Vector force(double t, const Vector& w) const = 0;
    /// Solve (c M + dg/dw (t, w)) x = rhs.
    virtual Vector solve_shifted(double t, const Vector& w, double c,
                                 const Vector& rhs) const = 0;
};

/// Exact-Newton stage solver; failures surface as StepFailure carrying the
/// stage time and final residual norm.
class NewtonStageSolver : public StageSolver {
public:
    NewtonStageSolver(const OdeSystem& system, NewtonConfig config)
        : system_(system), config_(config) {
        config_.validate();
    }
    Index dim() const override { return system_.dim(); }
    Vector solve_stage(const StageProblem& problem, const Vector& guess) override;

private:
    const OdeSystem& system_;
    NewtonConfig config_;
};

/// Adapter exposing a semi-discrete model (autonomous) as an OdeSystem.
class ModelOdeSystem : public OdeSystem {
public:
    ModelOdeSystem(const SemiDiscreteModel& model, ParamPoint mu)
        : model_(model), mu_(std::move(mu)) {}
    Index dim() const override { return model_.dim(); }
    Vector mass_apply(const Vector& x) const override { return model_.mass_apply(x); }
    Vector force(double, const Vector& w) const override { return model_.f_eval(w, mu_); }
    Vector solve_shifted(double, const Vector& w, double c,
                         const Vector& rhs) const override {
        return model_.solve_shifted_jacobian(w, mu_, c, rhs);
    }

private:
    const SemiDiscreteModel& model_;
    ParamPoint mu_;
};

/// One diagonally implicit Runge-Kutta step from (t, u) to t + dt.
Vector dirk_step(StageSolver& solver, const ButcherTableau& tableau, double t,
                 const Vector& u, double dt);

/// One BDF3 step to t_next given the three most recent equispaced states
/// (u_n newest). Startup is the caller's concern; run_transient uses DIRK3
/// for the first two steps.
Vector bdf3_step(StageSolver& solver, double t_next, const Vector& u_n,
                 const Vector& u_nm1, const Vector& u_nm2, double dt);

/// Classical explicit RK4 on dw/dt = rhs(t, w). Test oracle for small models.
Vector rk4_step(const std::function<Vector(double, const Vector&)>& rhs, double t,
                const Vector& u, double dt);

enum class TimeScheme { dirk2, dirk3, bdf3 };

struct TransientOptions {
    TimeScheme scheme = TimeScheme::dirk2;
    double t0 = 0.0;
    double t_end = 1.0;
    double dt = 1e-3;
};

struct TransientResult {
    bool completed = true;
    double diverged_at = 0.0;  // meaningful when !completed
    Index steps = 0;
};

using StepObserver = std::function<void(Index step, double t, const Vector& w)>;

/// Fixed-step transient run. Stage-solve failures and non-finite states are
/// recorded as divergence (with the first offending time), not rethrown.
/// The observer sees the initial state as step 0.
TransientResult run_transient(StageSolver& solver, const TransientOptions& options,
                              const Vector& w0, const StepObserver& observe = {});

}  // namespace prom
