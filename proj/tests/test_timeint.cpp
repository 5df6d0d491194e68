// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "prom/models/linear_model.hpp"
#include "prom/models/quadratic_model.hpp"
#include "prom/timeint/integrators.hpp"
#include "prom/timeint/newton.hpp"
#include "prom/timeint/tableau.hpp"

#include "support.hpp"

using namespace prom;
using namespace prom::testing;

namespace {

const ParamPoint kMu = ParamPoint::none();

// M udot + g(t, u) = 0 with g = u - cos(t): udot = -u + cos(t).
class ForcedDecay : public OdeSystem {
public:
    Index dim() const override { return 1; }
    Vector mass_apply(const Vector& x) const override { return x; }
    Vector force(double t, const Vector& w) const override {
        Vector g(1);
        g(0) = w(0) - std::cos(t);
        return g;
    }
    Vector solve_shifted(double, const Vector&, double c, const Vector& rhs) const override {
        return rhs / (c + 1.0);
    }
};

double forced_decay_exact(double u0, double t) {
    return (u0 - 0.5) * std::exp(-t) + 0.5 * (std::cos(t) + std::sin(t));
}

// udot = lambda u.
class ScalarDecay : public OdeSystem {
public:
    explicit ScalarDecay(double lambda) : lambda_(lambda) {}
    Index dim() const override { return 1; }
    Vector mass_apply(const Vector& x) const override { return x; }
    Vector force(double, const Vector& w) const override { return -lambda_ * w; }
    Vector solve_shifted(double, const Vector&, double c, const Vector& rhs) const override {
        return rhs / (c - lambda_);
    }

private:
    double lambda_;
};

class ZeroDynamics : public OdeSystem {
public:
    explicit ZeroDynamics(Index n) : n_(n) {}
    Index dim() const override { return n_; }
    Vector mass_apply(const Vector& x) const override { return x; }
    Vector force(double, const Vector&) const override { return Vector::Zero(n_); }
    Vector solve_shifted(double, const Vector&, double c, const Vector& rhs) const override {
        return rhs / c;
    }

private:
    Index n_;
};

double run_scheme_error(TimeScheme scheme, double dt) {
    ForcedDecay system;
    NewtonConfig cfg;
    cfg.atol = 1e-12;
    cfg.rtol = 0.0;
    cfg.max_iterations = 50;
    NewtonStageSolver solver(system, cfg);
    TransientOptions opts;
    opts.scheme = scheme;
    opts.t_end = 1.0;
    opts.dt = dt;
    Vector u0(1);
    u0 << 1.0;
    Vector last;
    TransientResult res = run_transient(solver, opts, u0,
                                        [&](Index, double, const Vector& w) { last = w; });
    REQUIRE(res.completed);
    return std::abs(last(0) - forced_decay_exact(1.0, 1.0));
}

}  // namespace

TEST_CASE("dirk2 tableau closed form") {
    ButcherTableau tab = dirk2_tableau();
    tab.validate();
    CHECK(tab.a(0, 0) == doctest::Approx(0.29289321881345254).epsilon(1e-15));
    CHECK(std::abs(tab.b.sum() - 1.0) < 1e-15);
    CHECK(std::abs(tab.a.row(1).sum() - 1.0) < 1e-15);
}

TEST_CASE("dirk3 tableau closed form") {
    ButcherTableau tab = dirk3_tableau();
    tab.validate();
    CHECK(std::abs(tab.a(0, 0) - 0.4358665215084590) < 1e-14);
    CHECK(std::abs(tab.b.sum() - 1.0) < 1e-14);
    CHECK(std::abs(tab.c(1) - (1.0 + tab.a(0, 0)) / 2.0) < 1e-14);
}

TEST_CASE("observed convergence orders on udot = -u + cos t") {
    std::vector<double> dts = {0.1, 0.05, 0.025, 0.0125};
    auto study = [&](TimeScheme scheme) {
        std::vector<double> errs;
        for (double dt : dts) errs.push_back(run_scheme_error(scheme, dt));
        return observed_order(errs);
    };
    CHECK(study(TimeScheme::dirk2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(study(TimeScheme::dirk3) == doctest::Approx(3.0).epsilon(0.034));
    CHECK(study(TimeScheme::bdf3) == doctest::Approx(3.0).epsilon(0.034));
}

TEST_CASE("one dirk2 step matches the scheme's stability function") {
    ScalarDecay system(-1.0);
    NewtonConfig cfg;
    cfg.atol = 1e-14;
    NewtonStageSolver solver(system, cfg);
    ButcherTableau tab = dirk2_tableau();
    Vector u(1);
    u << 1.0;
    Vector u1 = dirk_step(solver, tab, 0.0, u, 0.1);
    CHECK(u1(0) == doctest::Approx(stability_function(tab, -0.1)).epsilon(1e-12));

    // ten steps stay within 1e-3 of e^{-t}
    Vector w = u;
    for (int s = 0; s < 10; ++s) w = dirk_step(solver, tab, 0.1 * s, w, 0.1);
    CHECK(std::abs(w(0) - std::exp(-1.0)) < 1e-3);
}

TEST_CASE("zero dynamics leave the state unchanged") {
    ZeroDynamics system(5);
    NewtonStageSolver solver(system, NewtonConfig{});
    std::mt19937_64 rng(3);
    Vector u = random_vector(5, rng);
    Vector u1 = dirk_step(solver, dirk2_tableau(), 0.0, u, 0.25);
    for (Index i = 0; i < 5; ++i) CHECK(u1(i) == u(i));
    Vector u2 = bdf3_step(solver, 0.75, u, u, u, 0.25);
    for (Index i = 0; i < 5; ++i) CHECK(u2(i) == u(i));
}

TEST_CASE("L-stability smoke test") {
    for (const ButcherTableau& tab : {dirk2_tableau(), dirk3_tableau()}) {
        ScalarDecay system(-1e6);  // lambda dt = -1e6 at dt = 1
        NewtonConfig cfg;
        cfg.atol = 1e-8;
        cfg.rtol = 1e-14;
        NewtonStageSolver solver(system, cfg);
        Vector u(1);
        u << 1.0;
        Vector u1 = dirk_step(solver, tab, 0.0, u, 1.0);
        CHECK(std::abs(u1(0)) < 1e-3);
    }
}

TEST_CASE("bdf3 startup gives third-order accuracy on udot = cos t") {
    // M udot + g = 0 with g = -cos(t); exact solution sin(t).
    class Quadrature : public OdeSystem {
    public:
        Index dim() const override { return 1; }
        Vector mass_apply(const Vector& x) const override { return x; }
        Vector force(double t, const Vector&) const override {
            Vector g(1);
            g(0) = -std::cos(t);
            return g;
        }
        Vector solve_shifted(double, const Vector&, double c,
                             const Vector& rhs) const override {
            return rhs / c;
        }
    };
    Quadrature system;
    NewtonConfig cfg;
    cfg.atol = 1e-14;
    NewtonStageSolver solver(system, cfg);
    std::vector<double> errs;
    for (double dt : {0.1, 0.05, 0.025}) {
        TransientOptions opts;
        opts.scheme = TimeScheme::bdf3;
        opts.t_end = 2.0;
        opts.dt = dt;
        Vector last;
        run_transient(solver, opts, Vector::Zero(1),
                      [&](Index, double, const Vector& w) { last = w; });
        errs.push_back(std::abs(last(0) - std::sin(2.0)));
    }
    CHECK(observed_order(errs) == doctest::Approx(3.0).epsilon(0.04));
}

TEST_CASE("newton: linear residual converges in one iteration") {
    std::mt19937_64 rng(5);
    Matrix a = random_matrix(6, 6, rng) + 6.0 * Matrix::Identity(6, 6);
    Vector b = random_vector(6, rng);
    int iters = 0;
    Vector y = newton_solve([&](const Vector& y) { return Vector(a * y - b); },
                            [&](const Vector&) { return a; }, Vector::Zero(6),
                            NewtonConfig{}, &iters);
    CHECK(iters == 1);
    CHECK((a * y - b).norm() < 1e-10);
}

TEST_CASE("newton: scalar square root") {
    auto r = [](const Vector& y) {
        Vector out(1);
        out(0) = y(0) * y(0) - 4.0;
        return out;
    };
    auto j = [](const Vector& y) {
        Matrix out(1, 1);
        out(0, 0) = 2.0 * y(0);
        return out;
    };
    Vector y0(1);
    y0 << 3.0;
    Vector y = newton_solve(r, j, y0, NewtonConfig{});
    CHECK(y(0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("newton: inconsistent Jacobian raises non-convergence") {
    auto r = [](const Vector& y) {
        Vector out(1);
        out(0) = y(0) * y(0) - 4.0;
        return out;
    };
    auto j = [](const Vector& y) {
        Matrix out(1, 1);
        out(0, 0) = -2.0 * y(0);  // wrong sign drives the iteration away
        return out;
    };
    Vector y0(1);
    y0 << 3.0;
    CHECK_THROWS_AS(newton_solve(r, j, y0, NewtonConfig{}), SolverError);
}

TEST_CASE("gauss-newton: identity weighting solves linear least squares directly") {
    std::mt19937_64 rng(7);
    Matrix a = random_matrix(20, 4, rng);
    Vector b = random_vector(20, rng);
    int iters = 0;
    Vector y = gauss_newton_solve(
        [&](const Vector& y) { return Vector(a * y - b); },
        [&](const Vector&) { return a; }, ThetaOp::identity(), Vector::Zero(4),
        NewtonConfig{}, {}, &iters);
    CHECK(iters == 1);
    Vector oracle = (a.transpose() * a).ldlt().solve(a.transpose() * b);
    CHECK((y - oracle).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("gauss-newton iterates equal Petrov-Galerkin iterates with W = Theta J V") {
    // Small nonlinear model: N = 20, n = 3.
    std::mt19937_64 rng(11);
    const Index n = 20, r = 3;
    SparseMatrix a = random_sparse(n, 3, rng, 1.0, 3.0);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::normal_distribution<double> normal(0.0, 0.3);
    std::vector<QuadTerm> terms;
    for (int k = 0; k < 40; ++k) terms.push_back({pick(rng), pick(rng), pick(rng), normal(rng)});
    QuadraticModel model(a, terms, random_vector(n, rng));
    Matrix v = orthonormal_columns(n, r, rng);
    Vector y0 = 0.1 * random_vector(r, rng);

    for (bool identity : {true, false}) {
        ThetaOp theta = identity ? ThetaOp::identity() : ThetaOp::dense(random_spd(n, rng));
        auto resid = [&](const Vector& y) { return model.f_eval(v * y, kMu); };
        auto jv = [&](const Vector& y) { return model.jacobian_apply_block(v * y, kMu, v); };

        std::vector<Vector> gn_iterates;
        NewtonConfig cfg;
        cfg.atol = 1e-12;
        cfg.rtol = 0.0;
        cfg.max_iterations = 30;
        gauss_newton_solve(resid, jv, theta, y0, cfg,
                           [&](int, const Vector& y) { gn_iterates.push_back(y); });

        // Petrov-Galerkin route: W = Theta J V rebuilt per iteration, LU solve.
        Vector y = y0;
        for (const Vector& expected : gn_iterates) {
            Matrix jvm = jv(y);
            Vector res = resid(y);
            Matrix w = theta.apply(jvm, res);
            Matrix reduced = w.transpose() * jvm;
            Vector rhs = w.transpose() * res;
            y -= reduced.fullPivLu().solve(rhs);
            CHECK((y - expected).lpNorm<Eigen::Infinity>() < 1e-10);
        }
    }
}

TEST_CASE("gauss-newton with l1 reweighting matches an IRLS reference") {
    std::mt19937_64 rng(13);
    Matrix a = random_matrix(30, 4, rng);
    Vector b = random_vector(30, rng);
    NewtonConfig cfg;
    cfg.atol = 1e-8;
    cfg.rtol = 0.0;
    cfg.max_iterations = 500;
    Vector y = gauss_newton_solve([&](const Vector& y) { return Vector(a * y - b); },
                                  [&](const Vector&) { return a; }, ThetaOp::l1(),
                                  Vector::Zero(4), cfg);
    Vector oracle = irls_l1_reference(a, b, 2000, 1e-16);
    CHECK((y - oracle).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("l1 weighting identity") {
    std::mt19937_64 rng(17);
    Vector r = random_vector(9, rng);
    r(2) = 0.0;
    r(7) = 0.0;
    Vector d = l1_theta_diagonal(r);
    CHECK(d(2) == 1.0);
    CHECK(weighted_norm_sq(r, d) ==
          doctest::Approx(r.lpNorm<1>()).epsilon(1e-14));
}

TEST_CASE("theta weighting rejects non-SPD matrices") {
    Matrix bad = -Matrix::Identity(3, 3);
    CHECK_THROWS_AS(ThetaOp::dense(bad), SolverError);
}

TEST_CASE("run_transient classifies divergence instead of throwing") {
    // Blows up in finite time: udot = u^2, u(0) = 1 diverges at t = 1.
    class Blowup : public OdeSystem {
    public:
        Index dim() const override { return 1; }
        Vector mass_apply(const Vector& x) const override { return x; }
        Vector force(double, const Vector& w) const override {
            Vector g(1);
            g(0) = -w(0) * w(0);
            return g;
        }
        Vector solve_shifted(double, const Vector& w, double c,
                             const Vector& rhs) const override {
            return rhs / (c - 2.0 * w(0));
        }
    };
    Blowup system;
    NewtonConfig cfg;
    cfg.max_iterations = 8;
    NewtonStageSolver solver(system, cfg);
    TransientOptions opts;
    opts.t_end = 2.0;
    opts.dt = 0.05;
    Vector u0(1);
    u0 << 1.0;
    TransientResult res = run_transient(solver, opts, u0);
    CHECK_FALSE(res.completed);
    CHECK(res.diverged_at <= 2.0);
    CHECK(res.diverged_at > 0.0);
}
