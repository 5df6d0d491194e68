// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <random>

#include "prom/core/instrument.hpp"
#include "prom/models/burgers_model.hpp"
#include "prom/models/linear_model.hpp"
#include "prom/models/quadratic_model.hpp"
#include "prom/models/spectral_model.hpp"
#include "prom/rom/pod.hpp"
#include "prom/rom/precompute.hpp"
#include "prom/rom/reduced_system.hpp"
#include "prom/rom/snapshots.hpp"

#include "support.hpp"

using namespace prom;
using namespace prom::testing;

namespace {

const ParamPoint kMu = ParamPoint::none();

QuadraticModel random_quadratic(Index n, std::mt19937_64& rng, int terms_count = 80,
                                double term_scale = 0.3) {
    SparseMatrix a = random_sparse(n, 3, rng, 1.0, 3.0);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::normal_distribution<double> normal(0.0, term_scale);
    std::vector<QuadTerm> terms;
    for (int k = 0; k < terms_count; ++k) {
        terms.push_back({pick(rng), pick(rng), pick(rng), normal(rng)});
    }
    return QuadraticModel(a, terms, random_vector(n, rng));
}

ReducedBasis basis_from_columns(const Vector& u0, const Matrix& v) {
    ReducedBasis basis;
    basis.u0 = u0;
    basis.v = v;
    basis.sigma = Vector::Ones(v.cols());
    return basis;
}

}  // namespace

TEST_CASE("snapshot counting matches the sampling protocol") {
    SUBCASE("window [0,150] at interval 0.2") {
        SnapshotCollector c(4, 0.0, 0.1, 0.2, 0.0, 150.0);
        Vector w = Vector::Zero(4);
        const Index steps = 1500;
        c.observe(0, 0.0, w);
        for (Index s = 1; s <= steps; ++s) c.observe(s, 0.1 * static_cast<double>(s), w);
        CHECK(c.take().count() == 751);
    }
    SUBCASE("window [0,20] at interval 0.1") {
        SnapshotCollector c(4, 0.0, 0.05, 0.1, 0.0, 20.0);
        Vector w = Vector::Zero(4);
        c.observe(0, 0.0, w);
        for (Index s = 1; s <= 400; ++s) c.observe(s, 0.05 * static_cast<double>(s), w);
        CHECK(c.take().count() == 201);
    }
    SUBCASE("interval equal to dt keeps every step") {
        Matrix states = Matrix::Random(3, 11);
        Vector times(11);
        for (Index j = 0; j < 11; ++j) times(j) = 0.01 * static_cast<double>(j);
        SnapshotSet set = collect_snapshots(states, times, 0.01);
        CHECK(set.count() == 11);
    }
    SUBCASE("non-multiple interval is rejected") {
        CHECK_THROWS_AS(SnapshotCollector(4, 0.0, 0.1, 0.25, 0.0, 1.0), ConfigError);
    }
}

TEST_CASE("pod: rank-one snapshot matrix") {
    std::mt19937_64 rng(3);
    Vector s = random_vector(20, rng);
    SnapshotSet set;
    set.states = Matrix(20, 2);
    set.states.col(0) = s;
    set.states.col(1) = 2.0 * s;
    set.times = Vector::Zero(2);
    PodOptions opt;
    opt.energy = 0.999999;
    opt.normalize = false;
    ReducedBasis basis = build_pod(set, Vector::Zero(20), opt);
    CHECK(basis.n() == 1);
    Vector unit = s / s.norm();
    double align = std::abs(basis.v.col(0).dot(unit));
    CHECK(align == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pod: singular values sorted and energy fractions use squares") {
    Matrix states = Matrix::Zero(6, 2);
    states(0, 0) = 3.0;  // orthogonal columns with norms 3 and 4
    states(1, 1) = 4.0;
    SnapshotSet set;
    set.states = states;
    set.times = Vector::Zero(2);
    PodOptions opt;
    opt.explicit_n = 2;
    opt.normalize = false;
    ReducedBasis basis = build_pod(set, Vector::Zero(6), opt);
    CHECK(basis.sigma(0) == doctest::Approx(4.0));
    CHECK(basis.sigma(1) == doctest::Approx(3.0));
    CHECK(pod_dimension_for_energy(basis.sigma, 16.0 / 25.0 - 1e-12) == 1);
    CHECK(pod_dimension_for_energy(basis.sigma, 16.0 / 25.0 + 1e-12) == 2);
}

TEST_CASE("pod: criterion monotonicity and orthonormality") {
    std::mt19937_64 rng(5);
    SnapshotSet set;
    set.states = random_matrix(40, 12, rng);
    set.times = Vector::Zero(12);
    Vector u0 = random_vector(40, rng);
    std::vector<Index> dims;
    for (double energy : {0.999, 0.9999, 0.99999}) {
        PodOptions opt;
        opt.energy = energy;
        ReducedBasis basis = build_pod(set, u0, opt);
        CHECK(basis.orthonormality_error() < 1e-12);
        dims.push_back(basis.n());
    }
    CHECK(dims[0] <= dims[1]);
    CHECK(dims[1] <= dims[2]);
}

TEST_CASE("pod: zero snapshot matrix is rejected") {
    SnapshotSet set;
    set.states = Matrix::Zero(10, 3);
    set.times = Vector::Zero(3);
    PodOptions opt;
    opt.energy = 0.99;
    CHECK_THROWS_AS(build_pod(set, Vector::Zero(10), opt), DegenerateBasisError);
}

TEST_CASE("pod: block normalization still yields an orthonormal basis") {
    std::mt19937_64 rng(7);
    SnapshotSet set;
    set.states = random_matrix(30, 8, rng);
    set.states.middleRows(15, 15) *= 1e3;  // second block much larger
    set.times = Vector::Zero(8);
    std::vector<StateBlock> blocks = {{"a", 0, 15}, {"b", 15, 15}};
    PodOptions opt;
    opt.energy = 0.9999;
    opt.normalize = true;
    ReducedBasis basis = build_pod(set, Vector::Zero(30), opt, blocks);
    CHECK(basis.orthonormality_error() < 1e-12);
    CHECK(basis.block_scales.size() == 2);
    CHECK(basis.block_scales(1) > basis.block_scales(0));
}

TEST_CASE("galerkin reduced residual: coordinate extraction and equilibrium") {
    std::mt19937_64 rng(11);
    QuadraticModel model = random_quadratic(12, rng);
    Matrix v = Matrix::Zero(12, 1);
    v(0, 0) = 1.0;
    ReducedBasis basis = basis_from_columns(Vector::Zero(12), v);
    Vector y = Vector::Zero(1);
    Vector udot = Vector::Zero(12);
    Vector q = galerkin_reduced_residual(model, basis, y, udot, kMu);
    Vector full = residual(model, Vector::Zero(12), udot, kMu);
    CHECK(q(0) == doctest::Approx(full(0)).epsilon(1e-14));
}

TEST_CASE("galerkin reduced residual matches a dense oracle on a linear model") {
    std::mt19937_64 rng(13);
    Matrix a = random_matrix(25, 25, rng);
    Vector b = random_vector(25, rng);
    LinearModel model(a, b, false);
    Matrix v = orthonormal_columns(25, 4, rng);
    Vector u0 = random_vector(25, rng);
    ReducedBasis basis = basis_from_columns(u0, v);
    Vector y = random_vector(4, rng);
    Vector udot = random_vector(25, rng);
    Vector q = galerkin_reduced_residual(model, basis, y, udot, kMu);
    Vector oracle = v.transpose() * (udot + a * (u0 + v * y) - b);
    CHECK((q - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("pg reduced system: galerkin strategy returns V^T quantities") {
    std::mt19937_64 rng(17);
    QuadraticModel model = random_quadratic(15, rng);
    Matrix v = orthonormal_columns(15, 3, rng);
    ReducedBasis basis = basis_from_columns(random_vector(15, rng), v);
    Vector y = random_vector(3, rng);
    auto [q, g] = pg_reduced_system(model, basis, LeftBasisStrategy::galerkin(), y, kMu);
    Vector u = basis.reconstruct(y);
    Vector oracle_q = v.transpose() * model.f_eval(u, kMu);
    Matrix oracle_g = v.transpose() * model.jacobian_apply_block(u, kMu, v);
    CHECK((q - oracle_q).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((g - oracle_g).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("pg reduced system with Theta = J^{-1} reproduces Galerkin on SPD models") {
    std::mt19937_64 rng(19);
    Matrix a = random_spd(20, rng);
    LinearModel model(a, random_vector(20, rng), true);
    Matrix v = orthonormal_columns(20, 4, rng);
    ReducedBasis basis = basis_from_columns(Vector::Zero(20), v);
    Vector y = random_vector(4, rng);

    Matrix theta = a.inverse();
    theta = 0.5 * (theta + theta.transpose());
    auto [q_pg, g_pg] = pg_reduced_system(
        model, basis, LeftBasisStrategy::theta_weighted(ThetaOp::dense(theta)), y, kMu);
    auto [q_gal, g_gal] =
        pg_reduced_system(model, basis, LeftBasisStrategy::galerkin(), y, kMu);
    CHECK((q_pg - q_gal).lpNorm<Eigen::Infinity>() < 1e-10);
    CHECK((g_pg - g_gal).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("l1 weighting example") {
    Vector r(3);
    r << 2.0, -0.5, 0.0;
    Vector d = l1_theta_diagonal(r);
    CHECK(d(0) == doctest::Approx(0.5));
    CHECK(d(1) == doctest::Approx(2.0));
    CHECK(d(2) == doctest::Approx(1.0));
    CHECK(weighted_norm_sq(r, d) == doctest::Approx(2.5));
    CHECK(r.lpNorm<1>() == doctest::Approx(2.5));
}

TEST_CASE("step direction equivalence (linear case)") {
    std::mt19937_64 rng(23);
    SUBCASE("random nonsymmetric J with identity weighting") {
        Matrix j = random_matrix(30, 30, rng) + 8.0 * Matrix::Identity(30, 30);
        Vector r = random_vector(30, rng);
        Matrix v = orthonormal_columns(30, 4, rng);
        CHECK(step_direction_error_check(j, r, v, Matrix::Identity(30, 30)) < 1e-10);
    }
    SUBCASE("exact solution inside the subspace is reconstructed") {
        Matrix j = Matrix::Zero(2, 2);
        j(0, 0) = 2.0;
        j(1, 1) = 3.0;
        Vector b(2);
        b << 2.0, 3.0;
        Matrix v(2, 1);
        v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        // J du = -r with r = -b gives du = (1,1), which lies in span(v).
        Vector r = -b;
        Matrix w = j * v;  // Theta = I
        Vector x = (w.transpose() * j * v).fullPivLu().solve(-w.transpose() * r);
        Vector du = v * x;
        CHECK(du(0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(du(1) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(step_direction_error_check(j, r, v, Matrix::Identity(2, 2)) < 1e-12);
    }
    SUBCASE("SPD J with Theta = J^{-1} matches the Galerkin reduced solve") {
        Matrix j = random_spd(20, rng);
        Vector r = random_vector(20, rng);
        Matrix v = orthonormal_columns(20, 3, rng);
        Matrix theta = j.inverse();
        theta = 0.5 * (theta + theta.transpose());
        CHECK(step_direction_error_check(j, r, v, theta) < 1e-10);
        // Galerkin reduced solve oracle
        Vector x_gal = (v.transpose() * j * v).ldlt().solve(-v.transpose() * r);
        Matrix w = theta * j * v;
        Vector x_pg = (w.transpose() * j * v).fullPivLu().solve(-w.transpose() * r);
        CHECK((x_gal - x_pg).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("nested-subspace monotonicity of the minimized weighted residual") {
    std::mt19937_64 rng(29);
    for (int inst = 0; inst < 100; ++inst) {
        Matrix j = random_matrix(25, 25, rng);
        Vector r = random_vector(25, rng);
        Matrix v = orthonormal_columns(25, 5, rng);
        Matrix theta_half = random_matrix(25, 25, rng);
        Matrix theta = theta_half * theta_half.transpose() + Matrix::Identity(25, 25);
        Eigen::LLT<Matrix> llt(theta);
        Matrix lt = Matrix(llt.matrixL()).transpose();
        double prev = std::numeric_limits<double>::infinity();
        for (Index k = 1; k <= 5; ++k) {
            Matrix jv = j * v.leftCols(k);
            Matrix b = lt * jv;
            Vector rhs = lt * r;
            Vector x = b.colPivHouseholderQr().solve(-rhs);
            double value = (b * x + rhs).norm();
            CHECK(value <= prev * (1.0 + 1e-10) + 1e-12);
            prev = value;
        }
    }
}

TEST_CASE("appendix-style nonlinear equivalence: converged PG solution satisfies "
          "the weighted first-order condition") {
    std::mt19937_64 rng(31);
    const Index nfull = 50, nred = 5;
    QuadraticModel model = random_quadratic(nfull, rng, 120, 0.15);
    Matrix v = orthonormal_columns(nfull, nred, rng);
    ReducedBasis basis = basis_from_columns(Vector::Zero(nfull), v);

    for (bool identity : {true, false}) {
        ThetaOp theta = identity ? ThetaOp::identity() : ThetaOp::dense(random_spd(nfull, rng));
        LeftBasisStrategy strategy =
            identity ? LeftBasisStrategy::lspg(RecomputePolicy::per_iteration)
                     : LeftBasisStrategy::theta_weighted(theta, RecomputePolicy::per_iteration);

        DirectReducedEvaluator eval(model, kMu, basis, strategy);
        RomStageSolver solver(eval, NewtonConfig{1e-11, 0.0, 60});
        StageProblem p;
        p.t = 0.0;
        p.c_dt = 40.0;  // keeps the quadratic stage problem contractive
        p.z = Vector::Zero(nred);
        solver.begin_step(0.0, p.z);
        Vector y = solver.solve_stage(p, 0.05 * random_vector(nred, rng));

        // first-order condition V^T J_stage^T Theta r = 0
        Vector u = basis.reconstruct(y);
        Vector r = model.f_eval(u, kMu) + p.c_dt * (u - basis.u0);
        Matrix jv = model.jacobian_apply_block(u, kMu, v) + p.c_dt * v;
        Vector grad = jv.transpose() * theta.apply(r, r);
        CHECK(grad.norm() < 1e-9);

        // matches the Gauss-Newton minimizer started from the same guess
        std::mt19937_64 rng2(31 + (identity ? 1 : 0));
        Vector y0 = Vector::Zero(nred);
        auto resid = [&](const Vector& yy) {
            Vector uu = basis.reconstruct(yy);
            return Vector(model.f_eval(uu, kMu) + p.c_dt * (uu - basis.u0));
        };
        auto jvf = [&](const Vector& yy) {
            Vector uu = basis.reconstruct(yy);
            return Matrix(model.jacobian_apply_block(uu, kMu, v) + p.c_dt * v);
        };
        solver.begin_step(0.0, p.z);
        Vector y_pg = solver.solve_stage(p, y0);
        Vector y_gn = gauss_newton_solve(resid, jvf, theta, y0, NewtonConfig{1e-11, 0.0, 60});
        CHECK((y_pg - y_gn).lpNorm<Eigen::Infinity>() < 1e-9);
    }
}

TEST_CASE("prom consistency: untruncated basis replays the Burgers trajectory") {
    BurgersModel::Config cfg;
    cfg.n = 128;
    cfg.viscosity = 1e-2;
    BurgersModel model(cfg);
    Vector u0 = model.sine_initial_condition(0.6, 0.35);
    ModelOdeSystem system(model, kMu);
    NewtonConfig newton{1e-12, 1e-12, 30};
    NewtonStageSolver solver(system, newton);
    TransientOptions opts;
    opts.scheme = TimeScheme::dirk2;
    opts.t_end = 0.05;
    opts.dt = 1e-3;

    std::vector<Vector> trajectory;
    run_transient(solver, opts, u0,
                  [&](Index, double, const Vector& w) { trajectory.push_back(w); });
    REQUIRE(trajectory.size() == 51);

    SnapshotSet snaps;
    snaps.states = Matrix(model.dim(), 51);
    snaps.times = Vector(51);
    for (Index j = 0; j < 51; ++j) {
        snaps.states.col(j) = trajectory[static_cast<size_t>(j)];
        snaps.times(j) = 1e-3 * static_cast<double>(j);
    }
    PodOptions pod;
    pod.explicit_n = 51;
    pod.normalize = false;
    ReducedBasis basis = build_pod(snaps, u0, pod);
    CHECK(basis.orthonormality_error() < 1e-12);

    for (auto strategy : {LeftBasisStrategy::galerkin(), LeftBasisStrategy::lspg()}) {
        DirectReducedEvaluator eval(model, kMu, basis, strategy);
        RomStageSolver rom_solver(eval, newton);
        Vector y = basis.project(u0);
        double max_err = 0.0;
        Index step = 0;
        TransientResult res = run_transient(rom_solver, opts, y,
                                            [&](Index s, double, const Vector& yy) {
                                                Vector rec = basis.reconstruct(yy);
                                                max_err = std::max(
                                                    max_err,
                                                    (rec - trajectory[static_cast<size_t>(s)])
                                                        .lpNorm<Eigen::Infinity>());
                                                step = s;
                                            });
        REQUIRE(res.completed);
        CHECK(step == 50);
        CHECK(max_err < 1e-6);
    }
}

TEST_CASE("prom step: zero dynamics keep reduced coordinates constant") {
    SparseMatrix a(6, 6);
    LinearModel model(a, Vector::Zero(6), false);
    std::mt19937_64 rng(37);
    Matrix v = orthonormal_columns(6, 2, rng);
    ReducedBasis basis = basis_from_columns(Vector::Zero(6), v);
    Vector y = random_vector(2, rng);
    Vector next = solve_prom_step(model, basis, LeftBasisStrategy::lspg(), dirk2_tableau(),
                                  y, 0.0, 0.1, NewtonConfig{});
    CHECK((next - y).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("galerkin and Theta=J^{-1} residual minimization take the same prom step") {
    std::mt19937_64 rng(41);
    Matrix a = random_spd(18, rng);
    LinearModel model(a, random_vector(18, rng), true);
    Matrix v = orthonormal_columns(18, 3, rng);
    ReducedBasis basis = basis_from_columns(Vector::Zero(18), v);
    Vector y = random_vector(3, rng);

    // Theta must invert the stage Jacobian c_dt M + A for the equivalence to
    // hold exactly; use one DIRK2 stage worth of shift.
    ButcherTableau tab = dirk2_tableau();
    const double dt = 0.05;
    const double c_dt = 1.0 / (dt * tab.a(0, 0));
    Matrix stage_j = c_dt * Matrix::Identity(18, 18) + a;
    Matrix theta = stage_j.inverse();
    theta = 0.5 * (theta + theta.transpose());

    Vector y_gal = solve_prom_step(model, basis, LeftBasisStrategy::galerkin(), tab, y,
                                   0.0, dt, NewtonConfig{1e-12, 0.0, 40});
    Vector y_pg = solve_prom_step(
        model, basis,
        LeftBasisStrategy::theta_weighted(ThetaOp::dense(theta), RecomputePolicy::per_iteration),
        tab, y, 0.0, dt, NewtonConfig{1e-12, 0.0, 40});
    CHECK((y_gal - y_pg).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("precompute: hand-contracted elementwise square") {
    QuadraticModel model = QuadraticModel::elementwise_square(2);
    Matrix v(2, 1);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    ReducedBasis basis = basis_from_columns(Vector::Zero(2), v);
    QuadraticRomOperators ops = precompute_quadratic(model, basis, kMu);
    CHECK(ops.hhat(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    Vector y(1);
    y << 0.7;
    Vector f = ops.galerkin_force(y);
    CHECK(f(0) == doctest::Approx(0.7 * 0.7 / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("precompute: linear special case reduces to projected linear operators") {
    std::mt19937_64 rng(43);
    const Index nfull = 30, nred = 4;
    SparseMatrix a = random_sparse(nfull, 3, rng);
    Vector c = random_vector(nfull, rng);
    QuadraticModel model(a, {}, c);
    Matrix v = orthonormal_columns(nfull, nred, rng);
    Vector u0 = random_vector(nfull, rng);
    ReducedBasis basis = basis_from_columns(u0, v);
    QuadraticRomOperators ops = precompute_quadratic(model, basis, kMu);
    Vector y = random_vector(nred, rng);
    Vector online = ops.galerkin_force(y);
    Vector oracle = v.transpose() * (c + a * (u0 + v * y));
    CHECK((online - oracle).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("precompute: online evaluation equals direct projection (N = 200, n = 8)") {
    std::mt19937_64 rng(47);
    const Index nfull = 200, nred = 8;
    QuadraticModel model = random_quadratic(nfull, rng, 500, 0.2);
    Matrix v = orthonormal_columns(nfull, nred, rng);
    Vector u0 = 0.3 * random_vector(nfull, rng);
    ReducedBasis basis = basis_from_columns(u0, v);

    InstrumentedModel counted(model);
    QuadraticRomOperators ops = precompute_quadratic(counted, basis, kMu);
    PrecomputedReducedEvaluator galerkin(ops, LeftBasisStrategy::galerkin());
    PrecomputedReducedEvaluator lspg(ops, LeftBasisStrategy::lspg());

    counted.reset_counters();
    StageProblem p;
    p.t = 0.0;
    p.c_dt = 25.0;
    p.z = random_vector(nred, rng);
    double worst_force = 0.0, worst_q = 0.0, worst_g = 0.0;
    std::vector<Vector> ys;
    for (int trial = 0; trial < 100; ++trial) ys.push_back(random_vector(nred, rng));
    for (const Vector& y : ys) {
        lspg.rebuild(y, p);
        Vector q_fast = lspg.reduced_residual(y, p);
        Matrix g_fast = lspg.reduced_jacobian(y, p);
        Vector f_fast = galerkin.reduced_residual(y, p);
        (void)q_fast;
        (void)g_fast;
        (void)f_fast;
    }
    // No model evaluations may happen online.
    CHECK(counted.total_model_calls() == 0);

    for (const Vector& y : ys) {
        Vector u = basis.reconstruct(y);
        Vector r_stage = model.f_eval(u, kMu) + p.c_dt * (u - u0 - v * p.z);
        Matrix jv_stage = model.jacobian_apply_block(u, kMu, v) + p.c_dt * v;

        Vector f_direct = v.transpose() * r_stage;
        Vector f_fast = galerkin.reduced_residual(y, p);
        worst_force = std::max(worst_force,
                               (f_fast - f_direct).lpNorm<Eigen::Infinity>() /
                                   (1.0 + f_direct.lpNorm<Eigen::Infinity>()));

        lspg.rebuild(y, p);
        Vector q_fast = lspg.reduced_residual(y, p);
        Matrix g_fast = lspg.reduced_jacobian(y, p);
        Vector q_direct = jv_stage.transpose() * r_stage;
        Matrix g_direct = jv_stage.transpose() * jv_stage;
        worst_q = std::max(worst_q, (q_fast - q_direct).lpNorm<Eigen::Infinity>() /
                                        (1.0 + q_direct.lpNorm<Eigen::Infinity>()));
        worst_g = std::max(worst_g, (g_fast - g_direct).lpNorm<Eigen::Infinity>() /
                                        (1.0 + g_direct.lpNorm<Eigen::Infinity>()));
    }
    CHECK(worst_force < 1e-10);
    CHECK(worst_q < 1e-10);
    CHECK(worst_g < 1e-10);
}

TEST_CASE("precompute: non-quadratic models are rejected") {
    BurgersModel::Config cfg;
    cfg.n = 16;
    cfg.viscosity = 1e-2;
    BurgersModel model(cfg);  // upwind switching breaks exact quadraticity
    std::mt19937_64 rng(53);
    Matrix v = orthonormal_columns(model.dim(), 2, rng);
    ReducedBasis basis = basis_from_columns(Vector::Zero(model.dim()), v);
    CHECK_THROWS_AS(precompute_quadratic(model, basis, kMu), ContractError);
}

TEST_CASE("precompute: spectral model matches direct projection") {
    SpectralNSModel::Config cfg;
    cfg.spatial_dim = 2;
    cfg.resolution = 16;
    cfg.viscosity = 2e-3;
    SpectralNSModel model(cfg);
    std::mt19937_64 rng(59);
    // Basis columns from a handful of solenoidal fields.
    Matrix fields(model.dim(), 5);
    for (Index j = 0; j < 5; ++j) {
        fields.col(j) = model.random_solenoidal(1.0, 4, 100 + static_cast<std::uint64_t>(j));
    }
    Eigen::HouseholderQR<Matrix> qr(fields);
    Matrix v = qr.householderQ() * Matrix::Identity(model.dim(), 5);
    ReducedBasis basis = basis_from_columns(Vector::Zero(model.dim()), v);
    QuadraticRomOperators ops = precompute_quadratic(model, basis, kMu);

    PrecomputedReducedEvaluator lspg(ops, LeftBasisStrategy::lspg());
    StageProblem p;
    p.c_dt = 100.0;
    p.z = random_vector(5, rng);
    Vector y = random_vector(5, rng);
    lspg.rebuild(y, p);
    Vector q_fast = lspg.reduced_residual(y, p);
    Vector u = basis.reconstruct(y);
    Vector r_stage = model.f_eval(u, kMu) + p.c_dt * (u - v * p.z);
    Matrix jv_stage = model.jacobian_apply_block(u, kMu, v) + p.c_dt * v;
    Vector q_direct = jv_stage.transpose() * r_stage;
    CHECK((q_fast - q_direct).lpNorm<Eigen::Infinity>() /
              (1.0 + q_direct.lpNorm<Eigen::Infinity>()) <
          1e-10);
}
