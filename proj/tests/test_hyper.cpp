// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cstdio>
#include <random>
#include <set>

#include "prom/core/instrument.hpp"
#include "prom/hyper/hyper_reduced.hpp"
#include "prom/hyper/nnls.hpp"
#include "prom/models/burgers_model.hpp"
#include "prom/rom/pod.hpp"

#include "support.hpp"

using namespace prom;
using namespace prom::testing;

namespace {

const ParamPoint kMu = ParamPoint::none();

struct BurgersSetup {
    BurgersModel model;
    ReducedBasis basis;
    SnapshotSet training;

    static BurgersSetup make(Index n = 96, Index n_red = 6) {
        BurgersModel::Config cfg;
        cfg.n = n;
        cfg.viscosity = 5e-3;
        BurgersModel model(cfg);
        Vector u0 = model.sine_initial_condition(0.6, 0.35);

        ModelOdeSystem system(model, kMu);
        NewtonStageSolver solver(system, NewtonConfig{});
        TransientOptions opts;
        opts.t_end = 0.2;
        opts.dt = 2e-3;
        SnapshotCollector collector(model.dim(), 0.0, opts.dt, 1e-2, 0.0, opts.t_end);
        run_transient(solver, opts, u0, [&](Index s, double t, const Vector& w) {
            collector.observe(s, t, w);
        });
        SnapshotSet snaps = collector.take();

        PodOptions pod;
        pod.explicit_n = n_red;
        pod.normalize = false;
        ReducedBasis basis = build_pod(snaps, u0, pod);
        return BurgersSetup{std::move(model), std::move(basis), std::move(snaps)};
    }
};

}  // namespace

TEST_CASE("nnls: identity design clips negatives") {
    Matrix g = Matrix::Identity(2, 2);
    Vector b(2);
    b << 3.0, -1.0;
    NnlsResult res = nnls_lawson_hanson(g, b, 0.0);
    CHECK(res.x(0) == doctest::Approx(3.0));
    CHECK(res.x(1) == 0.0);
    CHECK(res.residual_norm == doctest::Approx(1.0));
}

TEST_CASE("nnls: recovers a sparse nonnegative combination") {
    std::mt19937_64 rng(3);
    Matrix g = random_matrix(20, 50, rng);
    Vector x_true = Vector::Zero(50);
    x_true(4) = 1.4;
    x_true(17) = 0.6;
    x_true(33) = 2.2;
    Vector b = g * x_true;
    NnlsResult res = nnls_lawson_hanson(g, b, 0.0);
    CHECK(res.residual_norm < 1e-10 * b.norm());
    CHECK(res.x.minCoeff() >= 0.0);
}

TEST_CASE("ecsw training system: unit weights reproduce the projection") {
    BurgersSetup s = BurgersSetup::make();
    for (auto strategy : {LeftBasisStrategy::galerkin(), LeftBasisStrategy::lspg()}) {
        EcswTrainingSystem sys = assemble_training(s.model, s.basis, strategy, s.training,
                                                   kMu, 500.0, 1e-2);
        Vector gx = sys.g * Vector::Ones(sys.g.cols());
        CHECK((gx - sys.b).lpNorm<Eigen::Infinity>() <
              1e-12 * (1.0 + sys.b.lpNorm<Eigen::Infinity>()));

        // b stacks the exact projected residuals snapshot by snapshot.
        const Index n = s.basis.n();
        for (Index k = 0; k < s.training.count(); ++k) {
            Vector u = s.training.states.col(k);
            Vector f = s.model.f_eval(u, kMu);
            Matrix w;
            if (strategy.petrov_galerkin()) {
                w = s.model.jacobian_apply_block(u, kMu, s.basis.v);
                for (Index j = 0; j < n; ++j) w.col(j) += 500.0 * s.basis.v.col(j);
            } else {
                w = s.basis.v;
            }
            Vector expected = w.transpose() * f;
            Vector got = sys.b.segment(k * n, n);
            CHECK((got - expected).lpNorm<Eigen::Infinity>() <
                  1e-11 * (1.0 + expected.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("ecsw end-to-end: tolerance met, weights positive, sample small") {
    BurgersSetup s = BurgersSetup::make();
    LeftBasisStrategy strategy = LeftBasisStrategy::lspg();
    EcswTrainingSystem sys =
        assemble_training(s.model, s.basis, strategy, s.training, kMu, 500.0, 1e-2);
    EcswSampleSet sample = nnls_solve(sys.g, sys.b, 1e-2);
    CHECK(sample.achieved_residual <= 1e-2);
    CHECK(sample.weights.minCoeff() > 0.0);
    CHECK(static_cast<Index>(sample.cells.size()) < s.model.cell_count());

    SUBCASE("tighter tolerance needs at least as many cells") {
        EcswSampleSet tight = nnls_solve(sys.g, sys.b, 1e-4);
        CHECK(tight.cells.size() >= sample.cells.size());
        CHECK(tight.achieved_residual <= 1e-4);
    }

    SUBCASE("hyperreduced projection deviates by at most epsilon on training data") {
        double num = 0.0, den = 0.0;
        for (Index k = 0; k < s.training.count(); ++k) {
            Vector y = s.basis.project(s.training.states.col(k));
            // training states lie in the sampled trajectory, but project/
            // reconstruct only approximates them at n = 6; compare the
            // sampled projection of the reconstructed state instead.
            Vector u = s.basis.reconstruct(y);
            Vector f = s.model.f_eval(u, kMu);
            Matrix w = s.model.jacobian_apply_block(u, kMu, s.basis.v);
            for (Index j = 0; j < s.basis.n(); ++j) w.col(j) += 500.0 * s.basis.v.col(j);
            Vector exact = w.transpose() * f;
            Vector approx = Vector::Zero(s.basis.n());
            Vector udot = Vector::Zero(s.model.dim());
            for (Index i = 0; i < static_cast<Index>(sample.cells.size()); ++i) {
                const Index e = sample.cells[static_cast<size_t>(i)];
                approx += sample.weights(i) * s.model.residual_row(e, u, udot, kMu) *
                          w.row(e).transpose();
            }
            num += (approx - exact).squaredNorm();
            den += exact.squaredNorm();
        }
        CHECK(std::sqrt(num / den) < 5e-2);  // epsilon-level agreement
    }
}

TEST_CASE("hyperreduced residual: full sample with unit weights is exact") {
    BurgersSetup s = BurgersSetup::make();
    EcswSampleSet full;
    for (Index e = 0; e < s.model.cell_count(); ++e) full.cells.push_back(e);
    full.weights = Vector::Ones(s.model.cell_count());
    std::mt19937_64 rng(7);
    Vector y = 0.1 * random_vector(s.basis.n(), rng);

    Vector q = hyperreduced_residual(s.model, s.basis, LeftBasisStrategy::galerkin(), full,
                                     y, kMu);
    Vector exact = s.basis.v.transpose() * s.model.f_eval(s.basis.reconstruct(y), kMu);
    CHECK((q - exact).lpNorm<Eigen::Infinity>() <
          1e-12 * (1.0 + exact.lpNorm<Eigen::Infinity>()));

    SUBCASE("empty sample set errors out") {
        EcswSampleSet empty;
        empty.weights = Vector(0);
        CHECK_THROWS_AS(hyperreduced_residual(s.model, s.basis,
                                              LeftBasisStrategy::galerkin(), empty, y, kMu),
                        ContractError);
    }
    SUBCASE("out-of-range cells are a corruption error") {
        EcswSampleSet bad;
        bad.cells = {s.model.cell_count() + 3};
        bad.weights = Vector::Ones(1);
        CHECK_THROWS_AS(hyperreduced_residual(s.model, s.basis,
                                              LeftBasisStrategy::galerkin(), bad, y, kMu),
                        FormatError);
    }
}

TEST_CASE("hyperreduced evaluation touches only sampled cells") {
    BurgersSetup s = BurgersSetup::make();
    InstrumentedModel counted(s.model);
    EcswTrainingSystem sys = assemble_training(s.model, s.basis, LeftBasisStrategy::lspg(),
                                               s.training, kMu, 500.0, 1e-2);
    EcswSampleSet sample = nnls_solve(sys.g, sys.b, 1e-2);

    HyperreducedEvaluator eval(counted, kMu, s.basis, LeftBasisStrategy::lspg(), sample);
    counted.reset_counters();
    StageProblem p;
    p.t = 0.0;
    p.c_dt = 500.0;
    std::mt19937_64 rng(9);
    p.z = 0.05 * random_vector(s.basis.n(), rng);
    Vector y = p.z;
    eval.rebuild(y, p);
    eval.reduced_residual(y, p);
    eval.reduced_jacobian(y, p);

    std::set<Index> sampled(sample.cells.begin(), sample.cells.end());
    const auto& counts = counted.residual_row_counts();
    for (Index e = 0; e < s.model.cell_count(); ++e) {
        if (counts[static_cast<size_t>(e)] > 0) {
            CHECK(sampled.count(e) == 1);
        }
    }
    CHECK(counted.f_evals() == 0);  // no full-order evaluations online
    CHECK(counted.jacobian_materializations() == 0);
}

TEST_CASE("sample set json round trip and validation") {
    EcswSampleSet sample;
    sample.cells = {3, 11, 42};
    sample.weights = Vector(3);
    sample.weights << 1.5, 0.25, 7.75;
    sample.epsilon = 1e-2;
    sample.achieved_residual = 3.4e-3;
    sample.basis_provenance = "deadbeef";
    const std::string path = "/tmp/prom_test_sample.json";
    save_sample_set(sample, path);
    EcswSampleSet loaded = load_sample_set(path);
    CHECK(loaded.cells == sample.cells);
    CHECK((loaded.weights - sample.weights).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(loaded.epsilon == sample.epsilon);
    CHECK(loaded.basis_provenance == "deadbeef");
    std::remove(path.c_str());
}
