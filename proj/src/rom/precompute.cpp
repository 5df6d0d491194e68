// SPDX-License-Identifier: Apache-2.0

#include "prom/rom/precompute.hpp"

#include <random>

namespace prom {

namespace {

// Collection layout: [c~ | MV_0..MV_{n-1} | A~V_0..A~V_{n-1} | h_{jk} ...]
Index idx_c() { return 0; }
Index idx_mv(Index n, Index j) { (void)n; return 1 + j; }
Index idx_av(Index n, Index j) { return 1 + n + j; }
Index idx_h(Index n, Index j, Index k) { return 1 + 2 * n + j * n + k; }

}  // namespace

Vector QuadraticRomOperators::galerkin_force(const Vector& y) const {
    Vector out = chat + ahat * y;
    // quadratic part: sum_{jk} y_j y_k hhat(:, j*n+k)
    Vector yy(n * n);
    for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) yy(j * n + k) = y(j) * y(k);
    }
    out += hhat * yy;
    return out;
}

Matrix QuadraticRomOperators::galerkin_force_jacobian(const Vector& y) const {
    Matrix out = ahat;
    for (Index k = 0; k < n; ++k) {
        Vector col = Vector::Zero(n);
        for (Index j = 0; j < n; ++j) col += y(j) * hhat.col(j * n + k);
        out.col(k) += 2.0 * col;
    }
    return out;
}

Vector QuadraticRomOperators::residual_coefficients(const Vector& y, const Vector& z,
                                                    double c_dt) const {
    Vector rho = Vector::Zero(collection_size());
    rho(idx_c()) = 1.0;
    for (Index j = 0; j < n; ++j) {
        rho(idx_mv(n, j)) = c_dt != 0.0 ? c_dt * (y(j) - z(j)) : 0.0;
        rho(idx_av(n, j)) = y(j);
        for (Index k = 0; k < n; ++k) rho(idx_h(n, j, k)) = y(j) * y(k);
    }
    return rho;
}

std::vector<std::pair<Index, double>> QuadraticRomOperators::jv_column_coefficients(
    const Vector& y_w, double c_dt, Index a) const {
    std::vector<std::pair<Index, double>> alpha;
    alpha.reserve(static_cast<size_t>(n) + 2);
    alpha.emplace_back(idx_mv(n, a), c_dt);
    alpha.emplace_back(idx_av(n, a), 1.0);
    for (Index j = 0; j < n; ++j) {
        alpha.emplace_back(idx_h(n, j, a), 2.0 * y_w(j));
    }
    return alpha;
}

QuadraticRomOperators precompute_quadratic(const SemiDiscreteModel& model,
                                           const ReducedBasis& basis,
                                           const ParamPoint& mu) {
    const auto* quad = dynamic_cast<const QuadraticStructure*>(&model);
    if (!quad) {
        throw ContractError("precompute: model does not expose a quadratic structure");
    }
    {
        std::mt19937_64 rng(0x9a7d);
        std::normal_distribution<double> normal(0.0, 1.0);
        Vector probe(model.dim());
        for (Index i = 0; i < probe.size(); ++i) probe(i) = normal(rng);
        if (third_difference_check(model, probe, mu, 4) > 1e-8) {
            throw ContractError("precompute: model fails the quadraticity probe");
        }
    }
    const Index n = basis.n();
    const Index nfull = model.dim();
    const Matrix& v = basis.v;

    QuadraticRomOperators ops;
    ops.n = n;

    Vector ctilde = quad->constant_term(mu) + quad->linear_apply(basis.u0, mu) +
                    quad->bilinear_apply(basis.u0, basis.u0, mu);

    const Index m = ops.collection_size();
    Matrix collection(nfull, m);
    collection.col(idx_c()) = ctilde;
    for (Index j = 0; j < n; ++j) {
        collection.col(idx_mv(n, j)) = model.mass_apply(v.col(j));
        collection.col(idx_av(n, j)) =
            quad->linear_apply(v.col(j), mu) + 2.0 * quad->bilinear_apply(basis.u0, v.col(j), mu);
    }
    for (Index j = 0; j < n; ++j) {
        for (Index k = j; k < n; ++k) {
            Vector h = quad->bilinear_apply(v.col(j), v.col(k), mu);
            collection.col(idx_h(n, j, k)) = h;
            if (k != j) collection.col(idx_h(n, k, j)) = h;
        }
    }

    ops.chat = v.transpose() * ctilde;
    ops.mhat = v.transpose() * collection.middleCols(idx_mv(n, 0), n);
    ops.ahat = v.transpose() * collection.middleCols(idx_av(n, 0), n);
    ops.hhat = v.transpose() * collection.middleCols(idx_h(n, 0, 0), n * n);
    ops.gram = collection.transpose() * collection;
    ops.provenance = model.name() + ":n=" + std::to_string(n);
    return ops;
}

PrecomputedReducedEvaluator::PrecomputedReducedEvaluator(QuadraticRomOperators ops,
                                                         LeftBasisStrategy strategy)
    : ops_(std::move(ops)), strategy_(std::move(strategy)) {
    if (strategy_.kind != RomStrategyKind::galerkin &&
        strategy_.kind != RomStrategyKind::lspg) {
        throw ContractError("precompute: only galerkin and lspg strategies are supported");
    }
}

void PrecomputedReducedEvaluator::rebuild(const Vector& y, const StageProblem& p) {
    if (!petrov_galerkin()) return;
    const Index n = ops_.n;
    const Index m = ops_.collection_size();
    gram_alpha_ = Matrix::Zero(m, n);
    for (Index a = 0; a < n; ++a) {
        for (const auto& [idx, val] : ops_.jv_column_coefficients(y, p.c_dt, a)) {
            gram_alpha_.col(a) += val * ops_.gram.col(idx);
        }
    }
    gn_matrix_ = Matrix::Zero(n, n);
    for (Index a = 0; a < n; ++a) {
        for (const auto& [idx, val] : ops_.jv_column_coefficients(y, p.c_dt, a)) {
            gn_matrix_.row(a) += val * gram_alpha_.row(idx);
        }
    }
}

Vector PrecomputedReducedEvaluator::reduced_residual(const Vector& y,
                                                     const StageProblem& p) {
    if (!petrov_galerkin()) {
        Vector q = ops_.galerkin_force(y);
        if (p.c_dt != 0.0) q += p.c_dt * (ops_.mhat * (y - p.z));
        return q;
    }
    if (gram_alpha_.size() == 0) {
        throw ContractError("precompute: test basis queried before any rebuild");
    }
    Vector rho = ops_.residual_coefficients(y, p.z, p.c_dt);
    return gram_alpha_.transpose() * rho;
}

Matrix PrecomputedReducedEvaluator::reduced_jacobian(const Vector& y,
                                                     const StageProblem& p) {
    if (!petrov_galerkin()) {
        Matrix g = ops_.galerkin_force_jacobian(y);
        if (p.c_dt != 0.0) g += p.c_dt * ops_.mhat;
        return g;
    }
    if (gn_matrix_.size() == 0) {
        throw ContractError("precompute: test basis queried before any rebuild");
    }
    return gn_matrix_;
}

}  // namespace prom
