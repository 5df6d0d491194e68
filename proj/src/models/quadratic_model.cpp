// SPDX-License-Identifier: Apache-2.0

#include "prom/models/quadratic_model.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace prom {

QuadraticModel::QuadraticModel(SparseMatrix a, std::vector<QuadTerm> terms, Vector c)
    : a_(std::move(a)), terms_(std::move(terms)), c_(std::move(c)) {
    if (a_.rows() != a_.cols()) {
        throw ContractError("quadratic: A must be square");
    }
    if (c_.size() != a_.rows()) {
        throw ContractError("quadratic: constant term length does not match A");
    }
    const Index n = a_.rows();
    for (const QuadTerm& t : terms_) {
        if (t.row < 0 || t.row >= n || t.j < 0 || t.j >= n || t.k < 0 || t.k >= n) {
            throw ContractError("quadratic: term index out of range");
        }
    }
    a_.makeCompressed();
    a_rows_ = a_;
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const QuadTerm& x, const QuadTerm& y) { return x.row < y.row; });
    row_begin_.assign(static_cast<size_t>(n) + 1, 0);
    for (const QuadTerm& t : terms_) ++row_begin_[static_cast<size_t>(t.row) + 1];
    for (size_t i = 1; i < row_begin_.size(); ++i) row_begin_[i] += row_begin_[i - 1];
}

QuadraticModel QuadraticModel::elementwise_square(Index n) {
    std::vector<QuadTerm> terms;
    terms.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) terms.push_back({i, i, i, 1.0});
    SparseMatrix a(n, n);
    return QuadraticModel(std::move(a), std::move(terms), Vector::Zero(n));
}

Vector QuadraticModel::f_eval(const Vector& u, const ParamPoint& mu) const {
    check_length(u, "state");
    check_param(mu);
    Vector out = c_ + a_ * u;
    for (const QuadTerm& t : terms_) {
        out(t.row) += t.coeff * u(t.j) * u(t.k);
    }
    return out;
}

Vector QuadraticModel::jacobian_apply(const Vector& u, const ParamPoint& mu,
                                      const Vector& x) const {
    check_length(u, "state");
    check_param(mu);
    check_length(x, "direction");
    // J(u) x = A x + 2 H(u, x)
    Vector out = a_ * x;
    for (const QuadTerm& t : terms_) {
        out(t.row) += t.coeff * (u(t.j) * x(t.k) + u(t.k) * x(t.j));
    }
    return out;
}

Matrix QuadraticModel::jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                            const Matrix& X) const {
    check_length(u, "state");
    check_param(mu);
    Matrix out = a_ * X;
    for (const QuadTerm& t : terms_) {
        out.row(t.row) += t.coeff * (u(t.j) * X.row(t.k) + u(t.k) * X.row(t.j));
    }
    return out;
}

SparseMatrix QuadraticModel::jacobian_sparse(const Vector& u, const ParamPoint& mu) const {
    check_length(u, "state");
    check_param(mu);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(a_.nonZeros()) + 2 * terms_.size());
    for (Index col = 0; col < a_.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(a_, col); it; ++it) {
            trip.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (const QuadTerm& t : terms_) {
        trip.emplace_back(t.row, t.k, t.coeff * u(t.j));
        trip.emplace_back(t.row, t.j, t.coeff * u(t.k));
    }
    SparseMatrix j(dim(), dim());
    j.setFromTriplets(trip.begin(), trip.end());
    return j;
}

double QuadraticModel::residual_row(Index cell, const Vector& u, const Vector& udot,
                                    const ParamPoint&) const {
    check_cell(cell);
    double acc = udot(cell) + c_(cell);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a_rows_, cell); it; ++it) {
        acc += it.value() * u(it.index());
    }
    for (size_t i = row_begin_[static_cast<size_t>(cell)];
         i < row_begin_[static_cast<size_t>(cell) + 1]; ++i) {
        const QuadTerm& t = terms_[i];
        acc += t.coeff * u(t.j) * u(t.k);
    }
    return acc;
}

void QuadraticModel::jacobian_row(Index cell, const Vector& u, const ParamPoint&,
                                  SparseVector& row) const {
    check_cell(cell);
    Vector dense = Vector::Zero(dim());
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a_rows_, cell); it; ++it) {
        dense(it.index()) += it.value();
    }
    for (size_t i = row_begin_[static_cast<size_t>(cell)];
         i < row_begin_[static_cast<size_t>(cell) + 1]; ++i) {
        const QuadTerm& t = terms_[i];
        dense(t.k) += t.coeff * u(t.j);
        dense(t.j) += t.coeff * u(t.k);
    }
    row = dense.sparseView();
}

std::vector<Index> QuadraticModel::stencil(Index cell) const {
    check_cell(cell);
    std::set<Index> idx;
    idx.insert(cell);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a_rows_, cell); it; ++it) {
        idx.insert(it.index());
    }
    for (size_t i = row_begin_[static_cast<size_t>(cell)];
         i < row_begin_[static_cast<size_t>(cell) + 1]; ++i) {
        idx.insert(terms_[i].j);
        idx.insert(terms_[i].k);
    }
    return {idx.begin(), idx.end()};
}

Vector QuadraticModel::constant_term(const ParamPoint& mu) const {
    check_param(mu);
    return c_;
}

Vector QuadraticModel::linear_apply(const Vector& x, const ParamPoint& mu) const {
    check_param(mu);
    check_length(x, "linear_apply input");
    return a_ * x;
}

Vector QuadraticModel::bilinear_apply(const Vector& x, const Vector& y,
                                      const ParamPoint& mu) const {
    check_param(mu);
    check_length(x, "bilinear_apply x");
    check_length(y, "bilinear_apply y");
    Vector out = Vector::Zero(dim());
    for (const QuadTerm& t : terms_) {
        out(t.row) += 0.5 * t.coeff * (x(t.j) * y(t.k) + x(t.k) * y(t.j));
    }
    return out;
}

double third_difference_check(const SemiDiscreteModel& model, const Vector& u,
                              const ParamPoint& mu, int directions, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < directions; ++k) {
        Vector d(u.size());
        for (Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
        d /= d.norm();
        Vector f0 = model.f_eval(u, mu);
        Vector f1 = model.f_eval(u + d, mu);
        Vector f2 = model.f_eval(u + 2.0 * d, mu);
        Vector f3 = model.f_eval(u + 3.0 * d, mu);
        Vector third = f3 - 3.0 * f2 + 3.0 * f1 - f0;
        double scale = 1.0 + f0.lpNorm<Eigen::Infinity>() + f3.lpNorm<Eigen::Infinity>();
        worst = std::max(worst, third.lpNorm<Eigen::Infinity>() / scale);
    }
    return worst;
}

}  // namespace prom
