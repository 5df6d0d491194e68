// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "prom/core/model.hpp"
#include "prom/models/quadratic_model.hpp"

namespace prom {

/// Forwarding decorator that counts evaluations on the wrapped model.
/// Used to verify hyperreduced locality (which cells get computed) and that
/// precomputed online paths perform no high-dimensional work. Forwards the
/// quadratic structure when the wrapped model has one.
class InstrumentedModel : public SemiDiscreteModel, public QuadraticStructure {
public:
    explicit InstrumentedModel(const SemiDiscreteModel& inner)
        : inner_(inner),
          quad_(dynamic_cast<const QuadraticStructure*>(&inner)),
          row_counts_(static_cast<size_t>(inner.cell_count()), 0) {}

    Index dim() const override { return inner_.dim(); }
    Index cell_count() const override { return inner_.cell_count(); }
    Index param_dim() const override { return inner_.param_dim(); }
    std::string name() const override { return inner_.name(); }
    std::vector<StateBlock> state_blocks() const override { return inner_.state_blocks(); }
    SparseMatrix mass_sparse() const override { return inner_.mass_sparse(); }

    Vector mass_apply(const Vector& x) const override {
        ++mass_applies_;
        return inner_.mass_apply(x);
    }
    Vector f_eval(const Vector& u, const ParamPoint& mu) const override {
        ++f_evals_;
        return inner_.f_eval(u, mu);
    }
    Vector jacobian_apply(const Vector& u, const ParamPoint& mu,
                          const Vector& x) const override {
        ++jacobian_applies_;
        return inner_.jacobian_apply(u, mu, x);
    }
    Matrix jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                const Matrix& X) const override {
        jacobian_applies_ += X.cols();
        return inner_.jacobian_apply_block(u, mu, X);
    }
    bool has_sparse_jacobian() const override { return inner_.has_sparse_jacobian(); }
    SparseMatrix jacobian_sparse(const Vector& u, const ParamPoint& mu) const override {
        ++jacobian_materializations_;
        return inner_.jacobian_sparse(u, mu);
    }
    Vector solve_shifted_jacobian(const Vector& u, const ParamPoint& mu, double c,
                                  const Vector& b) const override {
        ++shifted_solves_;
        return inner_.solve_shifted_jacobian(u, mu, c, b);
    }
    double residual_row(Index cell, const Vector& u, const Vector& udot,
                        const ParamPoint& mu) const override {
        ++row_counts_[static_cast<size_t>(cell)];
        return inner_.residual_row(cell, u, udot, mu);
    }
    void jacobian_row(Index cell, const Vector& u, const ParamPoint& mu,
                      SparseVector& row) const override {
        ++jacobian_row_counts_;
        inner_.jacobian_row(cell, u, mu, row);
    }
    std::vector<Index> stencil(Index cell) const override { return inner_.stencil(cell); }

    Vector constant_term(const ParamPoint& mu) const override {
        ++structure_evals_;
        return require_quadratic()->constant_term(mu);
    }
    Vector linear_apply(const Vector& x, const ParamPoint& mu) const override {
        ++structure_evals_;
        return require_quadratic()->linear_apply(x, mu);
    }
    Vector bilinear_apply(const Vector& x, const Vector& y,
                          const ParamPoint& mu) const override {
        ++structure_evals_;
        return require_quadratic()->bilinear_apply(x, y, mu);
    }

    void reset_counters() const {
        f_evals_ = jacobian_applies_ = jacobian_materializations_ = 0;
        mass_applies_ = shifted_solves_ = jacobian_row_counts_ = structure_evals_ = 0;
        std::fill(row_counts_.begin(), row_counts_.end(), 0);
    }

    long f_evals() const { return f_evals_; }
    long jacobian_applies() const { return jacobian_applies_; }
    long jacobian_materializations() const { return jacobian_materializations_; }
    long mass_applies() const { return mass_applies_; }
    long shifted_solves() const { return shifted_solves_; }
    long jacobian_row_calls() const { return jacobian_row_counts_; }
    long structure_evals() const { return structure_evals_; }
    const std::vector<long>& residual_row_counts() const { return row_counts_; }
    long total_model_calls() const {
        long rows = 0;
        for (long c : row_counts_) rows += c;
        return f_evals_ + jacobian_applies_ + jacobian_materializations_ +
               mass_applies_ + shifted_solves_ + jacobian_row_counts_ +
               structure_evals_ + rows;
    }

private:
    const QuadraticStructure* require_quadratic() const {
        if (!quad_) {
            throw ContractError("instrumented model: wrapped model is not quadratic");
        }
        return quad_;
    }

    const SemiDiscreteModel& inner_;
    const QuadraticStructure* quad_;
    mutable long f_evals_ = 0;
    mutable long jacobian_applies_ = 0;
    mutable long jacobian_materializations_ = 0;
    mutable long mass_applies_ = 0;
    mutable long shifted_solves_ = 0;
    mutable long jacobian_row_counts_ = 0;
    mutable long structure_evals_ = 0;
    mutable std::vector<long> row_counts_;
};

}  // namespace prom
