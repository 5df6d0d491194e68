// SPDX-License-Identifier: Apache-2.0

#include "prom/hyper/hyper_reduced.hpp"

#include <algorithm>
#include <set>

namespace prom {

HyperreducedEvaluator::HyperreducedEvaluator(const SemiDiscreteModel& model,
                                             ParamPoint mu, const ReducedBasis& basis,
                                             LeftBasisStrategy strategy,
                                             EcswSampleSet sample)
    : model_(model),
      mu_(std::move(mu)),
      basis_(basis),
      strategy_(std::move(strategy)),
      sample_(std::move(sample)) {
    if (sample_.cells.empty()) {
        throw ContractError("hyper: empty sample set");
    }
    if (strategy_.kind != RomStrategyKind::galerkin &&
        strategy_.kind != RomStrategyKind::lspg) {
        throw ContractError("hyper: only galerkin and lspg strategies are supported");
    }
    std::set<Index> support;
    for (size_t i = 0; i < sample_.cells.size(); ++i) {
        const Index e = sample_.cells[i];
        if (e < 0 || e >= model_.cell_count()) {
            throw FormatError("hyper: sample references out-of-range cell " +
                              std::to_string(e));
        }
        if (!(sample_.weights(static_cast<Index>(i)) > 0.0)) {
            throw ContractError("hyper: weights must be strictly positive");
        }
        for (Index s : model_.stencil(e)) support.insert(s);
    }
    support_.assign(support.begin(), support.end());

    const Index n = basis_.n();
    const Index ncells = static_cast<Index>(sample_.cells.size());
    v_support_ = Matrix(static_cast<Index>(support_.size()), n);
    u0_support_ = Vector(static_cast<Index>(support_.size()));
    for (Index i = 0; i < static_cast<Index>(support_.size()); ++i) {
        v_support_.row(i) = basis_.v.row(support_[static_cast<size_t>(i)]);
        u0_support_(i) = basis_.u0(support_[static_cast<size_t>(i)]);
    }
    v_cells_ = Matrix(ncells, n);
    mv_cells_ = Matrix(ncells, n);
    Matrix mv(model_.dim(), n);
    for (Index j = 0; j < n; ++j) mv.col(j) = model_.mass_apply(basis_.v.col(j));
    for (Index i = 0; i < ncells; ++i) {
        v_cells_.row(i) = basis_.v.row(sample_.cells[static_cast<size_t>(i)]);
        mv_cells_.row(i) = mv.row(sample_.cells[static_cast<size_t>(i)]);
    }
    u_scratch_ = Vector::Zero(model_.dim());
    udot_zero_ = Vector::Zero(model_.dim());
}

void HyperreducedEvaluator::scatter_state(const Vector& y) {
    Vector u_local = u0_support_ + v_support_ * y;
    for (Index i = 0; i < static_cast<Index>(support_.size()); ++i) {
        u_scratch_(support_[static_cast<size_t>(i)]) = u_local(i);
    }
}

Matrix HyperreducedEvaluator::stage_jv_rows(double c_dt) const {
    const Index n = basis_.n();
    const Index ncells = static_cast<Index>(sample_.cells.size());
    Matrix rows(ncells, n);
    SparseVector jrow;
    for (Index i = 0; i < ncells; ++i) {
        const Index e = sample_.cells[static_cast<size_t>(i)];
        model_.jacobian_row(e, u_scratch_, mu_, jrow);
        Vector acc = Vector::Zero(n);
        for (SparseVector::InnerIterator it(jrow); it; ++it) {
            acc += it.value() * basis_.v.row(it.index()).transpose();
        }
        rows.row(i) = acc.transpose();
    }
    if (c_dt != 0.0) rows += c_dt * mv_cells_;
    return rows;
}

void HyperreducedEvaluator::rebuild(const Vector& y, const StageProblem& p) {
    if (!petrov_galerkin()) return;
    scatter_state(y);
    w_rows_ = stage_jv_rows(p.c_dt);
    gn_matrix_ = Matrix::Zero(basis_.n(), basis_.n());
    for (Index i = 0; i < static_cast<Index>(sample_.cells.size()); ++i) {
        gn_matrix_ += sample_.weights(i) * w_rows_.row(i).transpose() * w_rows_.row(i);
    }
}

Vector HyperreducedEvaluator::reduced_residual(const Vector& y, const StageProblem& p) {
    scatter_state(y);
    const Index n = basis_.n();
    const Index ncells = static_cast<Index>(sample_.cells.size());
    const Matrix& w = petrov_galerkin() ? w_rows_ : v_cells_;
    if (petrov_galerkin() && w_rows_.size() == 0) {
        throw ContractError("hyper: test basis queried before any rebuild");
    }
    Vector q = Vector::Zero(n);
    for (Index i = 0; i < ncells; ++i) {
        const Index e = sample_.cells[static_cast<size_t>(i)];
        double re = model_.residual_row(e, u_scratch_, udot_zero_, mu_);
        if (p.c_dt != 0.0) {
            re += p.c_dt * mv_cells_.row(i).dot(y - p.z);
        }
        if (!std::isfinite(re)) {
            throw NumericalError("hyper: non-finite sampled residual at cell " +
                                 std::to_string(e));
        }
        q += sample_.weights(i) * re * w.row(i).transpose();
    }
    return q;
}

Matrix HyperreducedEvaluator::reduced_jacobian(const Vector& y, const StageProblem& p) {
    if (petrov_galerkin()) {
        if (gn_matrix_.size() == 0) {
            throw ContractError("hyper: test basis queried before any rebuild");
        }
        return gn_matrix_;
    }
    scatter_state(y);
    Matrix rows = stage_jv_rows(p.c_dt);
    Matrix g = Matrix::Zero(basis_.n(), basis_.n());
    for (Index i = 0; i < static_cast<Index>(sample_.cells.size()); ++i) {
        g += sample_.weights(i) * v_cells_.row(i).transpose() * rows.row(i);
    }
    return g;
}

}  // namespace prom
