// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prom/common.hpp"

namespace prom {

/// Parameter vector mu of dimension p (p may be zero for nonparametric models).
struct ParamPoint {
    Vector values;

    static ParamPoint none() { return ParamPoint{Vector(0)}; }
    Index dim() const { return values.size(); }
};

/// Time-stamped state of a semi-discrete model.
struct State {
    Vector u;
    double t = 0.0;
};

/// Contiguous slice of the state vector holding one physical variable.
/// Block scaling during snapshot normalization operates on these slices.
struct StateBlock {
    std::string name;
    Index offset = 0;
    Index size = 0;
};

/// Contract for a first-order semi-discrete dynamical model
///
///     M(mu) du/dt + f(u; mu) = 0
///
/// of dimension N. Implementations are immutable after construction and may
/// be shared read-only across concurrent simulations.
///
/// The residual admits an additive decomposition over "cells" (one cell per
/// residual row by convention: FV cell for the Burgers model, grid node for
/// the spectral model, row index for generic models); this is the hook used
/// by ECSW hyperreduction.
class SemiDiscreteModel {
public:
    virtual ~SemiDiscreteModel() = default;

    virtual Index dim() const = 0;
    virtual Index cell_count() const { return dim(); }
    virtual Index param_dim() const { return 0; }
    virtual std::string name() const { return "model"; }

    /// State layout; default is a single anonymous block.
    virtual std::vector<StateBlock> state_blocks() const {
        return {StateBlock{"u", 0, dim()}};
    }

    /// Action of the (SPD) mass matrix. Identity unless overridden.
    virtual Vector mass_apply(const Vector& x) const {
        check_length(x, "mass_apply input");
        return x;
    }

    /// Sparse mass matrix used by direct stage solves. Identity unless
    /// overridden alongside mass_apply.
    virtual SparseMatrix mass_sparse() const;

    virtual Vector f_eval(const Vector& u, const ParamPoint& mu) const = 0;

    /// Exact action of J(u; mu) = df/du on a vector.
    virtual Vector jacobian_apply(const Vector& u, const ParamPoint& mu,
                                  const Vector& x) const = 0;

    /// J(u; mu) * X for a block of columns; default loops jacobian_apply.
    virtual Matrix jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                        const Matrix& X) const;

    /// Whether jacobian_sparse is available for this model.
    virtual bool has_sparse_jacobian() const { return false; }

    /// Sparse materialization of J(u; mu); throws ContractError if the model
    /// only exposes the operator form.
    virtual SparseMatrix jacobian_sparse(const Vector& u, const ParamPoint& mu) const;

    /// Solves (c * M + J(u; mu)) x = b. The default materializes the sparse
    /// matrices and uses a direct sparse factorization; models without a
    /// sparse Jacobian must override.
    virtual Vector solve_shifted_jacobian(const Vector& u, const ParamPoint& mu,
                                          double c, const Vector& b) const;

    /// Row `cell` of the residual M(mu) udot + f(u; mu). The default computes
    /// the full vectors; models override with stencil-local evaluation.
    virtual double residual_row(Index cell, const Vector& u, const Vector& udot,
                                const ParamPoint& mu) const;

    /// Row `cell` of J(u; mu) as a sparse vector. Required for hyperreduced
    /// online assembly; available whenever the sparse Jacobian is.
    virtual void jacobian_row(Index cell, const Vector& u, const ParamPoint& mu,
                              SparseVector& row) const;

    /// Indices of state entries read when evaluating residual_row(cell).
    /// The default (every index) is correct for globally coupled models.
    virtual std::vector<Index> stencil(Index cell) const;

    void check_length(const Vector& x, const char* what) const;
    void check_param(const ParamPoint& mu) const;
    void check_cell(Index cell) const;
};

/// Residual r = M(mu) udot + f(u; mu). Throws NumericalError naming the first
/// non-finite entry.
Vector residual(const SemiDiscreteModel& model, const Vector& u,
                const Vector& udot, const ParamPoint& mu);

/// Contribution of one cell to the residual, as a sparse vector whose sum
/// over all cells reproduces residual().
SparseVector per_cell_residual(const SemiDiscreteModel& model, const Vector& u,
                               const Vector& udot, const ParamPoint& mu, Index cell);

/// Max relative deviation between jacobian_apply and a central finite
/// difference of f over `directions` random unit directions.
double jacobian_fd_check(const SemiDiscreteModel& model, const Vector& u,
                         const ParamPoint& mu, double h, int directions = 20,
                         std::uint64_t seed = 0x5eed);

/// Throws NumericalError naming the first non-finite entry of v.
void require_finite(const Vector& v, const char* what);

}  // namespace prom
