// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/common.hpp"

namespace prom {

/// Butcher tableau of a diagonally implicit Runge-Kutta scheme.
struct ButcherTableau {
    Matrix a;  // s x s, lower triangular
    Vector b;  // weights
    Vector c;  // abscissae

    Index stages() const { return b.size(); }

    /// Structural checks: lower triangular, row sums of a equal c and the
    /// weights sum to one (both to 1e-14), equal positive diagonal.
    void validate() const;
};

/// Two-stage, second-order, L-stable DIRK scheme with alpha = 1 - sqrt(2)/2.
ButcherTableau dirk2_tableau();

/// Three-stage, third-order, L-stable DIRK scheme.
ButcherTableau dirk3_tableau();

/// Stability function R(z) = 1 + z b^T (I - z A)^{-1} 1.
double stability_function(const ButcherTableau& tab, double z);

}  // namespace prom
