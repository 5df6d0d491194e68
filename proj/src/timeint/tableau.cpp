// SPDX-License-Identifier: Apache-2.0

#include "prom/timeint/tableau.hpp"

#include <cmath>

namespace prom {

void ButcherTableau::validate() const {
    const Index s = stages();
    if (a.rows() != s || a.cols() != s || c.size() != s) {
        throw ContractError("tableau: inconsistent dimensions");
    }
    for (Index i = 0; i < s; ++i) {
        for (Index j = i + 1; j < s; ++j) {
            if (a(i, j) != 0.0) {
                throw ContractError("tableau: not lower triangular");
            }
        }
        if (std::abs(a.row(i).sum() - c(i)) > 1e-14) {
            throw ContractError("tableau: row sum of A does not match c");
        }
    }
    if (std::abs(b.sum() - 1.0) > 1e-14) {
        throw ContractError("tableau: weights do not sum to one");
    }
    for (Index i = 1; i < s; ++i) {
        if (std::abs(a(i, i) - a(0, 0)) > 1e-14) {
            throw ContractError("tableau: diagonal entries are not equal");
        }
    }
    if (a(0, 0) <= 0.0) {
        throw ContractError("tableau: diagonal must be positive");
    }
}

ButcherTableau dirk2_tableau() {
    const double alpha = 1.0 - std::sqrt(2.0) / 2.0;
    ButcherTableau tab;
    tab.a = Matrix::Zero(2, 2);
    tab.a(0, 0) = alpha;
    tab.a(1, 0) = 1.0 - alpha;
    tab.a(1, 1) = alpha;
    tab.b = Vector(2);
    tab.b << 1.0 - alpha, alpha;
    tab.c = Vector(2);
    tab.c << alpha, 1.0;
    return tab;
}

ButcherTableau dirk3_tableau() {
    const double phi = std::atan(std::sqrt(2.0) / 4.0) / 3.0;
    const double alpha =
        1.0 + std::sqrt(6.0) / 2.0 * std::sin(phi) - std::sqrt(2.0) / 2.0 * std::cos(phi);
    const double tau2 = (1.0 + alpha) / 2.0;
    const double b1 = -(6.0 * alpha * alpha - 16.0 * alpha + 1.0) / 4.0;
    const double b2 = (6.0 * alpha * alpha - 20.0 * alpha + 5.0) / 4.0;
    ButcherTableau tab;
    tab.a = Matrix::Zero(3, 3);
    tab.a(0, 0) = alpha;
    tab.a(1, 0) = tau2 - alpha;
    tab.a(1, 1) = alpha;
    tab.a(2, 0) = b1;
    tab.a(2, 1) = b2;
    tab.a(2, 2) = alpha;
    tab.b = Vector(3);
    tab.b << b1, b2, alpha;
    tab.c = Vector(3);
    tab.c << alpha, tau2, 1.0;
    return tab;
}

double stability_function(const ButcherTableau& tab, double z) {
    const Index s = tab.stages();
    Matrix m = Matrix::Identity(s, s) - z * tab.a;
    Vector ones = Vector::Ones(s);
    Vector w = m.fullPivLu().solve(ones);
    return 1.0 + z * tab.b.dot(w);
}

}  // namespace prom
