// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "prom/common.hpp"

namespace prom {

struct NnlsResult {
    Vector x;              // nonnegative solution
    double residual_norm;  // |G x - b|_2
    int iterations;
};

/// Serial Lawson-Hanson active-set nonnegative least squares with an early
/// exit once |G x - b|_2 <= epsilon_rel * |b|_2; epsilon_rel = 0 runs to full
/// optimality. Column selection takes the largest dual value, ties broken by
/// lowest index, so runs are deterministic. Throws SolverError (with the
/// achieved residual) if the iteration cap is hit.
NnlsResult nnls_lawson_hanson(const Matrix& g, const Vector& b, double epsilon_rel,
                              int max_iterations = 0);

}  // namespace prom
