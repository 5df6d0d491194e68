// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "prom/common.hpp"

namespace prom::testing {

inline Vector random_vector(Index n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng,
                            double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    }
    return m;
}

inline Matrix random_spd(Index n, std::mt19937_64& rng) {
    Matrix a = random_matrix(n, n, rng);
    return a * a.transpose() + static_cast<double>(n) * Matrix::Identity(n, n);
}

inline Matrix orthonormal_columns(Index rows, Index cols, std::mt19937_64& rng) {
    Matrix a = random_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    return q;
}

inline SparseMatrix random_sparse(Index n, Index nnz_per_row, std::mt19937_64& rng,
                                  double scale = 1.0, double diagonal_boost = 0.0) {
    std::normal_distribution<double> normal(0.0, scale);
    std::uniform_int_distribution<Index> col(0, n - 1);
    std::vector<Eigen::Triplet<double>> trip;
    for (Index i = 0; i < n; ++i) {
        for (Index k = 0; k < nnz_per_row; ++k) {
            trip.emplace_back(i, col(rng), normal(rng));
        }
        if (diagonal_boost != 0.0) trip.emplace_back(i, i, diagonal_boost);
    }
    SparseMatrix a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

/// Least-squares fit of the observed order from errors at halved step sizes:
/// averaged log2 ratio between consecutive levels.
inline double observed_order(const std::vector<double>& errors) {
    double acc = 0.0;
    int count = 0;
    for (size_t i = 0; i + 1 < errors.size(); ++i) {
        acc += std::log2(errors[i] / errors[i + 1]);
        ++count;
    }
    return acc / count;
}

/// Reference minimizer of |A y - b|_1 by iteratively reweighted least squares
/// with a tiny smoothing floor. Independent of the solver under test.
inline Vector irls_l1_reference(const Matrix& a, const Vector& b, int sweeps = 300,
                                double smoothing = 1e-12) {
    Vector y = Vector::Zero(a.cols());
    for (int s = 0; s < sweeps; ++s) {
        Vector r = a * y - b;
        Vector w(r.size());
        for (Index i = 0; i < r.size(); ++i) {
            w(i) = 1.0 / std::sqrt(r(i) * r(i) + smoothing);
        }
        Matrix aw = w.cwiseSqrt().asDiagonal() * a;
        Vector bw = w.cwiseSqrt().cwiseProduct(b);
        Vector next = aw.colPivHouseholderQr().solve(bw);
        if ((next - y).lpNorm<Eigen::Infinity>() < 1e-14) {
            y = next;
            break;
        }
        y = next;
    }
    return y;
}

}  // namespace prom::testing
