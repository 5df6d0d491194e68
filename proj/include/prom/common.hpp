// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace prom {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseVector = Eigen::SparseVector<double>;

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated API precondition (dimension mismatch, invalid argument).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or other numerical breakdown during evaluation.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Linear-solve or least-squares failure (singular system, NNLS stall, ...).
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what, double residual_norm = 0.0)
        : Error(what), residual_norm(residual_norm) {}
    double residual_norm;
};

/// Nonlinear stage solve did not converge; carries the failure time and the
/// final residual norm so callers can classify a run as unstable.
class StepFailure : public Error {
public:
    StepFailure(const std::string& what, double time, double residual_norm)
        : Error(what), time(time), residual_norm(residual_norm) {}
    double time;
    double residual_norm;
};

/// Snapshot/basis/sample file does not match the expected on-disk format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Pipeline stage invoked without its required inputs.
class PipelineError : public Error {
public:
    using Error::Error;
};

/// Snapshot matrix carries no usable directions.
class DegenerateBasisError : public Error {
public:
    using Error::Error;
};

}  // namespace prom
