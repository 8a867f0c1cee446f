#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ppe {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cd>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cd kI{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when a requested problem exceeds the configured size limits.
class DimensionOverflow : public Error {
public:
    using Error::Error;
};

class NullSpaceDegenerate : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class PositivityViolation : public Error {
public:
    using Error::Error;
};

/// The eigenvector matrix is too ill-conditioned for a residue expansion.
class DefectiveNearEP : public Error {
public:
    DefectiveNearEP(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class GridTooNarrow : public Error {
public:
    using Error::Error;
};

}  // namespace ppe
