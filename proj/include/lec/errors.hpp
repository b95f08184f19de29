#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace lec {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input: bad files, duplicate ids, parameter
/// range violations, mismatched node sets.
class InputError : public Error {
public:
    using Error::Error;
};

/// A matrix was passed in the wrong mode (e.g. a Laplacian where an
/// adjacency matrix is required).
class ModeError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: eigensolver non-convergence, residual contract
/// violation, inconsistent conjugate pairing.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// No admissible eigengap exists (all eigenvalue real parts <= 0, e.g. a
/// directed path). Carries the all-zero centrality payload so callers can
/// still emit a well-formed result.
class DegenerateSpectrum : public Error {
public:
    explicit DegenerateSpectrum(const std::string& msg, Eigen::VectorXd payload = {})
        : Error(msg), payload_(std::move(payload)) {}

    /// All-zero vector sized like the analyzed matrix; empty when the
    /// failure happened before any matrix was seen.
    const Eigen::VectorXd& zero_payload() const { return payload_; }

private:
    Eigen::VectorXd payload_;
};

}  // namespace lec
