#pragma once

#include <stdexcept>
#include <string>

namespace bm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested polynomial degree / chaos level above the supported cap.
struct UnsupportedDegree : Error {
    using Error::Error;
};

// Vector/matrix dimensions of the arguments do not match.
struct DimensionMismatch : Error {
    using Error::Error;
};

// A combinatorial or quadrature budget was exhausted before convergence.
struct BudgetExceeded : Error {
    using Error::Error;
};

// A numerical integration produced a non-finite value or failed a precondition.
struct QuadratureError : Error {
    using Error::Error;
};

// A covariance / spectral model violates one of its structural requirements.
struct ModelError : Error {
    using Error::Error;
};

// Bad experiment configuration; message carries the offending field path.
struct ConfigError : Error {
    using Error::Error;
};

// A statistical test was asked to run on too few replicates.
struct InsufficientReplicates : Error {
    using Error::Error;
};

}  // namespace bm
