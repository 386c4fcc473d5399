#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qficoh {

// Base for everything thrown by this library. `residual` carries the size of
// the violated invariant when one is available (NaN otherwise).
class Error : public std::runtime_error {
public:
    Error(const std::string& what, double residual = std::nan(""))
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Input failed a structural invariant (CLI exit code 1).
class ValidationError : public Error {
    using Error::Error;
};

// A numerical procedure could not deliver its contract (CLI exit code 2).
class NumericalError : public Error {
    using Error::Error;
};

class NotHermitian : public ValidationError {
    using ValidationError::ValidationError;
};
class NotPsd : public ValidationError {
    using ValidationError::ValidationError;
};
class TraceNotOne : public ValidationError {
    using ValidationError::ValidationError;
};
class NotIsometry : public ValidationError {
    using ValidationError::ValidationError;
};
class NotUnitary : public ValidationError {
    using ValidationError::ValidationError;
};
class NotUnitaryTwist : public ValidationError {
    using ValidationError::ValidationError;
};
class NotNormalized : public ValidationError {
    using ValidationError::ValidationError;
};
class DimensionMismatch : public ValidationError {
    using ValidationError::ValidationError;
};
class CompletenessViolation : public ValidationError {
    using ValidationError::ValidationError;
};
class BadRank : public ValidationError {
    using ValidationError::ValidationError;
};
class BadDimension : public ValidationError {
    using ValidationError::ValidationError;
};
class ConfigInvalid : public ValidationError {
    using ValidationError::ValidationError;
};
class ParseError : public ValidationError {
    using ValidationError::ValidationError;
};

class NumericalFailure : public NumericalError {
    using NumericalError::NumericalError;
};
class FlatLikelihood : public NumericalError {
    using NumericalError::NumericalError;
};

} // namespace qficoh
