#pragma once

#include <stdexcept>
#include <string>

namespace spikepca {

// Base for all precondition/domain violations; CLI maps these to exit code 2.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateSignal : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct NotSymmetric : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct RootBracketFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConditionViolated : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct InvalidDof : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct RegimeViolation : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct BulkViolation : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct SupportViolation : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct RootNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateSpectrum : PreconditionError {
    using PreconditionError::PreconditionError;
};
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spikepca
