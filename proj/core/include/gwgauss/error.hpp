#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gwgauss {

enum class ErrorCode {
    NonSymmetric,
    NonPositiveDefinite,
    NonPositiveMass,
    DimensionMismatch,
    InvalidPlan,
    SingularPlan,
    UnbalancedInput,
    NegativeEpsilon,
    MarginalMismatch,
    InvalidRegularizers,
    NoPositiveRoot,
    InvalidWeights,
    DimensionTooLarge,
    EpsilonConditionViolated,
    TooManyIndices,
    InvalidInterval,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// (measure index, coordinate index) pair for which the small-epsilon
/// barycenter condition fails.
struct ConditionFailure {
    std::size_t measure = 0;
    std::size_t coordinate = 0;
    bool operator==(const ConditionFailure&) const = default;
};

class EpsilonConditionError : public Error {
public:
    EpsilonConditionError(std::vector<ConditionFailure> failures, const std::string& what)
        : Error(ErrorCode::EpsilonConditionViolated, what), failures_(std::move(failures)) {}

    [[nodiscard]] const std::vector<ConditionFailure>& failures() const noexcept {
        return failures_;
    }

private:
    std::vector<ConditionFailure> failures_;
};

}  // namespace gwgauss
