#pragma once

#include <stdexcept>
#include <string>

namespace fairsched {

/// Families map onto CLI exit codes: input errors exit 2, guard errors exit
/// 3, internal invariant breaches exit 4.
enum class ErrorClass { Input = 2, Guard = 3, Internal = 4 };

class Error : public std::runtime_error {
public:
    Error(const char* kind, ErrorClass cls, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), class_(cls) {}

    const char* kind() const { return kind_; }
    ErrorClass error_class() const { return class_; }

private:
    const char* kind_;
    ErrorClass class_;
};

class InputError : public Error {
public:
    InputError(const char* kind, const std::string& msg) : Error(kind, ErrorClass::Input, msg) {}
};

class GuardError : public Error {
public:
    GuardError(const char* kind, const std::string& msg) : Error(kind, ErrorClass::Guard, msg) {}
};

class InternalError : public Error {
public:
    InternalError(const char* kind, const std::string& msg)
        : Error(kind, ErrorClass::Internal, msg) {}
};

struct ParseError : InputError {
    explicit ParseError(const std::string& m) : InputError("ParseError", m) {}
};

struct SemanticError : InputError {
    explicit SemanticError(const std::string& m) : InputError("SemanticError", m) {}
};

struct InvalidParams : InputError {
    explicit InvalidParams(const std::string& m) : InputError("InvalidParams", m) {}
};

struct AlreadyExpanded : InputError {
    explicit AlreadyExpanded(const std::string& m) : InputError("AlreadyExpanded", m) {}
};

struct NotExpanded : InputError {
    explicit NotExpanded(const std::string& m) : InputError("NotExpanded", m) {}
};

struct NonBinaryUtilities : InputError {
    explicit NonBinaryUtilities(const std::string& m) : InputError("NonBinaryUtilities", m) {}
};

struct NonUnitCredits : InputError {
    explicit NonUnitCredits(const std::string& m) : InputError("NonUnitCredits", m) {}
};

struct InvalidAllocation : InputError {
    explicit InvalidAllocation(const std::string& m) : InputError("InvalidAllocation", m) {}
};

struct UnsupportedUtilityKind : InputError {
    explicit UnsupportedUtilityKind(const std::string& m)
        : InputError("UnsupportedUtilityKind", m) {}
};

struct InfeasibleThreshold : InputError {
    explicit InfeasibleThreshold(const std::string& m) : InputError("InfeasibleThreshold", m) {}
};

struct InstanceTooLarge : GuardError {
    explicit InstanceTooLarge(const std::string& m) : GuardError("InstanceTooLarge", m) {}
};

struct TooManyStudents : GuardError {
    explicit TooManyStudents(const std::string& m) : GuardError("TooManyStudents", m) {}
};

struct StateBudgetExceeded : GuardError {
    explicit StateBudgetExceeded(const std::string& m) : GuardError("StateBudgetExceeded", m) {}
};

struct BudgetExceeded : GuardError {
    explicit BudgetExceeded(const std::string& m) : GuardError("BudgetExceeded", m) {}
};

struct AugmentationLimitExceeded : InternalError {
    explicit AugmentationLimitExceeded(const std::string& m)
        : InternalError("AugmentationLimitExceeded", m) {}
};

struct InvariantBreach : InternalError {
    explicit InvariantBreach(const std::string& m) : InternalError("InvariantBreach", m) {}
};

}  // namespace fairsched
