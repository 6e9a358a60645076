#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sl2 {

/// Precondition broken by the caller (bad index, size mismatch, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Evaluation left the domain of a chart or hit a pole / zero denominator.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested quantity does not exist for this configuration
/// (e.g. an extra integral of a perturbed system).
class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class SamplingFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Reference to a name that has no binding at evaluation time.
class BindingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, unknown_symbol, non_integer_exponent };

    ParseError(Kind kind, const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

inline void expects(bool condition, const char* what) {
    if (!condition) throw ContractViolation(what);
}

}  // namespace sl2
