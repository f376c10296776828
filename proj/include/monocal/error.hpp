#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace monocal {

enum class ErrorKind {
    EmptyProblem,
    InvalidWeight,
    InvalidValue,
    InvalidLabel,
    NotMonotone,
    OutOfOrder,
    InvalidConfig,
    NoWidth,
    OracleFailure,
    Unbounded,
    TooLarge,
    Unsupported,
    Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace monocal
