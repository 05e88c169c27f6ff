#pragma once

#include <stdexcept>
#include <string>

namespace dlnoc {

/// Raised for malformed or out-of-range user input (bad node ids, empty profiles, ...).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a flow matrix cannot be solved (zero pivot under tolerance).
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t column)
        : std::runtime_error(what), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace dlnoc
