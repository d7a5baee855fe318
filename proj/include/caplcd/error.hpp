#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace caplcd {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition (bad dimension, non-cap
/// input, rank-deficient point set, ...). The CLI maps this to exit code 2.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A certificate or ledger file could not be parsed.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Table assembly found coverage gaps or contradictory bounds.
class TableError : public Error {
public:
    TableError(std::string what, std::vector<std::string> problems)
        : Error(std::move(what)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Something that a theorem rules out was produced. Always a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace caplcd
