#ifndef DMTL_ERRORS_HPP
#define DMTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dmtl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// ∞ + (−∞) and friends.
class UndefinedSum : public Error {
public:
    using Error::Error;
};

/// Malformed interval, range or literal.
class InvalidValue : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Program or data violates a semantic rule (safety, arity, shapes).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operation called outside its contract (e.g. recursive program where
/// a nonrecursive one is required).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Table invariant (TOA, coalescing) broken on input.
class IntegrityError : public Error {
public:
    using Error::Error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class SqlGenError : public Error {
public:
    using Error::Error;
};

}  // namespace dmtl

#endif  // DMTL_ERRORS_HPP
