#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dbs {

// Input outside an operation's mathematical domain (negative time, v <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller broke a documented precondition (interval crossing a block, t < t*, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Floating point breakdown during simulation or integration.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or invalid configuration document.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Source range [begin, end) in an expression string, byte offsets.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, std::string expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class UnknownIdentifierError : public std::runtime_error {
public:
    UnknownIdentifierError(std::string name, std::size_t offset);

    const std::string& name() const noexcept { return name_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

// Non-finite or undefined result while evaluating an expression node.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string reason, SourceSpan span, double t, double s);

    SourceSpan span() const noexcept { return span_; }
    double t() const noexcept { return t_; }
    double s() const noexcept { return s_; }

private:
    SourceSpan span_;
    double t_;
    double s_;
};

}  // namespace dbs
