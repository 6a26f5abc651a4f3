#include "delaybs/errors.hpp"

#include <utility>

namespace dbs {

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifierError::UnknownIdentifierError(std::string name, std::size_t offset)
    : std::runtime_error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

EvalError::EvalError(std::string reason, SourceSpan span, double t, double s)
    : std::runtime_error(reason + " at [" + std::to_string(span.begin) + ", " + std::to_string(span.end) +
                         ") (t=" + std::to_string(t) + ", s=" + std::to_string(s) + ")"),
      span_(span),
      t_(t),
      s_(s) {}

}  // namespace dbs
