#pragma once

#include <stdexcept>
#include <string>

namespace graphhypo {

// Bad input data: malformed files, schema violations, dangling references.
class InputError : public std::runtime_error {
public:
    explicit InputError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Hypothesis text rejected by the parser; position is a 0-based byte offset.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t position)
        : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Target-expression evaluation failure (division by zero, missing attribute).
class EvalError : public std::runtime_error {
public:
    explicit EvalError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Path enumeration hit its instance limit.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(std::string msg) : std::runtime_error(std::move(msg)) {}
};

}  // namespace graphhypo
