#pragma once

#include <stdexcept>
#include <string>

namespace mpsynth {

/// Syntax or validation error in a formula or spec file. Carries the
/// 1-based source position when one is known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0, int col = 0)
        : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col) {
        if (line <= 0) return msg;
        return std::to_string(line) + ":" + std::to_string(col) + ": " + msg;
    }

    int line_;
    int col_;
};

/// A configured budget (state cap, node ceiling, relation size) was exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strategy extraction was requested for a goal set that is not realizable
/// from the initial state.
class UnrealizableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A wall-clock deadline expired inside a solver phase.
class TimeoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mpsynth
