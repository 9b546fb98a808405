#pragma once

#include <stdexcept>
#include <string>

namespace gna {

// input text could not be parsed; line/col are 1-based, 0 = unknown
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0, int col = 0)
        : std::runtime_error(format(msg, line, col)), line_(line), col_(col) {}

    int line() const { return line_; }
    int col() const { return col_; }

private:
    static std::string format(const std::string& msg, int line, int col) {
        if (line <= 0)
            return msg;
        std::string s = "line " + std::to_string(line);
        if (col > 0)
            s += ", col " + std::to_string(col);
        return s + ": " + msg;
    }

    int line_;
    int col_;
};

// invalid parameters, unresolvable ids, inconsistent configuration
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// an internal invariant failed (broken dual certificate, non-monotone bound);
// maps to exit code 2 in the CLI
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace gna
