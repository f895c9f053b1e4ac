#pragma once

#include <stdexcept>
#include <string>

namespace eud {

// Problem in user-supplied data (bad file contents, mismatched inputs).
// The CLI maps this to exit code 2; genuine internal bugs surface as
// std::logic_error and map to exit code 3.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Parse failure carrying the 1-based line number of the offending line.
class ParseError : public InputError {
public:
    ParseError(int line, const std::string& reason)
        : InputError("line " + std::to_string(line) + ": " + reason), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

}  // namespace eud
