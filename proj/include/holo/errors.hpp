#ifndef HOLO_ERRORS_HPP
#define HOLO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holo {

// Structural problems in an input file (bad grammar, truncated block).
// Carries the 1-based line number where parsing failed.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string msg, std::size_t line)
        : std::runtime_error(std::move(msg) + " (line " + std::to_string(line) + ")"),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// File is syntactically readable but violates a format rule
// (non-monotone axes, descending frequencies, wrong arity).
class format_error : public parse_error {
public:
    using parse_error::parse_error;
};

// Values parsed fine but are unusable (NaN fields, non-physical data).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mathematically valid call on degenerate input (zero matrix, zero-power pattern).
class degenerate_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace holo

#endif
