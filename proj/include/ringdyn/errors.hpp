// errors.hpp — exception taxonomy shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace ringdyn {

// Lexical/grammar failure; carries a 0-based character offset into the input.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string msg, std::size_t position)
        : std::runtime_error(std::move(msg)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Symbolic-domain failure: zero denominator, unbound symbol, bad substitution.
class symalg_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Constraint-analysis failure: singular matrices, degenerate multiplier
// systems, unsupported constraint shapes, generation budget exhaustion.
class engine_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric-integration failure: poles, projection non-convergence.
class dynamics_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration failure: schema or semantic violations in a run config.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ringdyn
