#ifndef TILEPERM_ERRORS_HPP
#define TILEPERM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tileperm {

// Malformed input text (bad field, bad header, out-of-range value).
// Messages carry a 1-based line number where one is known.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model invariant, or invalid
// parameter combinations.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failures (open/read/write).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tileperm

#endif  // TILEPERM_ERRORS_HPP
