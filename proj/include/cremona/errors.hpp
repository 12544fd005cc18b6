#ifndef CREMONA_ERRORS_HPP
#define CREMONA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cremona {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input or a violated operation precondition. CLI exit code 2.
struct precondition_error : error {
    using error::error;
};

/// A configurable resource cap was hit (term cap, step cap). CLI exit code 3.
struct cap_error : error {
    std::size_t offending = 0;
    std::size_t cap = 0;

    cap_error(const std::string& what, std::size_t offending_, std::size_t cap_)
        : error(what), offending(offending_), cap(cap_) {}
};

/// Syntax error with a character position into the offending text.
struct parse_error : precondition_error {
    std::size_t position = 0;

    parse_error(const std::string& what, std::size_t pos)
        : precondition_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

}  // namespace cremona

#endif  // CREMONA_ERRORS_HPP
