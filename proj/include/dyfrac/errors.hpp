#ifndef DYFRAC_ERRORS_HPP
#define DYFRAC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyfrac {

/// An integral whose exponent puts it in a divergent regime (kernel too
/// singular on the ball, or not decaying on the complement).
class DivergentIntegral : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Form order or other numeric parameter outside its admissible range.
class InvalidParameter : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed serialized input. `position` is the byte offset of the first
/// offending character when known, otherwise npos.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position = npos)
        : std::runtime_error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::size_t position_;
};

}  // namespace dyfrac

#endif  // DYFRAC_ERRORS_HPP
