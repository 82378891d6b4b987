#pragma once

#include <stdexcept>
#include <string>

namespace ht {

enum class ErrorCode {
    domain = 1,       // argument outside the admissible set
    resonance,        // series denominator vanishes (beta in {2,3,4} etc.)
    convergence,      // iteration or quadrature failed to converge
    contraction,      // fixed-point operator norm too large at the chosen cutoff
    degenerate,       // normalization coefficient vanished (a(lambda), G(0))
    resolution,       // grid/step refinement check failed
    invalid_argument, // malformed input (sizes, ranges)
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace ht
