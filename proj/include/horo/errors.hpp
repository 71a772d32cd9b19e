#pragma once

#include <stdexcept>
#include <string>

namespace horo {

// Thrown when an operation's documented precondition is violated.  `code`
// names the condition (e.g. "gcd_m_kl", "n_not_in_Nq") so callers and the
// CLI can report it per field.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(std::string code, const std::string& what)
        : std::invalid_argument(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

inline void require(bool ok, const char* code, const std::string& what) {
    if (!ok) throw PreconditionError(code, what);
}

}  // namespace horo
