#ifndef SPINCHAIN_ERRORS_HPP
#define SPINCHAIN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinchain {

// Invalid arguments or violated preconditions.
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Problem size exceeds the desk-scale guards.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver failed to reach its tolerance, or numbers came out
// inconsistent with an exact-arithmetic identity.
struct numerical_error : std::runtime_error {
    double best_residual = 0.0;
    explicit numerical_error(const std::string& msg, double residual = 0.0)
        : std::runtime_error(msg), best_residual(residual) {}
};

// The ground state is degenerate; amplitude-derived quantities are
// ambiguous and the caller has to decide how to proceed.
struct degeneracy_error : std::runtime_error {
    explicit degeneracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs that are individually in range but jointly impossible
// (e.g. correlators that do not come from any physical state).
struct inconsistent_input_error : std::runtime_error {
    explicit inconsistent_input_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace spinchain

#endif
