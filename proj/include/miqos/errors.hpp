#pragma once

#include <stdexcept>
#include <string>

namespace miqos {

// A physical, configuration, or call-site value violates its domain.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical routine ran out of budget before reaching the requested
// tolerance. Carries the best estimate computed so far.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}

    double best_estimate;
};

// No sign change found, even after bracket expansion.
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace miqos
