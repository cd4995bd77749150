#pragma once

#include <numbers>

#include "miqos/channel.hpp"
#include "miqos/policy.hpp"

// Default link used across the test suites; mirrors configs/paper_section4.json.
namespace ref_link {

inline miqos::CoilGeometry geometry() {
    return {20.0, 20.0, 4.0, 0.25, 3.0, 4e-7 * std::numbers::pi};
}

inline miqos::CircuitParams circuit() {
    return {2000.0, 20.0, 20.0, 200.0, 2.5e-3};
}

inline miqos::PolicyConstraints constraints() { return {0.5, 9.0}; }

}  // namespace ref_link
