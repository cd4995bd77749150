#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "miqos/channel.hpp"
#include "miqos/policy.hpp"

namespace miqos {

/// Experiment description loaded from a JSON document. All physical values
/// are SI with unit-suffixed keys (frequency_hz, avg_power_w, ...).
struct ExperimentConfig {
    CoilGeometry geometry;
    CircuitParams circuit;
    PolicyConstraints constraints;
    std::vector<double> theta_grid;
    int m_grid_points = 1001;
    int cdf_grid_points = 4096;
    std::uint64_t rng_seed = 12345;
    SolverSpecs specs;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig parse(const std::string& json_text);

    void validate() const;
};

}  // namespace miqos
