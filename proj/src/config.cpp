#include "miqos/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace miqos {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
    if (!j.contains(key))
        throw InvalidParameter(std::string("config: missing key \"") + key + "\"");
    if (!j.at(key).is_number())
        throw InvalidParameter(std::string("config: key \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw InvalidParameter(std::string("config: key \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::vector<double> default_theta_grid() {
    std::vector<double> grid(20);
    for (int i = 0; i < 20; ++i) grid[i] = std::pow(10.0, -3.0 + 5.0 * i / 19.0);
    return grid;
}

QuadMethod parse_method(const std::string& name) {
    if (name == "adaptive-simpson") return QuadMethod::adaptive_simpson;
    if (name == "gauss-legendre") return QuadMethod::gauss_legendre;
    throw InvalidParameter("config: unknown quadrature method \"" + name + "\"");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("config: malformed JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    cfg.geometry.turns_tx = require_number(j, "turns_tx");
    cfg.geometry.turns_rx = require_number(j, "turns_rx");
    cfg.geometry.radius_tx = require_number(j, "radius_tx_m");
    cfg.geometry.radius_rx = require_number(j, "radius_rx_m");
    cfg.geometry.distance = require_number(j, "distance_m");
    cfg.geometry.permeability =
        number_or(j, "permeability_h_per_m", 4e-7 * std::numbers::pi);
    cfg.circuit.frequency = require_number(j, "frequency_hz");
    cfg.circuit.r_tx = require_number(j, "r_tx_ohm");
    cfg.circuit.r_rx = require_number(j, "r_rx_ohm");
    cfg.circuit.r_load = require_number(j, "r_load_ohm");
    cfg.circuit.noise_power = require_number(j, "noise_power_w");
    cfg.constraints.r_max = require_number(j, "r_max_bps_hz");
    cfg.constraints.avg_power = require_number(j, "avg_power_w");

    if (j.contains("theta_grid")) {
        if (!j.at("theta_grid").is_array())
            throw InvalidParameter("config: theta_grid must be an array");
        cfg.theta_grid = j.at("theta_grid").get<std::vector<double>>();
    } else {
        cfg.theta_grid = default_theta_grid();
    }
    cfg.m_grid_points = static_cast<int>(number_or(j, "m_grid_points", 1001));
    cfg.cdf_grid_points = static_cast<int>(number_or(j, "cdf_grid_points", 4096));
    cfg.rng_seed = static_cast<std::uint64_t>(number_or(j, "rng_seed", 12345));

    if (j.contains("quadrature")) {
        const json& q = j.at("quadrature");
        if (q.contains("method")) cfg.specs.quadrature.method = parse_method(q.at("method").get<std::string>());
        cfg.specs.quadrature.abs_tol = number_or(q, "abs_tol", cfg.specs.quadrature.abs_tol);
        cfg.specs.quadrature.rel_tol = number_or(q, "rel_tol", cfg.specs.quadrature.rel_tol);
        cfg.specs.quadrature.max_subdivisions =
            static_cast<int>(number_or(q, "max_subdivisions", cfg.specs.quadrature.max_subdivisions));
        cfg.specs.quadrature.gauss_nodes =
            static_cast<int>(number_or(q, "gauss_nodes", cfg.specs.quadrature.gauss_nodes));
    }
    if (j.contains("root_solver")) {
        const json& r = j.at("root_solver");
        cfg.specs.root.abs_tol = number_or(r, "abs_tol", cfg.specs.root.abs_tol);
        cfg.specs.root.max_iters = static_cast<int>(number_or(r, "max_iters", cfg.specs.root.max_iters));
        cfg.specs.root.bracket_expansion =
            number_or(r, "bracket_expansion", cfg.specs.root.bracket_expansion);
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void ExperimentConfig::validate() const {
    geometry.validate();
    circuit.validate();
    constraints.validate();
    specs.quadrature.validate();
    specs.root.validate();
    if (theta_grid.empty())
        throw InvalidParameter("config: theta_grid must not be empty");
    for (double t : theta_grid)
        if (!(t > 0.0) || !std::isfinite(t))
            throw InvalidParameter("config: theta_grid entries must be finite and strictly positive");
    for (std::size_t i = 1; i < theta_grid.size(); ++i)
        if (!(theta_grid[i] > theta_grid[i - 1]))
            throw InvalidParameter("config: theta_grid must be strictly increasing");
    if (m_grid_points < 2)
        throw InvalidParameter("config: m_grid_points must be >= 2");
    if (cdf_grid_points < 8)
        throw InvalidParameter("config: cdf_grid_points must be >= 8");
}

}  // namespace miqos
