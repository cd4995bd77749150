#include "miqos/channel.hpp"

#include <cmath>
#include <numbers>

namespace miqos {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidParameter(std::string(name) + " must be finite and strictly positive");
}

void check_xi(double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi))
        throw InvalidParameter("xi (squared current) must be finite and non-negative");
}

}  // namespace

void CoilGeometry::validate() const {
    check_positive(turns_tx, "turns_tx");
    check_positive(turns_rx, "turns_rx");
    check_positive(radius_tx, "radius_tx");
    check_positive(radius_rx, "radius_rx");
    check_positive(distance, "distance");
    check_positive(permeability, "permeability");
}

void CircuitParams::validate() const {
    check_positive(frequency, "frequency");
    check_positive(r_tx, "r_tx");
    check_positive(r_rx, "r_rx");
    check_positive(r_load, "r_load");
    check_positive(noise_power, "noise_power");
}

double mutual_inductance_max(const CoilGeometry& geom) {
    geom.validate();
    const double d3 = geom.distance * geom.distance * geom.distance;
    return geom.permeability * std::numbers::pi * geom.turns_tx * geom.turns_rx *
           geom.radius_tx * geom.radius_tx * geom.radius_rx * geom.radius_rx /
           (2.0 * d3);
}

LinkBudget derive_link_budget(const CoilGeometry& geom, const CircuitParams& circ) {
    circ.validate();
    const double w = 2.0 * std::numbers::pi * circ.frequency;
    const double w2 = w * w;
    const double r_sum = circ.r_load + circ.r_rx;
    LinkBudget budget;
    budget.a = w2 / r_sum;
    budget.b = w2 * circ.r_load / (r_sum * r_sum * circ.noise_power);
    budget.m_max = mutual_inductance_max(geom);
    budget.m_min = budget.m_max / std::sqrt(3.0);
    return budget;
}

double transmit_power(double xi, double m, const LinkBudget& budget,
                      const CircuitParams& circ) {
    check_xi(xi);
    return 0.5 * xi * (circ.r_tx + budget.a * m * m);
}

double receive_snr(double xi, double m, const LinkBudget& budget) {
    check_xi(xi);
    return 0.5 * budget.b * xi * m * m;
}

double instantaneous_rate(double xi, double m, const LinkBudget& budget) {
    return std::log1p(receive_snr(xi, m, budget)) / std::numbers::ln2;
}

}  // namespace miqos
