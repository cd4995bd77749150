#pragma once

#include "miqos/errors.hpp"

namespace miqos {

/// Coaxial coil pair. The mutual-inductance formula assumes the receive coil
/// sits in the (locally uniform) field of the transmit coil, which holds when
/// radius_rx is small against radius_tx; any positive geometry is accepted.
struct CoilGeometry {
    double turns_tx;        // count
    double turns_rx;        // count
    double radius_tx;       // m
    double radius_rx;       // m
    double distance;        // m, center to center
    double permeability;    // H/m

    void validate() const;
};

struct CircuitParams {
    double frequency;       // Hz (resonance assumed tuned at this frequency)
    double r_tx;            // ohm, transmit loop resistance
    double r_rx;            // ohm, receive loop resistance
    double r_load;          // ohm
    double noise_power;     // W, baseband noise variance

    void validate() const;
};

/// Constants derived from geometry and circuit. `a` scales the equivalent
/// resistance the receive loop reflects into the transmit loop (ohm/H^2);
/// `b` scales the receive SNR (1/(A^2 H^2)). The angular frequency is folded
/// into both and never appears standalone.
struct LinkBudget {
    double a;
    double b;
    double m_max;           // H, aligned-coil mutual inductance
    double m_min;           // H, lower edge of the |M| support, m_max/sqrt(3)
};

/// Aligned-coil mutual inductance; scales as distance^-3.
double mutual_inductance_max(const CoilGeometry& geom);

LinkBudget derive_link_budget(const CoilGeometry& geom, const CircuitParams& circ);

/// Time-averaged transmit power for squared current xi = I_t^2:
/// 0.5 * xi * (r_tx + a M^2).
double transmit_power(double xi, double m, const LinkBudget& budget,
                      const CircuitParams& circ);

/// Receive SNR gamma = 0.5 * b * xi * M^2; even in M.
double receive_snr(double xi, double m, const LinkBudget& budget);

/// Spectral efficiency log2(1 + gamma) in bits/s/Hz.
double instantaneous_rate(double xi, double m, const LinkBudget& budget);

}  // namespace miqos
