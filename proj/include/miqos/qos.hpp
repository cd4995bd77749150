#pragma once

#include "miqos/misalignment.hpp"
#include "miqos/policy.hpp"

namespace miqos {

struct QueueModel {
    double q_threshold;   // bits
    double arrival_rate;  // bits/s/Hz, constant-rate source

    void validate() const;
};

/// Effective capacity of a policy under QoS exponent theta > 0:
///   EC = -(1/theta) ln E_M[(1 + gamma(M))^(-beta)],  beta = theta/ln 2.
/// The service rate is ceiled at r_max (the hardware limit), which only
/// matters for the uncapped water-filling diagnostic. Computed through
/// expm1/log1p so the theta -> 0 limit keeps full precision.
double effective_capacity(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                          const QoSParams& qos, const SolverSpecs& specs);

/// Ergodic (theta -> 0) rate E[min(log2(1 + gamma), r_max)].
double ergodic_capacity(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                        const SolverSpecs& specs);

/// P(Q > q_threshold) = exp(-theta q_threshold), clamped to [0, 1].
double overflow_probability(const QoSParams& qos, const QueueModel& queue);

/// Smallest QoS exponent meeting a target overflow probability:
/// theta = -ln(target)/q_threshold.
double required_qos_exponent(const QueueModel& queue, double target_overflow);

/// Alias of effective_capacity under its arrival-rate interpretation: the
/// largest constant arrival rate the policy supports at this theta.
double supported_arrival_rate(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                              const QoSParams& qos, const SolverSpecs& specs);

}  // namespace miqos
