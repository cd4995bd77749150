#include "miqos/qos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace miqos {

void QueueModel::validate() const {
    if (!(q_threshold >= 0.0) || !std::isfinite(q_threshold))
        throw InvalidParameter("q_threshold must be finite and non-negative");
    if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate))
        throw InvalidParameter("arrival_rate must be finite and non-negative");
}

double effective_capacity(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                          const QoSParams& qos, const SolverSpecs& specs) {
    if (!(qos.theta > 0.0) || !std::isfinite(qos.theta))
        throw InvalidParameter("effective_capacity requires finite theta > 0");
    const double theta = qos.theta;
    const double beta = qos.beta;
    const double b = policy.budget().b;
    const double snr_cap = std::exp2(policy.constraints().r_max) - 1.0;
    const double bps[] = {policy.solution().m1, policy.solution().m2};
    // exponent of the rate moment generating function, theta * R(M) >= 0
    auto q = [&](double m) {
        const double gamma = std::min(0.5 * b * m * m * policy.xi(m), snr_cap);
        return beta * std::log1p(gamma);
    };
    // dividing by the measured mass cancels the shared quadrature error
    const double mass = expect_even(dist, [](double) { return 1.0; }, bps,
                                    specs.quadrature);

    // E[e^-q] - 1, kept on the rate scale so small theta loses no precision
    const double deficit_rate =
        expect_even(dist, [&](double m) { return std::expm1(-q(m)) / theta; }, bps,
                    specs.quadrature) /
        mass;
    const double scaled = theta * deficit_rate;
    if (scaled > -0.5) return -std::log1p(scaled) / theta;

    // large theta: E[e^-q] is dominated by the slowest rate; factor it out so
    // the quadrature works on an O(1) integrand
    double q0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 256; ++i) {
        const double m = dist.m_min() + (dist.m_max() - dist.m_min()) * i / 256.0;
        q0 = std::min(q0, q(m));
    }
    const double shifted =
        expect_even(dist, [&](double m) { return std::exp(q0 - q(m)); }, bps,
                    specs.quadrature) /
        mass;
    return (q0 - std::log(shifted)) / theta;
}

double ergodic_capacity(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                        const SolverSpecs& specs) {
    const double b = policy.budget().b;
    const double r_max = policy.constraints().r_max;
    const double bps[] = {policy.solution().m1, policy.solution().m2};
    return expect_even(
        dist,
        [&](double m) {
            const double rate = std::log1p(0.5 * b * m * m * policy.xi(m)) / std::numbers::ln2;
            return std::min(rate, r_max);
        },
        bps, specs.quadrature);
}

double overflow_probability(const QoSParams& qos, const QueueModel& queue) {
    queue.validate();
    if (!(qos.theta >= 0.0) || !std::isfinite(qos.theta))
        throw InvalidParameter("overflow_probability requires finite theta >= 0");
    return std::clamp(std::exp(-qos.theta * queue.q_threshold), 0.0, 1.0);
}

double required_qos_exponent(const QueueModel& queue, double target_overflow) {
    queue.validate();
    if (!(queue.q_threshold > 0.0))
        throw InvalidParameter("required_qos_exponent needs q_threshold > 0");
    if (!(target_overflow > 0.0) || !(target_overflow < 1.0))
        throw InvalidParameter("target_overflow must lie strictly inside (0, 1)");
    return -std::log(target_overflow) / queue.q_threshold;
}

double supported_arrival_rate(const CurrentPolicy& policy, const MutualInductanceDist& dist,
                              const QoSParams& qos, const SolverSpecs& specs) {
    return effective_capacity(policy, dist, qos, specs);
}

}  // namespace miqos
