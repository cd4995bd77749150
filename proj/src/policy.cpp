#include "miqos/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "miqos/qos.hpp"

namespace miqos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double peak_xi_at(double m, double b, double r_max) {
    return 2.0 * (std::exp2(r_max) - 1.0) / (b * m * m);
}

double shape_xi(const CurrentPolicy::Shape& s, double m) {
    const double am = std::abs(m);
    if (am < s.m_min || am > s.m_max) return 0.0;
    switch (s.kind) {
        case PolicyKind::cap_everywhere:
            return peak_xi_at(am, s.b, s.r_max);
        case PolicyKind::channel_inversion:
            return std::min(s.k_inv / (am * am), peak_xi_at(am, s.b, s.r_max));
        case PolicyKind::constant_current:
            return std::min(s.xi_const, peak_xi_at(am, s.b, s.r_max));
        case PolicyKind::optimal_qos: {
            if (am <= s.m1) return 0.0;
            const double peak = peak_xi_at(am, s.b, s.r_max);
            if (am >= s.m2) return peak;
            const double x = (am * am / (s.r_tx + s.a * am * am)) / s.lambda0;
            const double v =
                2.0 / (s.b * am * am) * (std::pow(x, 1.0 / (s.beta + 1.0)) - 1.0);
            return std::clamp(v, 0.0, peak);
        }
        case PolicyKind::water_filling:
        case PolicyKind::water_filling_capped: {
            if (am <= s.m1) return 0.0;
            const double peak = peak_xi_at(am, s.b, s.r_max);
            if (s.kind == PolicyKind::water_filling_capped && am >= s.m2) return peak;
            const double v =
                2.0 / s.b * (1.0 / (s.lambda0 * (s.r_tx + s.a * am * am)) - 1.0 / (am * am));
            if (s.kind == PolicyKind::water_filling_capped)
                return std::clamp(v, 0.0, peak);
            return std::max(v, 0.0);
        }
    }
    return 0.0;
}

// Theorem thresholds for an exponent family: K = 2^(r_max (beta+1)) for the
// QoS optimum, K = 2^r_max in the beta = 0 limit. Guards: m1 needs
// 1/lambda0 > a (otherwise no state transmits); an m2 denominator <= 0 means
// the cap branch is empty.
void fill_thresholds(CurrentPolicy::Shape& s, double cap_exponent_base) {
    const double inv = 1.0 / s.lambda0;
    s.m1 = inv > s.a ? std::sqrt(s.r_tx / (inv - s.a)) : kInf;
    const double den = 1.0 / (s.lambda0 * cap_exponent_base) - s.a;
    s.m2 = den > 0.0 ? std::sqrt(s.r_tx / den) : kInf;
}

double policy_power(const CurrentPolicy::Shape& s, const CircuitParams& circ,
                    const MutualInductanceDist& dist, const QuadratureSpec& quad) {
    const double bps[] = {s.m1, s.m2};
    return expect_even(
        dist,
        [&](double m) { return 0.5 * shape_xi(s, m) * (circ.r_tx + s.a * m * m); },
        bps, quad);
}

// Power of the cap-everywhere policy; the constraint is slack when this fits
// inside the budget.
double cap_everywhere_power(const LinkBudget& budget, const CircuitParams& circ,
                            const MutualInductanceDist& dist,
                            const PolicyConstraints& cons, const QuadratureSpec& quad) {
    return (std::exp2(cons.r_max) - 1.0) / budget.b *
           expect_even(
               dist,
               [&](double m) { return (circ.r_tx + budget.a * m * m) / (m * m); },
               {}, quad);
}

CurrentPolicy::Shape base_shape(PolicyKind kind, const LinkBudget& budget,
                                const CircuitParams& circ, const PolicyConstraints& cons) {
    CurrentPolicy::Shape s;
    s.kind = kind;
    s.a = budget.a;
    s.b = budget.b;
    s.r_tx = circ.r_tx;
    s.r_max = cons.r_max;
    s.m_min = budget.m_min;
    s.m_max = budget.m_max;
    return s;
}

double outage_mass(const MutualInductanceDist& dist, double m1) {
    if (!(m1 > dist.m_min())) return 0.0;
    const double hi = std::min(m1, dist.m_max());
    return std::clamp(2.0 * (dist.cdf(hi) - 0.5), 0.0, 1.0);
}

CurrentPolicy cap_everywhere(const LinkBudget& budget, const CircuitParams& circ,
                             const MutualInductanceDist& dist,
                             const PolicyConstraints& cons, const SolverSpecs& specs) {
    CurrentPolicy::Shape s = base_shape(PolicyKind::cap_everywhere, budget, circ, cons);
    s.m2 = budget.m_min;
    PolicySolution sol;
    sol.kind = PolicyKind::cap_everywhere;
    sol.m1 = 0.0;
    sol.m2 = budget.m_min;
    sol.power_used = cap_everywhere_power(budget, circ, dist, cons, specs.quadrature);
    sol.outage_probability = 0.0;
    sol.effective_capacity = cons.r_max;  // deterministic rate
    sol.power_constraint_binding = false;
    return CurrentPolicy(s, sol, budget, cons);
}

CurrentPolicy finish(CurrentPolicy::Shape s, std::optional<double> lambda0,
                     const LinkBudget& budget, const CircuitParams& circ,
                     const MutualInductanceDist& dist, const PolicyConstraints& cons,
                     const SolverSpecs& specs, std::optional<QoSParams> qos) {
    PolicySolution sol;
    sol.kind = s.kind;
    sol.lambda0 = lambda0;
    sol.m1 = s.m1;
    sol.m2 = s.m2;
    sol.power_used = policy_power(s, circ, dist, specs.quadrature);
    sol.outage_probability = outage_mass(dist, s.m1);
    sol.power_constraint_binding =
        std::abs(sol.power_used - cons.avg_power) <= 1e-6 * cons.avg_power;
    CurrentPolicy provisional(s, sol, budget, cons);
    sol.effective_capacity = qos ? effective_capacity(provisional, dist, *qos, specs)
                                 : ergodic_capacity(provisional, dist, specs);
    return CurrentPolicy(s, sol, budget, cons);
}

}  // namespace

void PolicyConstraints::validate() const {
    if (!(r_max > 0.0) || !std::isfinite(r_max))
        throw InvalidParameter("r_max must be finite and strictly positive");
    if (!(avg_power > 0.0) || !std::isfinite(avg_power))
        throw InvalidParameter("avg_power must be finite and strictly positive");
}

QoSParams QoSParams::from_theta(double theta) {
    if (!std::isfinite(theta) || !(theta >= 0.0))
        throw InvalidParameter(
            "theta must be finite and non-negative; for the theta -> infinity "
            "regime use a large finite value");
    return QoSParams{theta, theta / std::numbers::ln2};
}

const char* to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::optimal_qos: return "optimal-qos";
        case PolicyKind::water_filling: return "water-filling";
        case PolicyKind::water_filling_capped: return "water-filling-capped";
        case PolicyKind::channel_inversion: return "channel-inversion";
        case PolicyKind::constant_current: return "constant-current";
        case PolicyKind::cap_everywhere: return "cap-everywhere";
    }
    return "unknown";
}

double CurrentPolicy::xi(double m) const { return shape_xi(shape_, m); }

double peak_xi(double m, const LinkBudget& budget, const PolicyConstraints& cons) {
    if (m == 0.0)
        throw InvalidParameter("peak_xi is undefined at m = 0");
    return peak_xi_at(m, budget.b, cons.r_max);
}

CurrentPolicy optimal_policy(const LinkBudget& budget, const CircuitParams& circ,
                             const MutualInductanceDist& dist,
                             const PolicyConstraints& cons, const QoSParams& qos,
                             const SolverSpecs& specs) {
    cons.validate();
    if (qos.theta == 0.0)
        return water_filling_policy(budget, circ, dist, cons, specs, true);
    if (!(qos.theta > 0.0) || !std::isfinite(qos.theta))
        throw InvalidParameter(
            "optimal_policy requires finite theta >= 0; for theta -> infinity "
            "use a large finite value");

    if (cap_everywhere_power(budget, circ, dist, cons, specs.quadrature) <=
        cons.avg_power * (1.0 + 1e-12))
        return cap_everywhere(budget, circ, dist, cons, specs);

    const double beta = qos.beta;
    const double cap_base = std::exp2(cons.r_max * (beta + 1.0));
    // lambda_hi puts m1 at m_max (zero power); lambda_lo puts m2 at m_min
    // (cap everywhere, maximum power). Power is monotone decreasing between.
    const double lambda_hi = 1.0 / (budget.a + circ.r_tx / (budget.m_max * budget.m_max));
    const double lambda_lo =
        1.0 / (cap_base * (budget.a + circ.r_tx / (budget.m_min * budget.m_min)));

    CurrentPolicy::Shape s = base_shape(PolicyKind::optimal_qos, budget, circ, cons);
    s.beta = beta;
    auto residual = [&](double lambda) {
        CurrentPolicy::Shape trial = s;
        trial.lambda0 = lambda;
        fill_thresholds(trial, cap_base);
        return policy_power(trial, circ, dist, specs.quadrature) - cons.avg_power;
    };
    double lambda0;
    try {
        lambda0 = solve_monotone_root(residual, lambda_lo, lambda_hi, specs.root);
    } catch (const NoRootError& e) {
        throw ConvergenceError(std::string("optimal_policy: lambda0 solve failed: ") +
                                   e.what(),
                               std::numeric_limits<double>::quiet_NaN());
    }
    s.lambda0 = lambda0;
    fill_thresholds(s, cap_base);
    return finish(s, lambda0, budget, circ, dist, cons, specs, qos);
}

CurrentPolicy water_filling_policy(const LinkBudget& budget, const CircuitParams& circ,
                                   const MutualInductanceDist& dist,
                                   const PolicyConstraints& cons,
                                   const SolverSpecs& specs, bool capped) {
    cons.validate();
    if (capped &&
        cap_everywhere_power(budget, circ, dist, cons, specs.quadrature) <=
            cons.avg_power * (1.0 + 1e-12))
        return cap_everywhere(budget, circ, dist, cons, specs);

    const double cap_base = std::exp2(cons.r_max);
    const double lambda_hi = 1.0 / (budget.a + circ.r_tx / (budget.m_max * budget.m_max));
    const double lambda_lo =
        capped ? 1.0 / (cap_base * (budget.a + circ.r_tx / (budget.m_min * budget.m_min)))
               : lambda_hi * 1e-12;  // uncapped power grows without bound as lambda -> 0

    CurrentPolicy::Shape s = base_shape(
        capped ? PolicyKind::water_filling_capped : PolicyKind::water_filling, budget,
        circ, cons);
    auto residual = [&](double lambda) {
        CurrentPolicy::Shape trial = s;
        trial.lambda0 = lambda;
        fill_thresholds(trial, cap_base);
        return policy_power(trial, circ, dist, specs.quadrature) - cons.avg_power;
    };
    double lambda0;
    try {
        lambda0 = solve_monotone_root(residual, lambda_lo, lambda_hi, specs.root);
    } catch (const NoRootError& e) {
        throw ConvergenceError(
            std::string("water_filling_policy: lambda0 solve failed: ") + e.what(),
            std::numeric_limits<double>::quiet_NaN());
    }
    s.lambda0 = lambda0;
    fill_thresholds(s, cap_base);  // m2 reported for the uncapped variant too
    return finish(s, lambda0, budget, circ, dist, cons, specs, std::nullopt);
}

CurrentPolicy channel_inversion_policy(const LinkBudget& budget,
                                       const CircuitParams& circ,
                                       const MutualInductanceDist& dist,
                                       const PolicyConstraints& cons,
                                       const SolverSpecs& specs) {
    cons.validate();
    const double inv_m2 = expect_even(
        dist, [](double m) { return 1.0 / (m * m); }, {}, specs.quadrature);
    CurrentPolicy::Shape s =
        base_shape(PolicyKind::channel_inversion, budget, circ, cons);
    s.k_inv = 2.0 * cons.avg_power / (circ.r_tx * inv_m2 + budget.a);
    // xi m^2 is constant, so the peak clip is all-or-nothing over the support
    return finish(s, std::nullopt, budget, circ, dist, cons, specs, std::nullopt);
}

CurrentPolicy constant_current_policy(const LinkBudget& budget,
                                      const CircuitParams& circ,
                                      const MutualInductanceDist& dist,
                                      const PolicyConstraints& cons,
                                      const SolverSpecs& specs) {
    cons.validate();
    CurrentPolicy::Shape s = base_shape(PolicyKind::constant_current, budget, circ, cons);
    const double peak_floor = peak_xi_at(budget.m_max, budget.b, cons.r_max);
    const double peak_ceiling = peak_xi_at(budget.m_min, budget.b, cons.r_max);
    const double m2_expect = expect_even(
        dist, [](double m) { return m * m; }, {}, specs.quadrature);
    const double xi_free = 2.0 * cons.avg_power / (circ.r_tx + budget.a * m2_expect);

    if (xi_free <= peak_floor) {
        s.xi_const = xi_free;  // no clipping anywhere
    } else if (cap_everywhere_power(budget, circ, dist, cons, specs.quadrature) <=
               cons.avg_power * (1.0 + 1e-12)) {
        s.xi_const = peak_ceiling;  // fully clipped; power stays slack
    } else {
        auto residual = [&](double xi0) {
            CurrentPolicy::Shape trial = s;
            trial.xi_const = xi0;
            // clip threshold: peak_xi(m) == xi0
            trial.m2 = std::sqrt(2.0 * (std::exp2(cons.r_max) - 1.0) / (budget.b * xi0));
            return policy_power(trial, circ, dist, specs.quadrature) - cons.avg_power;
        };
        s.xi_const = solve_monotone_root(residual, 0.0, peak_ceiling, specs.root);
    }
    const double clip_at =
        std::sqrt(2.0 * (std::exp2(cons.r_max) - 1.0) / (budget.b * s.xi_const));
    s.m2 = clip_at < budget.m_max ? clip_at : kInf;
    return finish(s, std::nullopt, budget, circ, dist, cons, specs, std::nullopt);
}

double outage_probability(const CurrentPolicy& policy, const MutualInductanceDist& dist) {
    return outage_mass(dist, policy.solution().m1);
}

double kkt_stationarity_residual(const CurrentPolicy& policy, int n, std::uint64_t seed) {
    const CurrentPolicy::Shape& s = policy.shape();
    if (s.kind == PolicyKind::cap_everywhere) return 0.0;
    if (s.kind != PolicyKind::optimal_qos)
        throw InvalidParameter("stationarity residual is defined for the optimal-qos policy");
    const double lo = std::max(s.m1, s.m_min);
    const double hi = std::min(s.m2, s.m_max);
    if (!(hi > lo)) return 0.0;

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);
        // keep strictly interior so both branch formulas stay out of play
        const double m = lo + (hi - lo) * (0.5 + 0.999998 * (u - 0.5));
        const double gamma = 0.5 * s.b * m * m * policy.xi(m);
        const double lhs =
            s.beta * 0.5 * s.b * m * m * std::pow(1.0 + gamma, -s.beta - 1.0);
        const double rhs = s.lambda0 * s.b * s.beta * 0.5 * (s.r_tx + s.a * m * m);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    return worst;
}

}  // namespace miqos
