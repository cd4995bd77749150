#pragma once

#include <cstdint>
#include <limits>
#include <optional>

#include "miqos/channel.hpp"
#include "miqos/misalignment.hpp"
#include "miqos/numerics.hpp"

namespace miqos {

struct PolicyConstraints {
    double r_max;      // bits/s/Hz, peak spectral efficiency
    double avg_power;  // W

    void validate() const;
};

/// QoS exponent theta (1/bit) and its base-2 companion beta = theta/ln 2.
struct QoSParams {
    double theta = 0.0;
    double beta = 0.0;

    static QoSParams from_theta(double theta);
};

enum class PolicyKind {
    optimal_qos,
    water_filling,         // no cap branch (diagnostic variant)
    water_filling_capped,
    channel_inversion,
    constant_current,
    cap_everywhere,        // power constraint slack, peak current in every state
};

const char* to_string(PolicyKind kind);

struct PolicySolution {
    PolicyKind kind = PolicyKind::cap_everywhere;
    std::optional<double> lambda0;  // absent for non-Lagrangian kinds
    double m1 = 0.0;                // zero-current cutoff; may sit below m_min
    double m2 = std::numeric_limits<double>::infinity();  // cap threshold
    double power_used = 0.0;
    double outage_probability = 0.0;
    double effective_capacity = 0.0;  // at the policy's theta; ergodic for theta-free kinds
    bool power_constraint_binding = true;
};

struct SolverSpecs {
    QuadratureSpec quadrature;
    RootSpec root;
};

/// Current-control policy xi(M) = I_t^2(M). Immutable once built; evaluation
/// is pure. Outside the support |M| in [m_min, m_max] it evaluates to zero.
class CurrentPolicy {
public:
    // Everything xi() needs, laid out per kind by the factory functions.
    struct Shape {
        PolicyKind kind = PolicyKind::cap_everywhere;
        double a = 0.0, b = 0.0, r_tx = 0.0, r_max = 0.0;
        double m_min = 0.0, m_max = 0.0;
        double lambda0 = 0.0;  // optimal / water-filling kinds
        double beta = 0.0;     // optimal kind
        double m1 = 0.0;
        double m2 = std::numeric_limits<double>::infinity();
        double xi_const = 0.0;  // constant-current level
        double k_inv = 0.0;     // channel inversion: xi * M^2
    };

    CurrentPolicy(Shape shape, PolicySolution solution, LinkBudget budget,
                  PolicyConstraints constraints)
        : shape_(shape), solution_(solution), budget_(budget), constraints_(constraints) {}

    double xi(double m) const;
    double operator()(double m) const { return xi(m); }

    const Shape& shape() const { return shape_; }
    const PolicySolution& solution() const { return solution_; }
    const LinkBudget& budget() const { return budget_; }
    const PolicyConstraints& constraints() const { return constraints_; }

private:
    Shape shape_;
    PolicySolution solution_;
    LinkBudget budget_;
    PolicyConstraints constraints_;
};

/// Largest admissible squared current at M: 2(2^r_max - 1)/(b M^2). The
/// instantaneous rate at this bound is exactly r_max.
double peak_xi(double m, const LinkBudget& budget, const PolicyConstraints& cons);

/// Three-branch KKT optimum for theta > 0: zero below M1, the stationary
/// current between M1 and M2, the peak cap above M2; lambda0 solved so the
/// average-power constraint binds. Falls back to the peak cap everywhere when
/// even that uses less than the power budget. theta == 0 is redirected to the
/// capped water-filling limit.
CurrentPolicy optimal_policy(const LinkBudget& budget, const CircuitParams& circ,
                             const MutualInductanceDist& dist,
                             const PolicyConstraints& cons, const QoSParams& qos,
                             const SolverSpecs& specs);

/// theta -> 0 limit of the optimum. With capped=false the cap branch is
/// dropped (pure water-filling, a diagnostic baseline that may exceed the
/// peak-current bound; its m2 is reported but not enforced).
CurrentPolicy water_filling_policy(const LinkBudget& budget, const CircuitParams& circ,
                                   const MutualInductanceDist& dist,
                                   const PolicyConstraints& cons,
                                   const SolverSpecs& specs, bool capped = true);

/// xi = k/M^2 with k solved for power equality: constant receive SNR.
CurrentPolicy channel_inversion_policy(const LinkBudget& budget,
                                       const CircuitParams& circ,
                                       const MutualInductanceDist& dist,
                                       const PolicyConstraints& cons,
                                       const SolverSpecs& specs);

/// xi = xi0 everywhere, clipped at the peak bound, xi0 solved for power
/// equality.
CurrentPolicy constant_current_policy(const LinkBudget& budget,
                                      const CircuitParams& circ,
                                      const MutualInductanceDist& dist,
                                      const PolicyConstraints& cons,
                                      const SolverSpecs& specs);

/// Probability mass of the zero-rate region {|M| <= m1} within the support.
double outage_probability(const CurrentPolicy& policy, const MutualInductanceDist& dist);

/// Largest relative stationarity residual of an optimal-qos policy, sampled
/// at n uniformly random points strictly inside the middle branch. Zero when
/// the middle branch is empty (cap-everywhere). Other kinds are rejected.
double kkt_stationarity_residual(const CurrentPolicy& policy, int n, std::uint64_t seed);

}  // namespace miqos
