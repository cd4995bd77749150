#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "miqos/channel.hpp"
#include "miqos/config.hpp"
#include "miqos/csv.hpp"
#include "miqos/misalignment.hpp"
#include "miqos/policy.hpp"
#include "miqos/qos.hpp"

namespace {

using namespace miqos;

constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitIoFailure = 4;

struct Experiment {
    ExperimentConfig cfg;
    LinkBudget budget;
    MutualInductanceDist dist;
};

Experiment open_experiment(const std::string& path, std::optional<std::uint64_t> seed) {
    ExperimentConfig cfg = ExperimentConfig::load(path);
    if (seed) cfg.rng_seed = *seed;
    LinkBudget budget = derive_link_budget(cfg.geometry, cfg.circuit);
    MutualInductanceDist dist(budget.m_max, cfg.cdf_grid_points);
    return Experiment{std::move(cfg), budget, std::move(dist)};
}

struct KindName {
    const char* flag;   // CLI spelling
    const char* column; // CSV column tag
    PolicyKind kind;
};

constexpr KindName kKinds[] = {
    {"optimal", "optimal", PolicyKind::optimal_qos},
    {"wf", "wf", PolicyKind::water_filling},
    {"wfwc", "wfwc", PolicyKind::water_filling_capped},
    {"channel-inversion", "channel_inversion", PolicyKind::channel_inversion},
    {"constant-current", "constant_current", PolicyKind::constant_current},
};

PolicyKind parse_kind(const std::string& name) {
    for (const auto& k : kKinds)
        if (name == k.flag) return k.kind;
    throw InvalidParameter("unknown policy kind \"" + name +
                           "\"; expected optimal|wf|wfwc|channel-inversion|constant-current");
}

CurrentPolicy build_policy(const Experiment& ex, PolicyKind kind, double theta) {
    const auto& cfg = ex.cfg;
    switch (kind) {
        case PolicyKind::optimal_qos:
            return optimal_policy(ex.budget, cfg.circuit, ex.dist, cfg.constraints,
                                  QoSParams::from_theta(theta), cfg.specs);
        case PolicyKind::water_filling:
            return water_filling_policy(ex.budget, cfg.circuit, ex.dist, cfg.constraints,
                                        cfg.specs, /*capped=*/false);
        case PolicyKind::water_filling_capped:
            return water_filling_policy(ex.budget, cfg.circuit, ex.dist, cfg.constraints,
                                        cfg.specs, /*capped=*/true);
        case PolicyKind::channel_inversion:
            return channel_inversion_policy(ex.budget, cfg.circuit, ex.dist,
                                            cfg.constraints, cfg.specs);
        case PolicyKind::constant_current:
            return constant_current_policy(ex.budget, cfg.circuit, ex.dist,
                                           cfg.constraints, cfg.specs);
        default:
            throw InvalidParameter("policy kind cannot be built directly");
    }
}

int cmd_policy(const Experiment& ex, double theta, const std::string& kind_name,
               const std::string& out_path) {
    const PolicyKind kind = parse_kind(kind_name);
    const CurrentPolicy policy = build_policy(ex, kind, theta);
    const PolicySolution& sol = policy.solution();

    CsvWriter csv(out_path);
    csv.text_row({"m_henries", "xi_amp2", "current_amps", "rate_bps_hz",
                  "power_watts", "pdf"});
    const int n = ex.cfg.m_grid_points;
    const double m_max = ex.budget.m_max;
    for (int i = 0; i < n; ++i) {
        const double m = -m_max + 2.0 * m_max * i / (n - 1);
        const double xi = policy.xi(m);
        const double row[] = {m,
                              xi,
                              std::sqrt(xi),
                              instantaneous_rate(xi, m, ex.budget),
                              transmit_power(xi, m, ex.budget, ex.cfg.circuit),
                              ex.dist.pdf(m)};
        csv.num_row(row);
    }
    csv.close();

    std::cout << "kind=" << to_string(sol.kind);
    if (sol.lambda0) std::cout << " lambda0=" << format_double(*sol.lambda0);
    std::cout << " m1=" << format_double(sol.m1) << " m2=" << format_double(sol.m2)
              << " power_w=" << format_double(sol.power_used)
              << " outage=" << format_double(sol.outage_probability)
              << " ec_bps_hz=" << format_double(sol.effective_capacity) << "\n";
    return kExitOk;
}

std::vector<KindName> parse_policy_list(const std::string& list) {
    std::vector<std::string> names;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) names.push_back(item);
    }
    if (names.empty()) throw InvalidParameter("--policies list is empty");
    std::vector<KindName> selected;
    for (const auto& k : kKinds) {  // canonical column order regardless of input order
        if (std::find(names.begin(), names.end(), k.flag) != names.end())
            selected.push_back(k);
    }
    for (const auto& n : names)
        parse_kind(n);  // reject unknown names
    return selected;
}

int cmd_sweep(const Experiment& ex, const std::string& policies,
              const std::string& out_path) {
    const std::vector<KindName> selected = parse_policy_list(policies);
    const auto& cfg = ex.cfg;

    std::vector<std::optional<CurrentPolicy>> baselines(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i)
        if (selected[i].kind != PolicyKind::optimal_qos)
            baselines[i] = build_policy(ex, selected[i].kind, 0.0);

    CsvWriter csv(out_path);
    std::vector<std::string> header{"theta"};
    for (const auto& k : selected) header.push_back(std::string("ec_") + k.column);
    for (const auto& k : selected)
        header.push_back(std::string("ec_") + k.column + "_normalized");
    {
        std::vector<std::string_view> views(header.begin(), header.end());
        std::string line;
        for (std::size_t i = 0; i < views.size(); ++i) {
            if (i) line += ',';
            line += views[i];
        }
        csv.text_row({line});
    }

    for (double theta : cfg.theta_grid) {
        const QoSParams qos = QoSParams::from_theta(theta);
        std::vector<double> row{theta};
        for (std::size_t i = 0; i < selected.size(); ++i) {
            double ec;
            if (selected[i].kind == PolicyKind::optimal_qos)
                ec = build_policy(ex, PolicyKind::optimal_qos, theta)
                         .solution()
                         .effective_capacity;
            else
                ec = effective_capacity(*baselines[i], ex.dist, qos, cfg.specs);
            row.push_back(ec);
        }
        for (std::size_t i = 1; i <= selected.size(); ++i)
            row.push_back(row[i] / cfg.constraints.r_max);
        csv.num_row(row);
    }
    csv.close();
    return kExitOk;
}

int cmd_distribution(const Experiment& ex, std::int64_t samples,
                     const std::string& out_path) {
    if (samples < 1) throw InvalidParameter("--samples must be >= 1");
    const auto& dist = ex.dist;
    const int n = ex.cfg.m_grid_points;
    const double m_max = dist.m_max();
    const double cell = 2.0 * m_max / (n - 1);

    std::mt19937_64 rng(ex.cfg.rng_seed);
    std::vector<double> draws(static_cast<std::size_t>(samples));
    for (auto& d : draws) d = dist.sample(rng);

    std::vector<std::int64_t> counts(n, 0);
    for (double d : draws) {
        int idx = static_cast<int>(std::lround((d + m_max) / cell));
        counts[std::clamp(idx, 0, n - 1)]++;
    }

    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double f = dist.cdf(draws[i]);
        const double lo = static_cast<double>(i) / draws.size();
        const double hi = static_cast<double>(i + 1) / draws.size();
        ks = std::max({ks, std::abs(f - lo), std::abs(f - hi)});
    }

    CsvWriter csv(out_path);
    csv.text_row({"m_henries", "pdf", "cdf", "mc_density"});
    for (int i = 0; i < n; ++i) {
        const double m = -m_max + cell * i;
        const double row[] = {m, dist.pdf(m), dist.cdf(m),
                              counts[i] / (cell * samples)};
        csv.num_row(row);
    }
    csv.close();

    std::cout << "normalization constant c=" << format_double(dist.normalization())
              << " (" << (dist.folded_reading() ? "folded" : "two-sided")
              << " reading)\n"
              << "ks statistic (n=" << samples << ") = " << format_double(ks) << "\n";
    return kExitOk;
}

struct CheckReport {
    bool all_ok = true;

    void line(bool ok, const std::string& name, const std::string& detail) {
        all_ok = all_ok && ok;
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << ": " << detail << "\n";
    }
};

int cmd_validate(const Experiment& ex) {
    const auto& cfg = ex.cfg;
    const auto& dist = ex.dist;
    const auto& budget = ex.budget;
    CheckReport report;
    std::ostringstream detail;

    const double c = dist.normalization();
    report.line(std::abs(c - 1.0) < 0.1, "pdf-normalization",
                "c=" + format_double(c) + " (" +
                    (dist.folded_reading() ? "folded" : "two-sided") + " reading)");

    {
        const std::size_t n = 2'000'001;
        const double lo = dist.m_min(), hi = dist.m_max();
        const double h = (hi - lo) / (n - 1);
        double acc = 0.5 * (dist.pdf(lo) + dist.pdf(hi));
        for (std::size_t i = 1; i + 1 < n; ++i) acc += dist.pdf(lo + h * i);
        const double mass = 2.0 * acc * h;
        report.line(std::abs(mass - 1.0) <= 1e-6, "pdf-mass",
                    "independent trapezoid mass=" + format_double(mass));
    }

    report.line(dist.cdf(-budget.m_max) == 0.0 && dist.cdf(budget.m_max) == 1.0 &&
                    dist.cdf(0.0) == 0.5,
                "cdf-endpoints", "cdf(-m_max)=0 cdf(0)=0.5 cdf(m_max)=1");

    std::mt19937_64 rng(cfg.rng_seed);
    auto uniform = [&rng](double lo, double hi) {
        return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
    };

    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double m = uniform(budget.m_min, budget.m_max);
            const double rate =
                instantaneous_rate(peak_xi(m, budget, cfg.constraints), m, budget);
            worst = std::max(worst, std::abs(rate - cfg.constraints.r_max) /
                                        cfg.constraints.r_max);
        }
        report.line(worst <= 1e-12, "peak-rate-identity",
                    "max rel err=" + format_double(worst));
    }

    {
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double m = uniform(budget.m_min, budget.m_max);
            const double xi = uniform(0.0, 10.0);
            const double slope = transmit_power(xi + 1.0, m, budget, cfg.circuit) -
                                 transmit_power(xi, m, budget, cfg.circuit);
            const double expected = 0.5 * (cfg.circuit.r_tx + budget.a * m * m);
            worst = std::max(worst, std::abs(slope - expected) / expected);
        }
        report.line(worst <= 1e-10, "power-affinity",
                    "max rel err=" + format_double(worst));
    }

    std::vector<CurrentPolicy> baselines;
    baselines.push_back(build_policy(ex, PolicyKind::water_filling, 0.0));
    baselines.push_back(build_policy(ex, PolicyKind::water_filling_capped, 0.0));
    baselines.push_back(build_policy(ex, PolicyKind::channel_inversion, 0.0));
    baselines.push_back(build_policy(ex, PolicyKind::constant_current, 0.0));
    for (const auto& pol : baselines) {
        const PolicySolution& sol = pol.solution();
        if (sol.power_constraint_binding) {
            const double rel =
                std::abs(sol.power_used - cfg.constraints.avg_power) /
                cfg.constraints.avg_power;
            report.line(rel <= 1e-6, std::string("power-equality[") +
                                         to_string(sol.kind) + "]",
                        "rel residual=" + format_double(rel));
        } else {
            report.line(true, std::string("power-slack[") + to_string(sol.kind) + "]",
                        "power_used=" + format_double(sol.power_used) + " W");
        }
    }

    for (double theta : cfg.theta_grid) {
        const QoSParams qos = QoSParams::from_theta(theta);
        const CurrentPolicy opt = build_policy(ex, PolicyKind::optimal_qos, theta);
        const PolicySolution& sol = opt.solution();
        const std::string name = "optimal[theta=" + format_double(theta) + "]";
        if (sol.kind == PolicyKind::cap_everywhere) {
            report.line(true, name,
                        "cap-everywhere regime (power slack, power_used=" +
                            format_double(sol.power_used) + " W)");
            continue;
        }
        bool ok = true;
        detail.str("");
        const double power_rel = std::abs(sol.power_used - cfg.constraints.avg_power) /
                                 cfg.constraints.avg_power;
        ok = ok && power_rel <= 1e-6;
        detail << "power_rel=" << format_double(power_rel);

        const double kkt = kkt_stationarity_residual(opt, 100, cfg.rng_seed);
        ok = ok && kkt <= 1e-9;
        detail << " kkt=" << format_double(kkt);

        for (double edge : {sol.m1, sol.m2}) {
            if (edge > budget.m_min && edge < budget.m_max) {
                const double jump = std::abs(opt.xi(edge * (1.0 + 1e-10)) -
                                             opt.xi(edge * (1.0 - 1e-10)));
                const double scale = peak_xi(edge, budget, cfg.constraints);
                ok = ok && jump <= 1e-9 * scale;
            }
        }
        detail << " continuity-ok";

        const double ec = sol.effective_capacity;
        ok = ok && ec >= -1e-12 && ec <= cfg.constraints.r_max * (1.0 + 1e-12);
        detail << " ec=" << format_double(ec);

        for (const auto& base : baselines) {
            const double ec_base = effective_capacity(base, dist, qos, cfg.specs);
            ok = ok && ec >= ec_base - 1e-9;
        }
        detail << " dominance-checked";
        report.line(ok, name, detail.str());
    }

    std::cout << (report.all_ok ? "validate: all checks passed\n"
                                : "validate: CHECKS FAILED\n");
    return report.all_ok ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QoS-aware transmit-current control for underwater magnetic-induction links"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    double theta = 0.01;
    std::string kind = "optimal";
    std::string policies = "optimal,wf,wfwc,channel-inversion,constant-current";
    std::int64_t samples = 1'000'000;

    auto* p_policy =
        app.add_subcommand("policy", "write one policy curve over the signed M grid");
    auto* p_sweep =
        app.add_subcommand("sweep", "write effective capacity vs theta for several policies");
    auto* p_dist = app.add_subcommand(
        "distribution", "write the mutual-inductance pdf/cdf table and a Monte Carlo histogram");
    auto* p_validate =
        app.add_subcommand("validate", "run self-checks and report pass/fail");

    for (auto* sub : {p_policy, p_sweep, p_dist, p_validate}) {
        sub->add_option("--config", config_path, "JSON experiment description")->required();
        sub->add_option("--seed", seed, "override the config rng seed");
    }
    for (auto* sub : {p_policy, p_sweep, p_dist})
        sub->add_option("--out", out_path, "output CSV path")->required();
    p_policy->add_option("--theta", theta, "QoS exponent (used by --kind optimal)");
    p_policy->add_option("--kind", kind,
                         "optimal|wf|wfwc|channel-inversion|constant-current");
    p_sweep->add_option("--policies", policies, "comma list of curves to include");
    p_dist->add_option("--samples", samples, "Monte Carlo sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadConfig;
    }

    try {
        std::optional<std::uint64_t> seed_override;
        for (auto* sub : {p_policy, p_sweep, p_dist, p_validate})
            if (sub->parsed() && sub->count("--seed")) seed_override = seed;

        const Experiment ex = open_experiment(config_path, seed_override);
        if (p_policy->parsed()) return cmd_policy(ex, theta, kind, out_path);
        if (p_sweep->parsed()) return cmd_sweep(ex, policies, out_path);
        if (p_dist->parsed()) return cmd_distribution(ex, samples, out_path);
        return cmd_validate(ex);
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const NoRootError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIoFailure;
    }
}
