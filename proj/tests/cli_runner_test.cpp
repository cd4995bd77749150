// Integration tests for the miqos command-line tool. Spawns the real binary:
//   cli_runner_test <path-to-miqos> <path-to-config.json>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

int run(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: cli_runner_test <miqos-binary> <config.json>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::string config = argv[2];
    const fs::path tmp = fs::temp_directory_path() /
                         ("miqos_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(tmp);

    const double m_max = 2.924327229952402e-05;
    const double m_min = m_max / std::sqrt(3.0);

    // --- policy: water-filling curve ---
    {
        const fs::path out = tmp / "wf.csv";
        const int rc = run(cli + " policy --config " + config + " --out " + out.string() +
                           " --theta 1e-6 --kind wf > " + (tmp / "wf.log").string());
        check(rc == 0, "policy wf exits 0 (got " + std::to_string(rc) + ")");
        const auto lines = lines_of(slurp(out));
        check(lines.size() == 1002, "policy csv has 1001 rows + header");
        check(lines[0] == "m_henries,xi_amp2,current_amps,rate_bps_hz,power_watts,pdf",
              "policy csv header");
        bool zeros_outside = true, has_positive = true, has_cutoff_zero = false;
        double max_xi = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto row = parse_row(lines[i]);
            check(row.size() == 6, "policy row has 6 cells");
            const double m = row[0], xi = row[1];
            if (std::abs(m) < m_min * (1.0 - 1e-9) && (xi != 0.0 || row[5] != 0.0))
                zeros_outside = false;
            if (std::abs(m) >= m_min && std::abs(m) <= m_max && xi == 0.0)
                has_cutoff_zero = true;
            max_xi = std::max(max_xi, xi);
            check(std::abs(row[2] - std::sqrt(xi)) <= 1e-12, "current = sqrt(xi)");
        }
        has_positive = max_xi > 0.0;
        check(zeros_outside, "policy csv is zero outside the support");
        check(has_positive, "policy csv has a transmitting region");
        check(has_cutoff_zero, "water-filling shows a cutoff region");
    }

    // --- policy: constant current is flat on the support ---
    {
        const fs::path out = tmp / "cc.csv";
        const int rc = run(cli + " policy --config " + config + " --out " + out.string() +
                           " --kind constant-current > /dev/null");
        check(rc == 0, "policy constant-current exits 0");
        const auto lines = lines_of(slurp(out));
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto row = parse_row(lines[i]);
            if (std::abs(row[0]) >= m_min * 1.001 && std::abs(row[0]) <= m_max * 0.999) {
                lo = std::min(lo, row[1]);
                hi = std::max(hi, row[1]);
            }
        }
        check(hi > 0.0 && (hi - lo) <= 1e-12 * hi, "constant-current xi column is flat");
    }

    // --- sweep: determinism, dominance, monotone columns ---
    {
        const fs::path out1 = tmp / "sweep1.csv", out2 = tmp / "sweep2.csv";
        const int rc1 = run(cli + " sweep --config " + config + " --out " + out1.string() +
                            " --seed 7 > /dev/null");
        const int rc2 = run(cli + " sweep --config " + config + " --out " + out2.string() +
                            " --seed 7 > /dev/null");
        check(rc1 == 0 && rc2 == 0, "sweep exits 0");
        const std::string a = slurp(out1), b = slurp(out2);
        check(!a.empty() && a == b, "sweep output is byte-identical across runs");

        const auto lines = lines_of(a);
        check(lines[0] ==
                  "theta,ec_optimal,ec_wf,ec_wfwc,ec_channel_inversion,ec_constant_current,"
                  "ec_optimal_normalized,ec_wf_normalized,ec_wfwc_normalized,"
                  "ec_channel_inversion_normalized,ec_constant_current_normalized",
              "sweep header");
        check(lines.size() == 21, "sweep has one row per theta");
        std::vector<double> prev;
        double prev_theta = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto row = parse_row(lines[i]);
            check(row.size() == 11, "sweep row has 11 cells");
            check(row[0] > prev_theta, "theta ascends");
            prev_theta = row[0];
            for (int c = 1; c <= 5; ++c) {
                check(row[c] >= 0.0 && row[c] <= 0.5 + 1e-12, "ec within [0, r_max]");
                check(row[1] >= row[c] - 1e-9, "optimal dominates baselines");
                check(row[c + 5] == row[c] / 0.5, "normalized column is ec / r_max");
                if (!prev.empty())
                    check(row[c] <= prev[c] + 1e-12, "ec non-increasing in theta");
            }
            prev = row;
        }
    }

    // --- distribution ---
    {
        const fs::path out = tmp / "dist.csv";
        const fs::path log = tmp / "dist.log";
        const int rc = run(cli + " distribution --config " + config + " --out " +
                           out.string() + " --samples 1000000 --seed 99 > " + log.string());
        check(rc == 0, "distribution exits 0");
        const std::string text = slurp(log);
        const auto cpos = text.find("c=");
        check(cpos != std::string::npos, "distribution prints the normalization constant");
        if (cpos != std::string::npos)
            check(std::abs(std::stod(text.substr(cpos + 2)) - 1.0) < 1e-6,
                  "normalization constant is 1");
        const auto kpos = text.find(") = ");
        check(kpos != std::string::npos, "distribution prints the ks statistic");
        if (kpos != std::string::npos)
            check(std::stod(text.substr(kpos + 4)) < 0.002, "ks statistic below 0.002");

        const auto lines = lines_of(slurp(out));
        check(lines[0] == "m_henries,pdf,cdf,mc_density", "distribution header");
        const auto first = parse_row(lines[1]), last = parse_row(lines.back());
        check(first[2] == 0.0 && last[2] == 1.0, "cdf endpoints are 0 and 1");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto row = parse_row(lines[i]);
            if (std::abs(row[0]) < m_min * (1.0 - 1e-9))
                check(row[1] == 0.0, "pdf vanishes below the support");
        }
    }

    // --- validate on the reference config passes ---
    {
        const fs::path log = tmp / "validate.log";
        const int rc = run(cli + " validate --config " + config + " > " + log.string());
        check(rc == 0, "validate exits 0 on the reference config");
        check(slurp(log).find("all checks passed") != std::string::npos,
              "validate reports success");
    }

    // --- error paths and exit codes ---
    {
        const fs::path bad = tmp / "bad.json";
        {
            std::ofstream o(bad);
            o << slurp(config);
        }
        std::string text = slurp(bad);
        const auto pos = text.find("\"r_tx_ohm\": 20.0");
        text.replace(pos, std::string("\"r_tx_ohm\": 20.0").size(), "\"r_tx_ohm\": -5.0");
        {
            std::ofstream o(bad, std::ios::trunc);
            o << text;
        }
        check(run(cli + " validate --config " + bad.string() + " 2> /dev/null") == 2,
              "negative resistance rejected with exit code 2");

        const fs::path garbled = tmp / "garbled.json";
        {
            std::ofstream o(garbled);
            o << "{ not json";
        }
        check(run(cli + " validate --config " + garbled.string() + " 2> /dev/null") == 2,
              "malformed json rejected with exit code 2");

        check(run(cli + " policy --config " + config + " --out " + (tmp / "x.csv").string() +
                  " --kind bogus 2> /dev/null") == 2,
              "unknown kind rejected with exit code 2");

        check(run(cli + " policy --config " + config +
                  " --out /nonexistent_miqos_dir/x.csv --kind wf 2> /dev/null") == 4,
              "unwritable output path fails with exit code 4");
    }

    std::error_code ec;
    fs::remove_all(tmp, ec);
    if (failures == 0) {
        std::cout << "cli_runner_test: all checks passed\n";
        return 0;
    }
    std::cerr << "cli_runner_test: " << failures << " check(s) failed\n";
    return 1;
}
