#include "miqos/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace miqos {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw InvalidParameter("quadrature tolerances must be positive");
    if (max_subdivisions < 2)
        throw InvalidParameter("quadrature max_subdivisions must be >= 2");
    if (gauss_nodes < 2)
        throw InvalidParameter("quadrature gauss_nodes must be >= 2");
}

void RootSpec::validate() const {
    if (!(abs_tol > 0.0))
        throw InvalidParameter("root abs_tol must be positive");
    if (max_iters < 1)
        throw InvalidParameter("root max_iters must be >= 1");
    if (!(bracket_expansion > 1.0))
        throw InvalidParameter("root bracket_expansion must exceed 1");
}

namespace {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Legendre roots by Newton iteration; rules are cached per node count.
const GaussRule& gauss_rule(int n) {
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::scoped_lock lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
            }
            deriv = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] =
            2.0 / ((1.0 - z * z) * deriv * deriv);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// Recursive adaptive Simpson with Richardson extrapolation. The subdivision
// budget is shared across the whole call; running out marks the result
// non-converged instead of recursing further.
struct AdaptiveSimpson {
    const RealFn& f;
    double rel_tol;
    long long budget;
    bool exhausted = false;

    double segment(double a, double b, double abs_tol) {
        const double m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return refine(a, b, fa, fm, fb, whole, abs_tol, 64);
    }

    double refine(double a, double b, double fa, double fm, double fb,
                  double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double s2 = left + right;
        const double err = (s2 - whole) / 15.0;
        const bool ok = std::abs(err) <= std::max(tol, rel_tol * std::abs(s2));
        if (ok || depth == 0 || budget <= 0) {
            if (!ok) exhausted = true;
            return s2 + err;
        }
        budget -= 2;
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

double integrate(const RealFn& f, double lo, double hi,
                 std::span<const double> breakpoints,
                 const QuadratureSpec& spec) {
    spec.validate();
    if (!(lo <= hi)) throw InvalidParameter("integrate: lo must not exceed hi");
    if (lo == hi) return 0.0;

    std::vector<double> edges;
    edges.push_back(lo);
    for (double p : breakpoints)
        if (std::isfinite(p) && p > lo && p < hi) edges.push_back(p);
    edges.push_back(hi);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    if (spec.method == QuadMethod::gauss_legendre) {
        const GaussRule& rule = gauss_rule(spec.gauss_nodes);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const double c = 0.5 * (edges[i] + edges[i + 1]);
            const double h = 0.5 * (edges[i + 1] - edges[i]);
            double acc = 0.0;
            for (std::size_t k = 0; k < rule.nodes.size(); ++k)
                acc += rule.weights[k] * f(c + h * rule.nodes[k]);
            sum += acc * h;
        }
        return sum;
    }

    AdaptiveSimpson worker{f, spec.rel_tol, spec.max_subdivisions};
    const double total = hi - lo;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double w = edges[i + 1] - edges[i];
        sum += worker.segment(edges[i], edges[i + 1], spec.abs_tol * w / total);
    }
    if (worker.exhausted)
        throw ConvergenceError(
            "integrate: subdivision budget exhausted before tolerance", sum);
    return sum;
}

double integrate(const RealFn& f, double lo, double hi,
                 std::initializer_list<double> breakpoints,
                 const QuadratureSpec& spec) {
    return integrate(f, lo, hi,
                     std::span<const double>(breakpoints.begin(), breakpoints.size()),
                     spec);
}

double solve_monotone_root(const RealFn& g, double lo, double hi,
                           const RootSpec& spec) {
    spec.validate();
    if (!(lo <= hi))
        throw InvalidParameter("solve_monotone_root: lo must not exceed hi");

    double glo = g(lo), ghi = g(hi);
    if (std::abs(glo) <= spec.abs_tol) return lo;
    if (std::abs(ghi) <= spec.abs_tol) return hi;

    const auto opposite = [](double x, double y) { return (x < 0.0) != (y < 0.0); };

    if (!opposite(glo, ghi)) {
        const double w = hi > lo ? hi - lo : std::max(1.0, std::abs(lo));
        bool found = false;
        for (int k = 1; k <= 8 && !found; ++k) {
            const double cand = hi + w * std::pow(spec.bracket_expansion, k);
            const double gc = g(cand);
            if (opposite(ghi, gc)) {
                lo = hi;
                glo = ghi;
                hi = cand;
                ghi = gc;
                found = true;
            }
        }
        for (int k = 1; k <= 8 && !found; ++k) {
            const double cand = lo - w * std::pow(spec.bracket_expansion, k);
            const double gc = g(cand);
            if (opposite(glo, gc)) {
                hi = lo;
                ghi = glo;
                lo = cand;
                glo = gc;
                found = true;
            }
        }
        if (!found)
            throw NoRootError(
                "solve_monotone_root: no sign change within expanded bracket");
    }

    for (int it = 0; it < spec.max_iters; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval at machine resolution
        const double gm = g(mid);
        if (std::abs(gm) <= spec.abs_tol) return mid;
        if (opposite(glo, gm)) {
            hi = mid;
            ghi = gm;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace miqos
