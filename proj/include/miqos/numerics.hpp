#pragma once

#include <functional>
#include <initializer_list>
#include <span>

#include "miqos/errors.hpp"

namespace miqos {

enum class QuadMethod {
    adaptive_simpson,
    gauss_legendre,  // fixed composite rule, no error estimate
};

struct QuadratureSpec {
    QuadMethod method = QuadMethod::adaptive_simpson;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 1 << 16;
    int gauss_nodes = 256;  // per segment

    void validate() const;
};

struct RootSpec {
    double abs_tol = 1e-12;  // on the residual |g(x)|
    int max_iters = 200;
    double bracket_expansion = 10.0;

    void validate() const;
};

using RealFn = std::function<double(double)>;

/// Integrates f over [lo, hi] piecewise between consecutive breakpoints.
/// Breakpoints outside (lo, hi) are ignored. Integrand kinks must be passed
/// as breakpoints; integrating an adaptive rule across a kink destroys its
/// error estimate.
double integrate(const RealFn& f, double lo, double hi,
                 std::span<const double> breakpoints,
                 const QuadratureSpec& spec = {});

double integrate(const RealFn& f, double lo, double hi,
                 std::initializer_list<double> breakpoints,
                 const QuadratureSpec& spec = {});

/// Bisection root of a monotone g on [lo, hi]. A bracket without a sign
/// change is expanded geometrically (factor spec.bracket_expansion, up to
/// eight steps per side) before failing with NoRootError. Returns x with
/// |g(x)| <= spec.abs_tol, or the bracket midpoint once the interval width
/// reaches machine resolution.
double solve_monotone_root(const RealFn& g, double lo, double hi,
                           const RootSpec& spec = {});

}  // namespace miqos
