#include <cmath>
#include <vector>

#include "doctest.h"
#include "miqos/numerics.hpp"

using namespace miqos;

TEST_CASE("integrate: constants and polynomials") {
    CHECK(integrate([](double) { return 1.0; }, 0.0, 1.0, {}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, {}) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return x; }, 2.0, 2.0, {}) == 0.0);
}

TEST_CASE("integrate: breakpoint-aware piecewise integration") {
    // |x - 0.3| has a kink; with the breakpoint each side is a polynomial
    const double exact = 0.5 * (0.09 + 0.49);
    const double got = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {0.3});
    CHECK(got == doctest::Approx(exact).epsilon(1e-12));

    // breakpoints outside the interval are ignored
    const double got2 =
        integrate([](double x) { return x; }, 0.0, 1.0, {-5.0, 0.5, 7.0});
    CHECK(got2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrate: fixed Gauss-Legendre rule is exact to its degree") {
    QuadratureSpec spec;
    spec.method = QuadMethod::gauss_legendre;
    spec.gauss_nodes = 3;  // exact through degree 5
    const double got = integrate([](double x) { return x * x * x * x * x; }, 0.0, 1.0, {}, spec);
    CHECK(got == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

    spec.gauss_nodes = 48;
    const double smooth = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, {}, spec);
    CHECK(smooth == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("integrate: exhausting the subdivision budget reports the estimate") {
    QuadratureSpec spec;
    spec.abs_tol = 1e-15;
    spec.rel_tol = 1e-15;
    spec.max_subdivisions = 8;
    bool threw = false;
    try {
        integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {}, spec);
    } catch (const ConvergenceError& e) {
        threw = true;
        CHECK(e.best_estimate == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
    }
    CHECK(threw);
}

TEST_CASE("integrate: rejects inverted intervals and bad specs") {
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0, {}), InvalidParameter);
    QuadratureSpec bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, {}, bad), InvalidParameter);
}

TEST_CASE("solve_monotone_root: linear and cubic") {
    CHECK(solve_monotone_root([](double x) { return x - 2.0; }, 0.0, 10.0) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(solve_monotone_root([](double x) { return x * x * x - 8.0; }, 0.0, 10.0) ==
          doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("solve_monotone_root: stays inside the bracket and tightens the residual") {
    std::vector<double> evals;
    auto g = [&](double x) {
        evals.push_back(x);
        return std::atan(x) - 0.7;
    };
    const double root = solve_monotone_root(g, -4.0, 9.0);
    CHECK(root == doctest::Approx(std::tan(0.7)).epsilon(1e-12));
    for (double x : evals) {
        CHECK(x >= -4.0);
        CHECK(x <= 9.0);
    }
    CHECK(std::abs(std::atan(root) - 0.7) <= std::abs(std::atan(-4.0) - 0.7));
    CHECK(std::abs(std::atan(root) - 0.7) <= std::abs(std::atan(9.0) - 0.7));
}

TEST_CASE("solve_monotone_root: geometric bracket expansion") {
    // root far above the initial bracket
    const double r1 = solve_monotone_root([](double x) { return x - 50.0; }, 0.0, 1.0);
    CHECK(r1 == doctest::Approx(50.0).epsilon(1e-10));
    // root far below
    const double r2 = solve_monotone_root([](double x) { return x + 50.0; }, 0.0, 1.0);
    CHECK(r2 == doctest::Approx(-50.0).epsilon(1e-10));
}

TEST_CASE("solve_monotone_root: no sign change raises NoRootError") {
    CHECK_THROWS_AS(solve_monotone_root([](double x) { return std::exp(x); }, -1.0, 1.0),
                    NoRootError);
}
