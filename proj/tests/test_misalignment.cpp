#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "miqos/channel.hpp"
#include "miqos/misalignment.hpp"
#include "reference_link.hpp"

using namespace miqos;

namespace {

const double kSqrt3Inv = 1.0 / std::sqrt(3.0);
const double kSqrt2Inv = 1.0 / std::sqrt(2.0);

MutualInductanceDist reference_dist() {
    const LinkBudget b = derive_link_budget(ref_link::geometry(), ref_link::circuit());
    return MutualInductanceDist(b.m_max);
}

}  // namespace

TEST_CASE("alignment density branches") {
    const MutualInductanceDist dist = reference_dist();
    CHECK(dist.alignment_pdf(0.9) ==
          doctest::Approx(1.5 * dist.normalization()).epsilon(1e-12));
    CHECK(dist.alignment_pdf(0.2) == 0.0);
    CHECK(dist.alignment_pdf(-0.95) == dist.alignment_pdf(0.95));
    CHECK(std::abs(dist.alignment_pdf(kSqrt3Inv)) < 1e-12);  // lower edge vanishes
}

TEST_CASE("alignment density is continuous across its branch edges") {
    const double below = MutualInductanceDist::alignment_pdf_unnormalized(
        kSqrt2Inv * (1.0 - 1e-12));
    const double above = MutualInductanceDist::alignment_pdf_unnormalized(
        kSqrt2Inv * (1.0 + 1e-12));
    CHECK(std::abs(below - above) < 1e-4);  // sqrt-type approach to 3/2
    CHECK(above == doctest::Approx(1.5).epsilon(1e-15));
    const double near_lower = MutualInductanceDist::alignment_pdf_unnormalized(
        kSqrt3Inv * (1.0 + 1e-12));
    CHECK(std::abs(near_lower) < 1e-10);
}

TEST_CASE("normalization constant is 1 under the two-sided reading") {
    const MutualInductanceDist dist = reference_dist();
    CHECK_FALSE(dist.folded_reading());
    CHECK(std::abs(dist.normalization() - 1.0) < 1e-6);
}

TEST_CASE("pdf is the alignment density pushed through M = m_max J") {
    const MutualInductanceDist dist = reference_dist();
    const double m_max = dist.m_max();
    CHECK(dist.pdf(0.9 * m_max) ==
          doctest::Approx(1.5 * dist.normalization() / m_max).epsilon(1e-12));
    CHECK(dist.pdf(0.0) == 0.0);
    CHECK(dist.pdf(1.001 * m_max) == 0.0);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double m = std::ldexp(static_cast<double>(rng() >> 11), -53) * m_max;
        CHECK(dist.pdf(m) == dist.pdf(-m));
    }
}

TEST_CASE("pdf integrates to 1 against an independent Riemann sum") {
    const MutualInductanceDist dist = reference_dist();
    const std::size_t n = 10'000'001;
    const double lo = dist.m_min(), hi = dist.m_max();
    const double h = (hi - lo) / (n - 1);
    double acc = 0.5 * (dist.pdf(lo) + dist.pdf(hi));
    for (std::size_t i = 1; i + 1 < n; ++i) acc += dist.pdf(lo + h * i);
    const double mass = 2.0 * acc * h;
    CHECK(std::abs(mass - 1.0) < 1e-6);
}

TEST_CASE("cdf endpoints, symmetry point, and monotonicity") {
    const MutualInductanceDist dist = reference_dist();
    CHECK(dist.cdf(-dist.m_max()) == 0.0);
    CHECK(dist.cdf(dist.m_max()) == 1.0);
    CHECK(dist.cdf(0.0) == 0.5);
    CHECK(dist.cdf(-dist.m_min()) == 0.5);  // no mass inside (-m_min, m_min)

    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double m = -dist.m_max() + 2.0 * dist.m_max() * i / 1000.0;
        const double f = dist.cdf(m);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("cdf at the branch edge matches a Riemann oracle") {
    const MutualInductanceDist dist = reference_dist();
    const double edge = dist.branch_edge();
    CHECK(dist.cdf(edge) == doctest::Approx(0.5606601717798212).epsilon(1e-7));

    const std::size_t n = 1'000'001;
    const double lo = dist.m_min();
    const double h = (edge - lo) / (n - 1);
    double acc = 0.5 * (dist.pdf(lo) + dist.pdf(edge));
    for (std::size_t i = 1; i + 1 < n; ++i) acc += dist.pdf(lo + h * i);
    CHECK(dist.cdf(edge) == doctest::Approx(0.5 + acc * h).epsilon(1e-6));
}

TEST_CASE("sampler agrees with the cdf") {
    const MutualInductanceDist dist = reference_dist();
    const std::size_t n = 1'000'000;
    std::mt19937_64 rng(42);
    std::vector<double> draws(n);
    double mean = 0.0;
    for (auto& d : draws) {
        d = dist.sample(rng);
        mean += d;
        CHECK(std::abs(d) >= dist.m_min());
        CHECK(std::abs(d) <= dist.m_max());
    }
    mean /= n;
    // zero-mean by symmetry; sigma^2 = E[M^2]
    const double sigma = std::sqrt(5.993759024391754e-10);
    CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));

    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = dist.cdf(draws[i]);
        ks = std::max({ks, std::abs(f - static_cast<double>(i) / n),
                       std::abs(f - static_cast<double>(i + 1) / n)});
    }
    CHECK(ks < 0.002);
}

TEST_CASE("expect_even reproduces closed-form moments") {
    const MutualInductanceDist dist = reference_dist();
    QuadratureSpec spec;
    const double one = expect_even(dist, [](double) { return 1.0; }, {}, spec);
    CHECK(one == doctest::Approx(1.0).epsilon(1e-9));
    const double m2 = expect_even(dist, [](double m) { return m * m; }, {}, spec);
    CHECK(m2 == doctest::Approx(5.993759024391754e-10).epsilon(1e-8));
}

TEST_CASE("construction rejects bad arguments") {
    CHECK_THROWS_AS(MutualInductanceDist(0.0), InvalidParameter);
    CHECK_THROWS_AS(MutualInductanceDist(-1e-5), InvalidParameter);
    CHECK_THROWS_AS(MutualInductanceDist(1e-5, 2), InvalidParameter);
}
