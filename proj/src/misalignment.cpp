#include "miqos/misalignment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace miqos {

namespace {

constexpr double kInvSqrt3 = 0.5773502691896257645;
constexpr double kInvSqrt2 = 0.7071067811865475244;

}  // namespace

double MutualInductanceDist::alignment_pdf_unnormalized(double j) {
    const double aj = std::abs(j);
    if (!(aj >= kInvSqrt3) || aj > 1.0) return 0.0;
    if (aj < kInvSqrt2) {
        // the argument drifts past 1 by rounding near the branch edge
        const double arg = std::min(1.0, aj / std::sqrt(1.0 - j * j));
        return 1.5 * (1.0 - (4.0 / std::numbers::pi) * std::acos(arg));
    }
    return 1.5;
}

QuadratureSpec MutualInductanceDist::normalization_spec() {
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-12;
    spec.max_subdivisions = 1 << 20;
    return spec;
}

MutualInductanceDist::MutualInductanceDist(double m_max, int cdf_knots,
                                           const QuadratureSpec& spec)
    : m_max_(m_max), m_min_(m_max / std::sqrt(3.0)) {
    if (!(m_max > 0.0) || !std::isfinite(m_max))
        throw InvalidParameter("m_max must be finite and strictly positive");
    if (cdf_knots < 8)
        throw InvalidParameter("cdf table needs at least 8 knots");

    const double mass =
        2.0 * integrate([](double j) { return alignment_pdf_unnormalized(j); },
                        kInvSqrt3, 1.0, {kInvSqrt2}, spec);
    folded_ = std::abs(mass - 2.0) < std::abs(mass - 1.0);
    scale_ = 1.0 / mass;
    c_ = folded_ ? 2.0 / mass : 1.0 / mass;
    build_cdf_table(cdf_knots, spec);
}

double MutualInductanceDist::branch_edge() const { return m_max_ * kInvSqrt2; }

void MutualInductanceDist::build_cdf_table(int knots, const QuadratureSpec& spec) {
    knots_.resize(knots);
    for (int i = 0; i < knots; ++i)
        knots_[i] = m_min_ + (m_max_ - m_min_) * i / (knots - 1);
    const double edge = branch_edge();
    auto pos = std::lower_bound(knots_.begin(), knots_.end(), edge);
    if (pos != knots_.end() && *pos != edge) knots_.insert(pos, edge);

    QuadratureSpec cell_spec = spec;
    cell_spec.method = QuadMethod::gauss_legendre;
    cell_spec.gauss_nodes = 16;

    half_cdf_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i)
        half_cdf_[i] = half_cdf_[i - 1] +
                       integrate([this](double m) { return pdf(m); },
                                 knots_[i - 1], knots_[i], {}, cell_spec);
    // pin the endpoints so cdf(+-m_max) is exact
    const double factor = 0.5 / half_cdf_.back();
    for (double& h : half_cdf_) h *= factor;
}

double MutualInductanceDist::half_cdf(double abs_m) const {
    if (abs_m <= m_min_) return 0.0;
    if (abs_m >= m_max_) return 0.5;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), abs_m);
    const std::size_t i = it - knots_.begin();  // knots_[i-1] <= abs_m < knots_[i]
    const double x0 = knots_[i - 1], x1 = knots_[i];
    const double h0 = half_cdf_[i - 1], h1 = half_cdf_[i];
    return h0 + (h1 - h0) * (abs_m - x0) / (x1 - x0);
}

double MutualInductanceDist::cdf(double m) const {
    if (m <= -m_max_) return 0.0;
    if (m >= m_max_) return 1.0;
    const double h = half_cdf(std::abs(m));
    return m >= 0.0 ? 0.5 + h : 0.5 - h;
}

double MutualInductanceDist::invert_half(double target) const {
    const auto it = std::upper_bound(half_cdf_.begin(), half_cdf_.end(), target);
    if (it == half_cdf_.begin()) return knots_.front();
    if (it == half_cdf_.end()) return knots_.back();
    const std::size_t i = it - half_cdf_.begin();
    const double h0 = half_cdf_[i - 1], h1 = half_cdf_[i];
    if (h1 <= h0) return knots_[i];
    return knots_[i - 1] + (knots_[i] - knots_[i - 1]) * (target - h0) / (h1 - h0);
}

double MutualInductanceDist::sample(std::mt19937_64& rng) const {
    const double u = std::ldexp(static_cast<double>(rng() >> 11), -53);  // [0, 1)
    const bool negative = u < 0.5;
    const double t = negative ? 0.5 - u : u - 0.5;  // [0, 0.5)
    const double x = invert_half(t);
    return negative ? -x : x;
}

double expect_even(const MutualInductanceDist& dist,
                   const std::function<double(double)>& fn,
                   std::span<const double> breakpoints,
                   const QuadratureSpec& spec) {
    std::vector<double> edges(breakpoints.begin(), breakpoints.end());
    edges.push_back(dist.branch_edge());
    return 2.0 * integrate([&](double m) { return fn(m) * dist.pdf(m); },
                           dist.m_min(), dist.m_max(), edges, spec);
}

}  // namespace miqos
