#pragma once

#include <functional>
#include <random>
#include <span>
#include <vector>

#include "miqos/numerics.hpp"

namespace miqos {

/// Probability model of the mutual inductance M = m_max * J under uniformly
/// random coil orientation. The alignment factor J is supported on
/// |J| in [1/sqrt(3), 1]; its density is piecewise with a knee at 1/sqrt(2).
///
/// The printed alignment density is ambiguous about whether it describes the
/// signed J (total mass 1) or |J| (total mass 2). Construction integrates it,
/// picks the closer reading, and rescales so the signed density has unit
/// mass; normalization() reports the constant under the chosen reading and
/// folded_reading() which one was picked.
class MutualInductanceDist {
public:
    explicit MutualInductanceDist(double m_max, int cdf_knots = 4096,
                                  const QuadratureSpec& spec = normalization_spec());

    /// Raw two-branch alignment density, before normalization. Total function.
    static double alignment_pdf_unnormalized(double j);

    /// Quadrature settings tight enough that the normalization constant does
    /// not limit downstream accuracy.
    static QuadratureSpec normalization_spec();

    /// Normalized density of the signed alignment factor.
    double alignment_pdf(double j) const { return scale_ * alignment_pdf_unnormalized(j); }

    /// Density of M (change of variables M = m_max * J).
    double pdf(double m) const { return alignment_pdf(m / m_max_) / m_max_; }

    /// CDF of M via the precomputed monotone table; exact 0 / 0.5 / 1 at
    /// -m_max / 0 / +m_max.
    double cdf(double m) const;

    /// Inverse-CDF draw. The stream is externally owned so parallel callers
    /// can use independent streams.
    double sample(std::mt19937_64& rng) const;

    double m_max() const { return m_max_; }
    double m_min() const { return m_min_; }
    /// |M| where the density's analytic branch changes: m_max/sqrt(2).
    double branch_edge() const;

    double normalization() const { return c_; }
    bool folded_reading() const { return folded_; }

private:
    void build_cdf_table(int knots, const QuadratureSpec& spec);
    double half_cdf(double abs_m) const;     // P(0 <= M <= abs_m)
    double invert_half(double target) const; // half_cdf^-1 on [0, 0.5)

    double m_max_;
    double m_min_;
    double scale_;   // multiplier applied to the raw signed-point density
    double c_;       // constant under the chosen reading (≈1 when Eq. holds)
    bool folded_;
    std::vector<double> knots_;     // |M| grid over [m_min, m_max]
    std::vector<double> half_cdf_;  // cumulative mass of [0, knot], 0 .. 0.5
};

/// E[fn(M)] for an even fn over the symmetric density, as twice the integral
/// over the positive support. Kinks of fn (policy thresholds) should be
/// passed as breakpoints; the density knee is always included.
double expect_even(const MutualInductanceDist& dist,
                   const std::function<double(double)>& fn,
                   std::span<const double> breakpoints,
                   const QuadratureSpec& spec);

}  // namespace miqos
