#pragma once

/**
 * @file theta.hpp
 * @brief The class Theta of distributions on R x Z(2) and the pi-group of invertible Z(2) factors.
 *
 * A parameter set (sigma, sigma', m, m', kappa) stands for the signed measure with
 * characteristic function
 *
 *     phi(s, 0) = exp(-sigma s^2 + i m s),   phi(s, 1) = kappa exp(-sigma' s^2 + i m' s).
 *
 * It is a distribution exactly when 0 < sigma' < sigma and 0 < |kappa| <= rho, with
 * rho = sqrt(sigma'/sigma) exp(-(m - m')^2 / (4 (sigma - sigma'))), or in the
 * degenerate case sigma = sigma', m = m', |kappa| <= 1.
 */

#include "lca/measures.hpp"

namespace lca {

/// Relative width of the band around |kappa| = rho (or 1) reported as Boundary.
inline constexpr double kThetaGraceBand = 1e-12;

struct ThetaParams {
    double sigma = 0.0;
    double sigma_p = 0.0;
    double m = 0.0;
    double m_p = 0.0;
    double kappa = 1.0;

    friend bool operator==(const ThetaParams&, const ThetaParams&) = default;
};

enum class ThetaVerdict { In, Out, Boundary };

struct ThetaMembership {
    ThetaVerdict verdict = ThetaVerdict::Out;
    /// The admissible bound on |kappa| (rho, or 1 in the degenerate case); 0 when none applies.
    double bound = 0.0;
    const char* reason = "";

    bool in() const { return verdict != ThetaVerdict::Out; }
};

ThetaMembership theta_membership(const ThetaParams& p);
inline bool is_in_theta(const ThetaParams& p) { return theta_membership(p).in(); }

/// 0 < sigma' < sigma.
inline bool is_strict_theta_shape(const ThetaParams& p) { return 0.0 < p.sigma_p && p.sigma_p < p.sigma; }

/// rho = two_term_bound(sigma, m, sigma', m'); needs 0 < sigma' < sigma.
double rho_extremal(const ThetaParams& p);

/// The trivial-G ambient group R x Z(2).
AmbientGroup real_z2_group();

/// 1/2 (gamma + kappa gamma') (x) E_0 + 1/2 (gamma - kappa gamma') (x) E_p, placed at g = 0.
AtomicSignedMeasure theta_to_measure(const ThetaParams& p, const AmbientGroup& group = real_z2_group());

/// Inverse of theta_to_measure; the measure must sit on g = 0 with one exponential per parity.
ThetaParams measure_to_theta(const AtomicSignedMeasure& mu);

/// theta_to_measure with kappa = 1; needs 0 < sigma' < sigma.
AtomicSignedMeasure lambda_signed(double sigma, double m, double sigma_p, double m_p,
                                  const AmbientGroup& group = real_z2_group());

/// Closed-form characteristic function of the Theta measure.
Complex theta_char(const ThetaParams& p, double s, int n);

/// pi = ((1 + c)/2) E_0 + ((1 - c)/2) E_p, c != 0.
class PiMeasure {
public:
    explicit PiMeasure(double c);

    static PiMeasure identity() { return PiMeasure(1.0); }

    double c() const { return c_; }
    PiMeasure inverse() const { return PiMeasure(1.0 / c_); }
    PiMeasure compose(const PiMeasure& other) const { return PiMeasure(c_ * other.c_); }
    bool is_distribution() const { return std::abs(c_) <= 1.0; }

    AtomicSignedMeasure to_measure(const AmbientGroup& group = real_z2_group()) const;

private:
    double c_;
};

inline PiMeasure pi_invert(const PiMeasure& pi) { return pi.inverse(); }
inline AtomicSignedMeasure pi_to_measure(const PiMeasure& pi, const AmbientGroup& group = real_z2_group())
{
    return pi.to_measure(group);
}

}  // namespace lca
