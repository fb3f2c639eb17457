#pragma once

/**
 * @file measures.hpp
 * @brief Signed measures on X = R x Z(2) x G as finite sums of Gaussian/point atoms.
 *
 * A term (c, sigma, shift, m, g) is c * gamma_{sigma,shift} (x) E_{(m, g)} where
 * gamma_{sigma,shift} has characteristic function exp(-sigma s^2 + i shift s) and,
 * for sigma > 0, density
 *
 *     rho(t) = 1 / (2 sqrt(pi sigma)) * exp(-(t - shift)^2 / (4 sigma)),
 *
 * i.e. variance 2 sigma. sigma = 0 is the point mass at t = shift.
 *
 * The representation is closed under convolution (sigmas add, shifts add,
 * finite coordinates add, coefficients multiply) and under signed linear
 * combination, which covers every measure the library manipulates.
 */

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "lca/ambient_group.hpp"

namespace lca {

/// A merged coefficient is dropped when it is below this fraction of the magnitudes that were merged.
inline constexpr double kCoefficientDropTol = 1e-14;

struct RealAtom {
    double sigma = 0.0;
    double shift = 0.0;

    friend bool operator==(const RealAtom&, const RealAtom&) = default;
    friend auto operator<=>(const RealAtom&, const RealAtom&) = default;
};

struct MeasureTerm {
    double c = 0.0;
    RealAtom atom;
    int m = 0;
    GroupElement g;
};

class AtomicSignedMeasure {
public:
    AtomicSignedMeasure() = default;
    /// Merges terms with identical (sigma, shift, m, g) and drops near-zero coefficients.
    AtomicSignedMeasure(AmbientGroup group, std::vector<MeasureTerm> terms);

    static AtomicSignedMeasure zero(const AmbientGroup& group) { return {group, {}}; }

    const AmbientGroup& group() const { return group_; }
    const std::vector<MeasureTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    double total_mass() const;
    double max_sigma() const;
    /// Smallest strictly positive sigma, if any.
    std::optional<double> min_positive_sigma() const;
    /// All terms have sigma = 0 and shift = 0, i.e. the measure lives on Z(2) x G.
    bool is_finite_supported() const;

    AtomicSignedMeasure scaled(double k) const;
    AtomicSignedMeasure plus(const AtomicSignedMeasure& other) const;
    AtomicSignedMeasure minus(const AtomicSignedMeasure& other) const { return plus(other.scaled(-1.0)); }

private:
    AmbientGroup group_;
    std::vector<MeasureTerm> terms_;
};

AtomicSignedMeasure dirac(const AmbientGroup& group, const XPoint& x);
/// c * gamma_{sigma,shift} (x) E_{(m, g)}; g defaults to 0.
AtomicSignedMeasure gaussian(const AmbientGroup& group, double sigma, double shift, int m = 0,
                             std::optional<GroupElement> g = std::nullopt, double c = 1.0);

AtomicSignedMeasure convolve(const AtomicSignedMeasure& mu, const AtomicSignedMeasure& nu);
AtomicSignedMeasure translate(const AtomicSignedMeasure& mu, const XPoint& x);

/// Push-forward along (t, m, g) -> (0, m, g): freezes the characteristic function at s = 0.
AtomicSignedMeasure finite_marginal(const AtomicSignedMeasure& mu);

/// Maximum absolute difference of coefficients after matching atoms; exact structural comparison.
double term_distance(const AtomicSignedMeasure& a, const AtomicSignedMeasure& b);

Complex char_fn(const AtomicSignedMeasure& mu, const YPoint& y);
/// Analytic continuation in the real coordinate: s may be complex.
Complex char_fn(const AtomicSignedMeasure& mu, Complex s, int n, const DualCharacter& h);

/**
 * Precomputed characteristic function: terms are grouped by real atom and each
 * group carries its finite Fourier transform over all (n, h). Evaluation then
 * costs one exponential per distinct real atom.
 */
class CharacteristicFunction {
public:
    explicit CharacteristicFunction(const AtomicSignedMeasure& mu);

    Complex operator()(const YPoint& y) const;
    Complex at(double s, int n, std::size_t h_index) const;
    /// Sum over terms of |c| e^{-sigma s^2}; rounding in at(s, ...) is a small multiple of eps times this.
    double magnitude(double s) const;

    const AmbientGroup& group() const { return group_; }

private:
    AmbientGroup group_;
    std::vector<RealAtom> atoms_;
    std::vector<double> masses_;  // [atom] sum of |c|
    std::vector<std::vector<Complex>> transforms_;  // [atom][n * |H| + h_index]
};

double gaussian_density(double sigma, double shift, double t);

struct DensityProfile {
    double density = 0.0;
    /// (t, c) for the sigma = 0 atoms on the coset.
    std::vector<std::pair<double, double>> point_masses;
};

DensityProfile density_profile(const AtomicSignedMeasure& mu, int m, const GroupElement& g, double t);

/// Sharp bound: gamma_{sigma,m} - kappa gamma_{sigma',m'} is a measure iff kappa <= bound. Needs 0 < sigma' < sigma.
double two_term_bound(double sigma, double shift, double sigma_p, double shift_p);
double log_two_term_bound(double sigma, double shift, double sigma_p, double shift_p);

enum class Verdict { Yes, No, Boundary };

struct DistributionVerdict {
    Verdict verdict = Verdict::Yes;
    /// Witness of the smallest normalised density found (meaningful for No / Boundary).
    int m = 0;
    GroupElement g;
    double t = 0.0;
    /// min over cosets of (continuous density) / (positive part of it), or the most negative point mass.
    double min_normalized = 1.0;

    bool is_yes() const { return verdict == Verdict::Yes; }
};

/**
 * Nonnegativity of a signed measure, coset by coset.
 *
 * Point masses must be >= 0. Two-Gaussian cosets use two_term_bound; other cosets
 * use a grid + golden-section search on the density normalised by its positive
 * part, with the tail decided by the terms of largest sigma. Boundary is reported
 * when the minimum lies within +-tol of zero.
 */
DistributionVerdict is_distribution(const AtomicSignedMeasure& mu, double tol = 1e-12);

/// Total mass 1 and verdict not No.
bool is_probability(const AtomicSignedMeasure& mu, double tol = 1e-12);

/// Reusable sampler; construction validates the measure.
class MeasureSampler {
public:
    static constexpr double kEnvelopeScale = 1.1;
    static constexpr int kMaxRetries = 10000;

    explicit MeasureSampler(const AtomicSignedMeasure& mu);

    XPoint operator()(std::mt19937_64& rng) const;

private:
    struct Component {
        double c;
        RealAtom atom;
    };
    struct Coset {
        int m;
        GroupElement g;
        double point_mass;
        double continuous_mass;
        std::vector<Component> points;
        std::vector<Component> positive;
        std::vector<Component> negative;
        double positive_mass;
        std::vector<double> point_cumulative;
        std::vector<double> positive_cumulative;
    };

    double sample_continuous(const Coset& coset, std::mt19937_64& rng) const;

    AmbientGroup group_;
    std::vector<Coset> cosets_;
    std::vector<double> coset_cumulative_;
};

std::vector<XPoint> sample(const AtomicSignedMeasure& mu, std::uint64_t seed, std::size_t count);

/// Subgroup of Y described by generators, optionally together with the line {(s, 0, 0)}.
struct DualSubgroup {
    bool real_line = false;
    std::vector<YPoint> generators;
};

/// Support contained in A(X, H), checked directly on atoms.
bool support_in_annihilator(const AtomicSignedMeasure& mu, const DualSubgroup& sub, double tol = 1e-12);

/// char_fn(mu, y) == 1 on a finite sample of the generated subgroup.
bool char_is_one_on(const AtomicSignedMeasure& mu, const DualSubgroup& sub, double tol = 1e-12);

/**
 * max over |s| = r of |mu^(s, n, h)| <= max over |s| = r of |mu^(s, 0, 0)|, sampled at
 * boundary_samples equally spaced points of the circle (relative tolerance tol).
 */
bool max_modulus_check(const AtomicSignedMeasure& mu, double r, const DualCharacter& h, int n,
                       int boundary_samples, double tol = 1e-12);

}  // namespace lca
