#pragma once

/**
 * @file heyde.hpp
 * @brief The symmetry condition for L2 = xi1 + alpha xi2 given L1 = xi1 + xi2.
 *
 * In terms of characteristic functions the condition reads
 *
 *     mu1^(u + v) mu2^(u + alpha~ v) = mu1^(u - v) mu2^(u - alpha~ v)   for all u, v in Y.
 *
 * equation_residual evaluates it on a real grid crossed with every finite
 * coordinate, mc_symmetry_test checks (L1, L2) ~ (L1, -L2) by simulation, and
 * finite_exact_check covers measures that live on Z(2) x G.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lca/measures.hpp"

namespace lca {

/// Flag threshold for |mu^(s, n, h)| relative to |mu^(s, 0, 0)|.
inline constexpr double kVanishingThreshold = 1e-10;

struct GridSpec {
    int points = 33;
    /// Half-width S of the grid; defaults to 5 / sqrt(smallest positive sigma), or 10.
    std::optional<double> s_max;
};

/// Resolved half-width for a pair of measures.
double default_s_max(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2);
std::vector<double> grid_points(double s_max, int points);

struct ResidualReport {
    double residual = 0.0;
    double s_max = 0.0;
    int points = 0;
    std::size_t evaluations = 0;
    std::vector<std::string> flags;
};

ResidualReport equation_residual(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2,
                                 const XAutomorphism& alpha, const GridSpec& grid = {});

struct ProbePair {
    YPoint u;
    YPoint v;
};

/// 2 real values x 2 parities x 2 characters for each of u and v, scaled by the spread of L2.
std::vector<ProbePair> default_probes(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2,
                                      const XAutomorphism& alpha);

struct McReport {
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t samples = 0;
    std::size_t probes = 0;
};

/**
 * Draws xi1 ~ mu1, xi2 ~ mu2 and compares E[(L1, u)(L2, v)] with E[(L1, u)(-L2, v)]
 * for every probe pair. The statistic is the largest modulus of the difference;
 * the threshold 4 / sqrt(N) is distribution free since characters are bounded by 1.
 */
McReport mc_symmetry_test(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2,
                          const XAutomorphism& alpha, std::size_t samples, const std::vector<ProbePair>& probes,
                          std::uint64_t seed,
                          const std::function<void(const XPoint&, const XPoint&)>& on_draw = {});

/// Exhaustive residual over all pairs of finite characters; measures must be supported on Z(2) x G.
double finite_exact_check(const AtomicSignedMeasure& omega1, const AtomicSignedMeasure& omega2,
                          const XAutomorphism& alpha);

enum class DeltaBranch { Tau1EqTau2ConvDelta, Tau2EqTau1ConvDelta, Neither };

struct DeltaRelation {
    DeltaBranch branch = DeltaBranch::Neither;
    /// Characteristic value of delta at n = 1; delta = ((1 + d)/2) E_0 + ((1 - d)/2) E_p.
    double d = 1.0;
    /// Both branches fit (|d| = 1); the first one is reported.
    bool tie = false;
    double residual = 0.0;
};

/// ((1 + d)/2) E_0 + ((1 - d)/2) E_p.
AtomicSignedMeasure z2_measure(double d, const AmbientGroup& group);

/// Decides tau1 = tau2 * delta or tau2 = tau1 * delta with delta a distribution on Z(2).
DeltaRelation delta_relation(const AtomicSignedMeasure& tau1, const AtomicSignedMeasure& tau2, double tol = 1e-9);

const char* to_string(DeltaBranch branch);

}  // namespace lca
