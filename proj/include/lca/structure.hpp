#pragma once

/**
 * @file structure.hpp
 * @brief Structure of pairs (mu1, mu2) satisfying the symmetry condition.
 *
 * For alpha = (a, I, alpha_G) and K = Ker(I + alpha_G):
 *
 *   a != -1:  mu_j = gamma_j * omega_j * E_{g_j}, gamma_j in Theta, omega_j on Z(2) x K;
 *   a == -1:  mu_j = omega_j * E_{x_j}, omega_j on R x Z(2) x K;
 *
 * and in both cases omega1 = omega2 * vartheta2 or omega2 = omega1 * vartheta1 with
 * vartheta_j a distribution on Z(2).
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lca/error.hpp"
#include "lca/heyde.hpp"
#include "lca/theta.hpp"

namespace lca {

/// Some precondition of generate_instance failed; every failing condition is listed.
class InfeasibleSpec : public HypothesisViolation {
public:
    explicit InfeasibleSpec(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

// ---------------------------------------------------------------------------
// Cross constraints

struct CrossResiduals {
    double sigma = 0.0;
    double sigma_p = 0.0;
    double m = 0.0;
    double m_p = 0.0;

    double max() const;
};

/// sigma1 + a sigma2, sigma1' + a sigma2', m1 + a m2, m1' + a m2'.
CrossResiduals cross_constraint_residuals(const ThetaParams& theta1, const ThetaParams& theta2, double a);
bool check_cross_constraints(const ThetaParams& theta1, const ThetaParams& theta2, double a, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Instance generation

struct GenerateSpec {
    std::vector<Residue> cyclic_orders{3};
    double a = -2.0;
    /// Matrix of alpha_G; defaults to -I.
    std::optional<IntMatrix> alpha_g;
    ThetaParams theta2{1.0, 0.5, 0.0, 0.0, 0.3};
    /// Defaults to sign(kappa2) min(|kappa2|, bound of theta1).
    std::optional<double> kappa1;
    /// Finite terms on Z(2) x K (sigma = shift = 0); drawn from the seed when absent.
    std::optional<std::vector<MeasureTerm>> omega2;
    /// Characteristic value at n = 1 of vartheta on Z(2); drawn from the seed when absent.
    std::optional<double> vartheta;
    std::optional<XPoint> x2;
};

struct Instance {
    AtomicSignedMeasure mu1;
    AtomicSignedMeasure mu2;
    XAutomorphism alpha;
    ThetaParams theta1;
    ThetaParams theta2;
    AtomicSignedMeasure omega2;
    double vartheta;
    XPoint x1;
    XPoint x2;
};

/// Fills missing fields from the seed, then builds mu1 = theta1 * (omega2 * vartheta) * E_{x1},
/// mu2 = theta2 * omega2 * E_{x2} with x1 = -alpha x2. Throws InfeasibleSpec.
Instance generate_instance(const GenerateSpec& spec, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Decomposition

enum class Branch { ANotMinusOne, AMinusOne };
const char* to_string(Branch branch);

struct SideDecomposition {
    /// (sigma, sigma', m, m', kappa) read from mu^(s, 0, 0) and mu^(s, 1, 0) after removing the G shift.
    std::optional<ThetaParams> observed;
    /// Branch I only: the Theta factor, normalised to |kappa| = rho.
    std::optional<ThetaParams> gamma;
    std::optional<double> rho;
    std::optional<double> pi_c;
    AtomicSignedMeasure tau;
    AtomicSignedMeasure omega;
    XPoint shift;
    bool support_in_k = false;
    double reconstruction_error = 0.0;
};

struct VarthetaRelation {
    /// 2: omega1 = omega2 * vartheta2; 1: omega2 = omega1 * vartheta1.
    int side = 2;
    double c = 1.0;
    bool tie = false;
    double residual = 0.0;
    /// Every (side, c) that fits within tolerance.
    std::vector<std::pair<int, double>> candidates;
};

struct Decomposition {
    Branch branch = Branch::ANotMinusOne;
    std::array<SideDecomposition, 2> sides;
    VarthetaRelation vartheta;
    std::vector<GroupElement> kernel;
    double equation_residual = 0.0;
    std::optional<CrossResiduals> cross;
    std::vector<std::string> notes;
};

struct DecomposeOptions {
    double tol = 1e-9;
    GridSpec grid{};
    /// |a + 1| below this selects the a = -1 branch.
    double branch_tol = 1e-12;
};

/// Throws HypothesisViolation with a diagnostic when a hypothesis of the characterization fails.
Decomposition decompose(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2, const XAutomorphism& alpha,
                        const DecomposeOptions& options = {});

// ---------------------------------------------------------------------------
// lambda * tau, factor exchange, rigidity

/// omega({g}) = a, omega({g + p}) = b.
struct Z2Weights {
    double a = 0.0;
    double b = 0.0;
};

/// Weights indexed like FiniteAbelianGroup::element_at.
AtomicSignedMeasure weights_to_measure(const AmbientGroup& group, const std::vector<Z2Weights>& weights);
std::vector<Z2Weights> measure_to_weights(const AtomicSignedMeasure& omega);

/// |a_i - b_i| / (a_i + b_i) <= rho for every i with a_i + b_i > 0.
bool lambda_tau_criterion(double sigma, double m, double sigma_p, double m_p, const std::vector<Z2Weights>& tau);

struct FactorExchange {
    ThetaParams gamma;
    AtomicSignedMeasure omega;
};

/// gamma' = gamma * pi (kappa' = kappa c), omega' = omega * pi^{-1}.
FactorExchange factor_exchange(const ThetaParams& gamma, const AtomicSignedMeasure& omega, const PiMeasure& pi);

struct RigidityResult {
    bool rigid = false;
    std::optional<PiMeasure> witness;
    std::optional<FactorExchange> exchanged;
    bool witness_valid = false;
    std::string reason;
    std::vector<std::string> notes;
};

RigidityResult rigidity_decision(const ThetaParams& gamma, const AmbientGroup& group,
                                 const std::vector<Z2Weights>& omega);

}  // namespace lca
