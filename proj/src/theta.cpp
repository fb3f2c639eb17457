#include "lca/theta.hpp"

#include <cmath>
#include <map>

#include "lca/error.hpp"

namespace lca {

namespace {

ThetaMembership classify(double abs_kappa, double bound, const char* reason_out)
{
    ThetaMembership r;
    r.bound = bound;
    const double excess = abs_kappa - bound;
    if (excess > kThetaGraceBand * bound) {
        r.verdict = ThetaVerdict::Out;
        r.reason = reason_out;
    } else if (excess >= -kThetaGraceBand * bound) {
        r.verdict = ThetaVerdict::Boundary;
    } else {
        r.verdict = ThetaVerdict::In;
    }
    return r;
}

}  // namespace

ThetaMembership theta_membership(const ThetaParams& p)
{
    ThetaMembership out;
    if (!std::isfinite(p.sigma) || !std::isfinite(p.sigma_p) || !std::isfinite(p.m) || !std::isfinite(p.m_p) ||
        !std::isfinite(p.kappa)) {
        out.reason = "non-finite parameter";
        return out;
    }
    if (p.sigma < 0.0 || p.sigma_p < 0.0) {
        out.reason = "negative sigma";
        return out;
    }
    const double abs_kappa = std::abs(p.kappa);

    if (p.sigma == p.sigma_p) {
        if (p.m != p.m_p) {
            out.reason = "sigma = sigma' requires m = m'";
            return out;
        }
        return classify(abs_kappa, 1.0, "|kappa| > 1");
    }
    if (!is_strict_theta_shape(p)) {
        out.reason = "requires 0 < sigma' < sigma";
        return out;
    }
    if (p.kappa == 0.0) {
        out.reason = "kappa = 0";
        return out;
    }
    // Compare in log space so that tiny rho does not underflow.
    const double log_rho = log_two_term_bound(p.sigma, p.m, p.sigma_p, p.m_p);
    const double log_excess = std::log(abs_kappa) - log_rho;
    out.bound = std::exp(log_rho);
    if (log_excess > kThetaGraceBand) {
        out.reason = "|kappa| > rho";
    } else if (log_excess >= -kThetaGraceBand) {
        out.verdict = ThetaVerdict::Boundary;
    } else {
        out.verdict = ThetaVerdict::In;
    }
    return out;
}

double rho_extremal(const ThetaParams& p)
{
    if (!is_strict_theta_shape(p)) throw InvalidInput("rho requires 0 < sigma' < sigma");
    return two_term_bound(p.sigma, p.m, p.sigma_p, p.m_p);
}

AmbientGroup real_z2_group() { return AmbientGroup(FiniteAbelianGroup(std::vector<Residue>{})); }

AtomicSignedMeasure theta_to_measure(const ThetaParams& p, const AmbientGroup& group)
{
    if (p.sigma < 0.0 || p.sigma_p < 0.0) throw InvalidInput("Theta parameters need sigma, sigma' >= 0");
    const auto zero = group.finite().zero();
    const double h = 0.5 * p.kappa;
    return {group,
            {{0.5, {p.sigma, p.m}, 0, zero},
             {0.5, {p.sigma, p.m}, 1, zero},
             {h, {p.sigma_p, p.m_p}, 0, zero},
             {-h, {p.sigma_p, p.m_p}, 1, zero}}};
}

ThetaParams measure_to_theta(const AtomicSignedMeasure& mu)
{
    const auto zero = mu.group().finite().zero();
    std::map<RealAtom, double> even;
    std::map<RealAtom, double> odd;
    double scale = 0.0;
    for (const auto& t : mu.terms()) {
        if (!(t.g == zero)) throw InvalidInput("Theta measures live on R x Z(2): nonzero G coordinate");
        even[t.atom] += t.c;
        odd[t.atom] += t.m == 0 ? t.c : -t.c;
        scale = std::max(scale, std::abs(t.c));
    }
    auto single = [&](const std::map<RealAtom, double>& coeffs, const char* what) {
        const std::pair<const RealAtom, double>* found = nullptr;
        for (const auto& entry : coeffs) {
            if (std::abs(entry.second) <= 1e-12 * scale) continue;
            if (found) throw InvalidInput(std::string("not of Theta shape: several exponentials at ") + what);
            found = &entry;
        }
        return found;
    };
    const auto* e = single(even, "n = 0");
    const auto* o = single(odd, "n = 1");
    if (!e) throw InvalidInput("not of Theta shape: zero total mass");
    if (!o) throw InvalidInput("not of Theta shape: kappa = 0 (vanishing characteristic function)");
    if (std::abs(e->second - 1.0) > 1e-12) throw InvalidInput("not of Theta shape: total mass differs from 1");
    return {e->first.sigma, o->first.sigma, e->first.shift, o->first.shift, o->second};
}

AtomicSignedMeasure lambda_signed(double sigma, double m, double sigma_p, double m_p, const AmbientGroup& group)
{
    if (!(0.0 < sigma_p && sigma_p < sigma)) throw InvalidInput("lambda requires 0 < sigma' < sigma");
    return theta_to_measure({sigma, sigma_p, m, m_p, 1.0}, group);
}

Complex theta_char(const ThetaParams& p, double s, int n)
{
    if (n == 0) return std::polar(std::exp(-p.sigma * s * s), p.m * s);
    return p.kappa * std::polar(std::exp(-p.sigma_p * s * s), p.m_p * s);
}

PiMeasure::PiMeasure(double c) : c_(c)
{
    if (!(c_ != 0.0) || !std::isfinite(c_)) throw InvalidInput("pi parameter c must be finite and nonzero");
}

AtomicSignedMeasure PiMeasure::to_measure(const AmbientGroup& group) const
{
    const auto zero = group.finite().zero();
    return {group, {{0.5 * (1.0 + c_), {}, 0, zero}, {0.5 * (1.0 - c_), {}, 1, zero}}};
}

}  // namespace lca
