#include "lca/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lca/error.hpp"

namespace lca {

namespace {

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
}

std::string coords_string(const GroupElement& g)
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < g.coords.size(); ++i) os << (i ? "," : "") << g.coords[i];
    os << "]";
    return os.str();
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Bound on |kappa| for a Theta shape: rho when 0 < sigma' < sigma, 1 otherwise.
double kappa_bound(const ThetaParams& p) { return is_strict_theta_shape(p) ? rho_extremal(p) : 1.0; }

std::optional<ThetaParams> read_observed(const AtomicSignedMeasure& nu, std::string& why)
{
    std::map<RealAtom, double> even;
    std::map<RealAtom, double> odd;
    double scale = 0.0;
    for (const auto& t : nu.terms()) {
        even[t.atom] += t.c;
        odd[t.atom] += t.m == 0 ? t.c : -t.c;
        scale = std::max(scale, std::abs(t.c));
    }
    auto single = [&](const std::map<RealAtom, double>& coeffs) -> std::optional<std::pair<RealAtom, double>> {
        std::optional<std::pair<RealAtom, double>> found;
        for (const auto& [atom, c] : coeffs) {
            if (std::abs(c) <= 1e-12 * scale) continue;
            if (found) return std::nullopt;
            found = {atom, c};
        }
        return found;
    };
    const auto e = single(even);
    const auto o = single(odd);
    if (!e || !o) {
        why = "characteristic function at h = 0 is not a single Gaussian exponential per parity";
        return std::nullopt;
    }
    if (std::abs(e->second - 1.0) > 1e-9) {
        why = "total mass differs from 1";
        return std::nullopt;
    }
    return ThetaParams{e->first.sigma, o->first.sigma, e->first.shift, o->first.shift, o->second};
}

bool in_set(const std::set<GroupElement>& k, const GroupElement& g) { return k.contains(g); }

double char_sup_error(const AtomicSignedMeasure& a, const AtomicSignedMeasure& b, const std::vector<double>& s)
{
    const CharacteristicFunction fa(a);
    const CharacteristicFunction fb(b);
    const std::size_t order = a.group().finite().cardinality();
    double err = 0.0;
    for (double sk : s)
        for (int n = 0; n < 2; ++n)
            for (std::size_t h = 0; h < order; ++h) err = std::max(err, std::abs(fa.at(sk, n, h) - fb.at(sk, n, h)));
    return err;
}

}  // namespace

InfeasibleSpec::InfeasibleSpec(std::vector<std::string> violations)
    : HypothesisViolation("infeasible instance spec: " + join(violations)), violations_(std::move(violations))
{
}

double CrossResiduals::max() const
{
    return std::max({std::abs(sigma), std::abs(sigma_p), std::abs(m), std::abs(m_p)});
}

CrossResiduals cross_constraint_residuals(const ThetaParams& theta1, const ThetaParams& theta2, double a)
{
    return {theta1.sigma + a * theta2.sigma, theta1.sigma_p + a * theta2.sigma_p, theta1.m + a * theta2.m,
            theta1.m_p + a * theta2.m_p};
}

bool check_cross_constraints(const ThetaParams& theta1, const ThetaParams& theta2, double a, double tol)
{
    return cross_constraint_residuals(theta1, theta2, a).max() <= tol;
}

// ---------------------------------------------------------------------------

Instance generate_instance(const GenerateSpec& spec, std::uint64_t seed)
{
    const FiniteAbelianGroup fin(spec.cyclic_orders);
    const AmbientGroup group(fin);
    const auto rank = static_cast<Eigen::Index>(fin.rank());
    const GroupAutomorphism alpha_g(fin, spec.alpha_g ? *spec.alpha_g : IntMatrix(-IntMatrix::Identity(rank, rank)));
    if (!(spec.a != 0.0) || !std::isfinite(spec.a)) throw InfeasibleSpec({"a must be finite and nonzero"});
    const XAutomorphism alpha(group, spec.a, alpha_g);
    const double a = spec.a;

    const auto kernel = kernel_of_I_plus(alpha_g);
    const std::set<GroupElement> kset(kernel.begin(), kernel.end());

    // Every random quantity is drawn unconditionally so that the stream does not depend on which fields are given.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double w0 = 0.6 + 0.2 * unit(rng);
    const double split = unit(rng);
    std::vector<std::pair<int, GroupElement>> candidates;
    for (int m = 0; m < 2; ++m)
        for (const auto& k : kernel)
            if (m != 0 || !(k == fin.zero())) candidates.emplace_back(m, k);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const double theta_c = (0.3 + 0.7 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    const double t2 = -1.0 + 2.0 * unit(rng);
    const int m2 = unit(rng) < 0.5 ? 0 : 1;
    const auto g2 = fin.element_at(static_cast<std::size_t>(unit(rng) * fin.cardinality()) % fin.cardinality());

    std::vector<std::string> violations;
    const ThetaParams& th2 = spec.theta2;
    if ((th2.sigma > 0.0 || th2.sigma_p > 0.0) && !(a < 0.0))
        violations.push_back("sigma2 > 0 requires a < 0, since sigma1 = -a sigma2 must be positive");
    if (const auto mem = theta_membership(th2); !mem.in())
        violations.push_back(std::string("theta2 is not in Theta: ") + mem.reason);
    if (th2.kappa == 0.0) violations.push_back("kappa2 = 0 makes the characteristic function vanish");
    if (!restriction_is_minus_identity(alpha_g, kernel))
        violations.push_back("alpha_G does not act as -I on K");

    ThetaParams th1{-a * th2.sigma, -a * th2.sigma_p, -a * th2.m, -a * th2.m_p, 0.0};
    if (spec.kappa1) {
        th1.kappa = *spec.kappa1;
    } else if (th1.sigma >= 0.0 && th1.sigma_p >= 0.0) {
        th1.kappa = sign_of(th2.kappa) * std::min(std::abs(th2.kappa), kappa_bound(th1));
    }
    if (const auto mem = theta_membership(th1); !mem.in())
        violations.push_back(std::string("theta1 is not in Theta: ") + mem.reason);
    if (th1.kappa == 0.0) violations.push_back("kappa1 = 0 makes the characteristic function vanish");

    AtomicSignedMeasure omega2;
    if (spec.omega2) {
        bool ok = true;
        for (const auto& t : *spec.omega2) {
            if (t.atom.sigma != 0.0 || t.atom.shift != 0.0) {
                violations.push_back("omega2 must be supported on Z(2) x K (no real part)");
                ok = false;
                break;
            }
            if (!fin.contains(t.g) || !in_set(kset, t.g)) {
                violations.push_back("omega2 has an atom at g = " + coords_string(t.g) + " outside K");
                ok = false;
                break;
            }
            if (t.c < 0.0) {
                violations.push_back("omega2 has a negative weight");
                ok = false;
                break;
            }
        }
        if (ok) {
            omega2 = AtomicSignedMeasure(group, *spec.omega2);
            if (std::abs(omega2.total_mass() - 1.0) > 1e-12) violations.push_back("omega2 must have total mass 1");
        }
    } else {
        std::vector<MeasureTerm> terms{{w0, {}, 0, fin.zero()}};
        const std::size_t extra = std::min<std::size_t>(2, candidates.size());
        const double rest = 1.0 - w0;
        for (std::size_t i = 0; i < extra; ++i) {
            const double w = extra == 1 ? rest : (i == 0 ? rest * split : rest * (1.0 - split));
            terms.push_back({w, {}, candidates[i].first, candidates[i].second});
        }
        if (extra == 0) terms[0].c = 1.0;
        omega2 = AtomicSignedMeasure(group, terms);
    }

    const double vartheta = spec.vartheta ? *spec.vartheta : theta_c;
    if (!(std::abs(vartheta) <= 1.0) || vartheta == 0.0)
        violations.push_back("vartheta must be a distribution on Z(2) with nonzero characteristic value: 0 < |c| <= 1");

    XPoint x2{t2, m2, g2};
    if (spec.x2) {
        if (!group.contains(*spec.x2))
            violations.push_back("x2 is not a point of X");
        else
            x2 = *spec.x2;
    }
    if (!violations.empty()) throw InfeasibleSpec(violations);

    const XPoint x1 = group.neg(alpha.apply(x2));
    const auto omega1 = convolve(omega2, z2_measure(vartheta, group));
    const auto mu1 = translate(convolve(theta_to_measure(th1, group), omega1), x1);
    const auto mu2 = translate(convolve(theta_to_measure(th2, group), omega2), x2);
    if (is_distribution(mu1).verdict == Verdict::No) violations.push_back("mu1 is not a distribution");
    if (is_distribution(mu2).verdict == Verdict::No) violations.push_back("mu2 is not a distribution");
    if (!violations.empty()) throw InfeasibleSpec(violations);

    return {mu1, mu2, alpha, th1, th2, omega2, vartheta, x1, x2};
}

// ---------------------------------------------------------------------------

const char* to_string(Branch branch)
{
    return branch == Branch::AMinusOne ? "a=-1" : "a!=-1";
}

Decomposition decompose(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2, const XAutomorphism& alpha,
                        const DecomposeOptions& options)
{
    if (!(mu1.group() == mu2.group()) || !(mu1.group() == alpha.group()))
        throw InvalidInput("measures and automorphism must live on the same group");
    const auto& group = mu1.group();
    const auto& fin = group.finite();

    Decomposition out;
    out.branch = std::abs(alpha.a() + 1.0) < options.branch_tol ? Branch::AMinusOne : Branch::ANotMinusOne;

    const auto residual = equation_residual(mu1, mu2, alpha, options.grid);
    out.equation_residual = residual.residual;
    for (const auto& f : residual.flags)
        if (f.rfind("vanishing", 0) == 0) throw HypothesisViolation("nonvanishing hypothesis fails: " + f);
    if (!is_probability(mu1) || !is_probability(mu2))
        throw HypothesisViolation("mu1 and mu2 must be probability distributions");
    if (residual.residual > options.tol) {
        std::ostringstream os;
        os << "symmetry equation fails: residual " << residual.residual << " > tol " << options.tol;
        throw HypothesisViolation(os.str());
    }

    out.kernel = kernel_of_I_plus(alpha.alpha_g());
    const std::set<GroupElement> kset(out.kernel.begin(), out.kernel.end());

    // g2: smallest representative of the K-coset carrying mu2; g1 = -alpha_G g2 keeps x1 + alpha x2 = 0.
    auto coset_rep = [&](const AtomicSignedMeasure& mu) {
        const auto& terms = mu.terms();
        const auto largest = std::max_element(terms.begin(), terms.end(),
                                              [](const auto& x, const auto& y) { return std::abs(x.c) < std::abs(y.c); });
        GroupElement rep = fin.add(largest->g, out.kernel.front());
        for (const auto& k : out.kernel) rep = std::min(rep, fin.add(largest->g, k));
        return rep;
    };
    if (mu1.empty() || mu2.empty()) throw HypothesisViolation("empty measure");
    const GroupElement g2 = coset_rep(mu2);
    const GroupElement g1 = fin.neg(alpha.alpha_g().apply(g2));
    const std::array<GroupElement, 2> g{g1, g2};
    const std::array<const AtomicSignedMeasure*, 2> mu{&mu1, &mu2};

    for (int j = 0; j < 2; ++j) {
        for (const auto& t : mu[j]->terms())
            if (!in_set(kset, fin.sub(t.g, g[j])))
                throw HypothesisViolation("mu" + std::to_string(j + 1) + " is not supported in a single coset g + K (g = " +
                                          coords_string(g[j]) + ")");
    }

    const auto s_probe = grid_points(options.grid.s_max ? *options.grid.s_max : default_s_max(mu1, mu2),
                                     options.grid.points);

    std::array<AtomicSignedMeasure, 2> nu;
    for (int j = 0; j < 2; ++j) {
        auto& side = out.sides[j];
        side.shift = {0.0, 0, g[j]};
        nu[j] = translate(*mu[j], {0.0, 0, fin.neg(g[j])});
        std::string why;
        side.observed = read_observed(nu[j], why);
        if (!side.observed && out.branch == Branch::ANotMinusOne)
            throw HypothesisViolation("mu" + std::to_string(j + 1) + ": " + why);
        side.tau = finite_marginal(nu[j]);
    }

    if (out.branch == Branch::AMinusOne) {
        out.notes.push_back("a = -1: mu_j = omega_j * E_{x_j} with x_j in X; the shifts reported here have t = 0, m = 0");
        for (int j = 0; j < 2; ++j) out.sides[j].omega = nu[j];
        if (out.sides[0].observed && out.sides[1].observed)
            out.cross = cross_constraint_residuals(*out.sides[0].observed, *out.sides[1].observed, alpha.a());
    } else {
        const auto& o1 = *out.sides[0].observed;
        const auto& o2 = *out.sides[1].observed;
        out.cross = cross_constraint_residuals(o1, o2, alpha.a());
        const double scale = 1.0 + std::max({std::abs(o1.sigma), std::abs(o1.m), std::abs(o1.m_p), std::abs(o2.m),
                                             std::abs(o2.m_p), std::abs(o2.sigma)});
        if (out.cross->max() > 1e-8 * scale)
            throw HypothesisViolation("cross constraints sigma1 + a sigma2 = 0, ..., m1' + a m2' = 0 fail");

        for (int j = 0; j < 2; ++j) {
            auto& side = out.sides[j];
            const auto& o = *side.observed;
            const std::string name = "mu" + std::to_string(j + 1);
            if (o.kappa == 0.0) throw HypothesisViolation(name + ": vanishing characteristic function at n = 1");
            if (o.sigma > 0.0) {
                if (alpha.a() > 0.0) throw HypothesisViolation(name + ": sigma > 0 is inconsistent with a > 0");
                if (!(o.sigma_p > 0.0 && o.sigma_p <= o.sigma) || (o.sigma_p == o.sigma && o.m_p != o.m))
                    throw HypothesisViolation(name + ": (sigma, sigma', m, m') is not of Theta shape");
                const double rho = kappa_bound(o);
                const double sgn = sign_of(o.kappa);
                side.rho = rho;
                side.pi_c = sgn / rho;
                side.gamma = ThetaParams{o.sigma, o.sigma_p, o.m, o.m_p, sgn * rho};
                side.omega = convolve(side.tau, PiMeasure(*side.pi_c).to_measure(group));
            } else {
                if (o.sigma_p != 0.0 || o.m_p != o.m)
                    throw HypothesisViolation(name + ": sigma = 0 requires sigma' = 0 and m' = m");
                side.gamma = ThetaParams{0.0, 0.0, o.m, o.m, 1.0};
                side.omega = translate(nu[j], {-o.m, 0, fin.zero()});
                if (!side.omega.is_finite_supported())
                    throw HypothesisViolation(name + ": after removing the real shift the measure is not on Z(2) x G");
            }
            if (is_distribution(side.omega).verdict == Verdict::No)
                throw HypothesisViolation(name + ": omega is not a distribution");
        }
    }

    for (int j = 0; j < 2; ++j) {
        auto& side = out.sides[j];
        side.support_in_k = std::all_of(side.omega.terms().begin(), side.omega.terms().end(), [&](const auto& t) {
            const bool finite_ok = out.branch == Branch::AMinusOne || (t.atom.sigma == 0.0 && t.atom.shift == 0.0);
            return finite_ok && in_set(kset, t.g);
        });
        AtomicSignedMeasure rebuilt = side.omega;
        if (side.gamma) rebuilt = convolve(theta_to_measure(*side.gamma, group), rebuilt);
        rebuilt = translate(rebuilt, side.shift);
        side.reconstruction_error = char_sup_error(rebuilt, *mu[j], s_probe);
        if (side.reconstruction_error > options.tol) {
            std::ostringstream os;
            os << "mu" << j + 1 << ": reconstruction error " << side.reconstruction_error << " exceeds tol";
            throw HypothesisViolation(os.str());
        }
    }

    const auto rel = delta_relation(out.sides[0].omega, out.sides[1].omega, options.tol);
    if (rel.branch == DeltaBranch::Neither)
        throw HypothesisViolation("no vartheta on Z(2) links omega1 and omega2");
    out.vartheta.side = rel.branch == DeltaBranch::Tau1EqTau2ConvDelta ? 2 : 1;
    out.vartheta.c = rel.d;
    out.vartheta.tie = rel.tie;
    out.vartheta.residual = rel.residual;
    out.vartheta.candidates.emplace_back(out.vartheta.side, rel.d);
    if (rel.tie) out.vartheta.candidates.emplace_back(1, rel.d == 0.0 ? 0.0 : 1.0 / rel.d);
    return out;
}

// ---------------------------------------------------------------------------

AtomicSignedMeasure weights_to_measure(const AmbientGroup& group, const std::vector<Z2Weights>& weights)
{
    const auto& fin = group.finite();
    if (weights.size() != fin.cardinality()) throw InvalidInput("need one (a, b) weight pair per element of G");
    std::vector<MeasureTerm> terms;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        terms.push_back({weights[i].a, {}, 0, fin.element_at(i)});
        terms.push_back({weights[i].b, {}, 1, fin.element_at(i)});
    }
    return {group, terms};
}

std::vector<Z2Weights> measure_to_weights(const AtomicSignedMeasure& omega)
{
    if (!omega.is_finite_supported()) throw InvalidInput("weights need a measure supported on Z(2) x G");
    const auto& fin = omega.group().finite();
    std::vector<Z2Weights> out(fin.cardinality());
    for (const auto& t : omega.terms()) (t.m == 0 ? out[fin.index_of(t.g)].a : out[fin.index_of(t.g)].b) += t.c;
    return out;
}

namespace {

void require_probability_weights(const std::vector<Z2Weights>& w)
{
    double total = 0.0;
    for (const auto& x : w) {
        if (!(x.a >= 0.0) || !(x.b >= 0.0)) throw InvalidInput("weights must be nonnegative");
        total += x.a + x.b;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InvalidInput("weights must sum to 1");
}

}  // namespace

bool lambda_tau_criterion(double sigma, double m, double sigma_p, double m_p, const std::vector<Z2Weights>& tau)
{
    if (!(0.0 < sigma_p && sigma_p < sigma)) throw InvalidInput("lambda * tau criterion requires 0 < sigma' < sigma");
    require_probability_weights(tau);
    const double rho = two_term_bound(sigma, m, sigma_p, m_p);
    for (const auto& w : tau)
        if (w.a + w.b > 0.0 && std::abs(w.a - w.b) > rho * (w.a + w.b)) return false;
    return true;
}

FactorExchange factor_exchange(const ThetaParams& gamma, const AtomicSignedMeasure& omega, const PiMeasure& pi)
{
    if (!is_strict_theta_shape(gamma)) throw InvalidInput("factor exchange requires 0 < sigma' < sigma");
    ThetaParams g = gamma;
    g.kappa = gamma.kappa * pi.c();
    return {g, convolve(omega, pi.inverse().to_measure(omega.group()))};
}

RigidityResult rigidity_decision(const ThetaParams& gamma, const AmbientGroup& group,
                                 const std::vector<Z2Weights>& omega)
{
    if (!is_strict_theta_shape(gamma)) throw InvalidInput("rigidity decision requires 0 < sigma' < sigma");
    if (gamma.kappa == 0.0) throw InvalidInput("rigidity decision requires kappa != 0");
    const auto membership = theta_membership(gamma);
    if (!membership.in()) throw InvalidInput("gamma is not in Theta");
    require_probability_weights(omega);
    const auto omega_measure = weights_to_measure(group, omega);

    RigidityResult out;
    const auto f = CharacteristicFunction(omega_measure);
    for (int n = 0; n < 2 && out.notes.empty(); ++n)
        for (std::size_t h = 0; h < group.finite().cardinality(); ++h)
            if (std::abs(f.at(0.0, n, h)) < kVanishingThreshold) {
                out.notes.push_back("omega has a vanishing characteristic value");
                break;
            }

    const double rho = rho_extremal(gamma);
    const bool extremal = membership.verdict == ThetaVerdict::Boundary;
    const bool zero_pattern = std::any_of(omega.begin(), omega.end(), [](const Z2Weights& w) {
        return (w.a == 0.0 && w.b > 0.0) || (w.a > 0.0 && w.b == 0.0);
    });

    double c = 1.0;
    if (!extremal) {
        c = rho / std::abs(gamma.kappa);
        out.reason = "|kappa| < rho: scale kappa up to the extremal value";
    } else if (!zero_pattern) {
        double worst = 0.0;
        for (const auto& w : omega)
            if (w.a + w.b > 0.0) worst = std::max(worst, std::abs(w.a - w.b) / (w.a + w.b));
        c = 0.5 * (worst + 1.0);
        out.reason = "|kappa| = rho but every g carries both parities: shrink kappa";
    } else {
        out.rigid = true;
        out.reason = "|kappa| = rho and some g carries exactly one parity";
        return out;
    }
    out.witness = PiMeasure(c);
    out.exchanged = factor_exchange(gamma, omega_measure, *out.witness);
    out.witness_valid = is_in_theta(out.exchanged->gamma) && is_distribution(out.exchanged->omega).verdict != Verdict::No;
    return out;
}

}  // namespace lca
