#include "lca/heyde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lca/error.hpp"

namespace lca {

namespace {

/// Index arithmetic on H, with (n, h) flattened to n * |H| + index(h).
struct FiniteTables {
    std::size_t order = 1;
    std::vector<std::size_t> add;
    std::vector<std::size_t> sub;
    std::vector<std::size_t> adj;

    explicit FiniteTables(const XAutomorphism& alpha)
    {
        const auto& fin = alpha.group().finite();
        order = fin.cardinality();
        const auto chars = fin.characters();
        add.resize(order * order);
        sub.resize(order * order);
        adj.resize(order);
        for (std::size_t i = 0; i < order; ++i) {
            adj[i] = fin.index_of(GroupElement{alpha.alpha_g().apply_adjoint(chars[i]).coords});
            for (std::size_t j = 0; j < order; ++j) {
                add[i * order + j] = fin.index_of(GroupElement{fin.add(chars[i], chars[j]).coords});
                sub[i * order + j] = fin.index_of(GroupElement{fin.sub(chars[i], chars[j]).coords});
            }
        }
    }
};

void require_compatible(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2, const XAutomorphism& alpha)
{
    if (!(mu1.group() == mu2.group()) || !(mu1.group() == alpha.group()))
        throw InvalidInput("measures and automorphism must live on the same group");
}

/// Values of mu^ at one real coordinate for every (n, h).
std::vector<Complex> slice(const CharacteristicFunction& f, double s, std::size_t order)
{
    std::vector<Complex> out(2 * order);
    for (int n = 0; n < 2; ++n)
        for (std::size_t h = 0; h < order; ++h) out[n * order + h] = f.at(s, n, h);
    return out;
}

/// max |LHS - RHS| over (n, h1, h2); only n = n1 + n2 enters the equation.
double finite_kernel(const FiniteTables& tab, const std::vector<Complex>& m1_plus, const std::vector<Complex>& m2_plus,
                     const std::vector<Complex>& m1_minus, const std::vector<Complex>& m2_minus)
{
    const std::size_t r = tab.order;
    double worst = 0.0;
    for (std::size_t n = 0; n < 2; ++n) {
        const std::size_t off = n * r;
        for (std::size_t h1 = 0; h1 < r; ++h1) {
            for (std::size_t h2 = 0; h2 < r; ++h2) {
                const std::size_t ah2 = tab.adj[h2];
                const Complex lhs = m1_plus[off + tab.add[h1 * r + h2]] * m2_plus[off + tab.add[h1 * r + ah2]];
                const Complex rhs = m1_minus[off + tab.sub[h1 * r + h2]] * m2_minus[off + tab.sub[h1 * r + ah2]];
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    }
    return worst;
}

std::string describe(const AmbientGroup& group, double s, std::size_t k)
{
    const std::size_t order = group.finite().cardinality();
    std::ostringstream os;
    os << "(s=" << s << ", n=" << k / order << ", h=[";
    const auto h = group.finite().element_at(k % order).coords;
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << "])";
    return os.str();
}

double variance_of_t(const AtomicSignedMeasure& mu)
{
    double mass = 0.0;
    double mean = 0.0;
    double second = 0.0;
    for (const auto& t : mu.terms()) {
        mass += t.c;
        mean += t.c * t.atom.shift;
        second += t.c * (2.0 * t.atom.sigma + t.atom.shift * t.atom.shift);
    }
    if (!(mass > 0.0)) return 0.0;
    mean /= mass;
    return std::max(second / mass - mean * mean, 0.0);
}

}  // namespace

double default_s_max(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2)
{
    std::optional<double> sigma = mu1.min_positive_sigma();
    if (const auto s2 = mu2.min_positive_sigma(); s2 && (!sigma || *s2 < *sigma)) sigma = s2;
    return sigma ? 5.0 / std::sqrt(*sigma) : 10.0;
}

std::vector<double> grid_points(double s_max, int points)
{
    if (points < 1) throw InvalidInput("grid needs at least one point");
    if (!(s_max >= 0.0) || !std::isfinite(s_max)) throw InvalidInput("grid half-width must be finite and >= 0");
    if (points == 1) return {0.0};
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k) out[k] = -s_max + k * (2.0 * s_max / (points - 1));
    return out;
}

ResidualReport equation_residual(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2,
                                 const XAutomorphism& alpha, const GridSpec& grid)
{
    require_compatible(mu1, mu2, alpha);
    ResidualReport report;
    report.s_max = grid.s_max ? *grid.s_max : default_s_max(mu1, mu2);
    report.points = grid.points;
    const auto s = grid_points(report.s_max, grid.points);

    const FiniteTables tab(alpha);
    const CharacteristicFunction f1(mu1);
    const CharacteristicFunction f2(mu2);
    const double a = alpha.a();

    for (int j = 0; j < 2; ++j) {
        const auto& f = j == 0 ? f1 : f2;
        const auto& mu = j == 0 ? mu1 : mu2;
        if (!is_probability(mu)) report.flags.push_back("mu" + std::to_string(j + 1) + " is not a probability distribution");
        bool flagged = false;
        for (double sk : s) {
            const auto values = slice(f, sk, tab.order);
            const double base = std::abs(values[0]);
            // Far out, the values can be cancellation residue of much larger terms; there a
            // relative test says nothing, so such points are skipped.
            const double noise = 1e3 * std::numeric_limits<double>::epsilon() * f.magnitude(sk);
            if (base > 0.0 && noise >= kVanishingThreshold * base) continue;
            for (std::size_t k = 0; k < values.size() && !flagged; ++k) {
                if (std::abs(values[k]) < kVanishingThreshold * base || base == 0.0) {
                    report.flags.push_back("vanishing characteristic value: mu" + std::to_string(j + 1) + " at " +
                                           describe(mu.group(), sk, k));
                    flagged = true;
                }
            }
            if (flagged) break;
        }
    }

    for (double su : s) {
        for (double sv : s) {
            const auto m1p = slice(f1, su + sv, tab.order);
            const auto m1m = slice(f1, su - sv, tab.order);
            const auto m2p = slice(f2, su + a * sv, tab.order);
            const auto m2m = slice(f2, su - a * sv, tab.order);
            report.residual = std::max(report.residual, finite_kernel(tab, m1p, m2p, m1m, m2m));
            report.evaluations += 4 * tab.order * tab.order;
        }
    }
    return report;
}

std::vector<ProbePair> default_probes(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2,
                                      const XAutomorphism& alpha)
{
    require_compatible(mu1, mu2, alpha);
    double scale = std::sqrt(variance_of_t(mu1) + alpha.a() * alpha.a() * variance_of_t(mu2));
    if (!(scale > 0.0)) scale = 1.0;

    const auto& fin = mu1.group().finite();
    std::vector<DualCharacter> hs{fin.zero_character()};
    if (fin.cardinality() > 1) hs.push_back({fin.element_at(1).coords});

    auto build = [&](std::initializer_list<double> reals) {
        std::vector<YPoint> out;
        for (double r : reals)
            for (int n = 0; n < 2; ++n)
                for (const auto& h : hs) out.push_back({r / scale, n, h});
        return out;
    };
    const auto us = build({0.0, 0.3});
    const auto vs = build({0.15, 0.4});
    std::vector<ProbePair> probes;
    for (const auto& u : us)
        for (const auto& v : vs) probes.push_back({u, v});
    return probes;
}

McReport mc_symmetry_test(const AtomicSignedMeasure& mu1, const AtomicSignedMeasure& mu2, const XAutomorphism& alpha,
                          std::size_t samples, const std::vector<ProbePair>& probes, std::uint64_t seed,
                          const std::function<void(const XPoint&, const XPoint&)>& on_draw)
{
    require_compatible(mu1, mu2, alpha);
    if (samples == 0) throw InvalidInput("Monte-Carlo test needs at least one sample");
    if (probes.empty()) throw InvalidInput("Monte-Carlo test needs at least one probe");
    const auto& group = mu1.group();
    const auto& fin = group.finite();

    std::vector<YPoint> us;
    std::vector<YPoint> vs;
    std::vector<std::size_t> ui;
    std::vector<std::size_t> vi;
    auto intern = [](std::vector<YPoint>& pool, const YPoint& y) {
        const auto it = std::find(pool.begin(), pool.end(), y);
        if (it != pool.end()) return static_cast<std::size_t>(it - pool.begin());
        pool.push_back(y);
        return pool.size() - 1;
    };
    for (const auto& p : probes) {
        if (!group.contains(p.u) || !group.contains(p.v)) throw InvalidInput("probe outside the dual group");
        ui.push_back(intern(us, p.u));
        vi.push_back(intern(vs, p.v));
    }

    const Residue lcm = fin.exponent_lcm();
    std::vector<Complex> roots(static_cast<std::size_t>(lcm));
    for (Residue k = 0; k < lcm; ++k) roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / lcm);
    auto character = [&](const XPoint& x, const YPoint& y) {
        const Complex e = std::polar(1.0, x.t * y.s) * roots[fin.phase_numerator(y.h, x.g)];
        return (x.m & y.n) ? -e : e;
    };

    const MeasureSampler sampler1(mu1);
    const MeasureSampler sampler2(mu2);
    std::seed_seq seq1{seed, std::uint64_t{1}};
    std::seed_seq seq2{seed, std::uint64_t{2}};
    std::mt19937_64 rng1(seq1);
    std::mt19937_64 rng2(seq2);

    std::vector<Complex> acc(probes.size());
    std::vector<Complex> pu(us.size());
    std::vector<Complex> dv(vs.size());
    for (std::size_t i = 0; i < samples; ++i) {
        const XPoint x1 = sampler1(rng1);
        const XPoint x2 = sampler2(rng2);
        if (on_draw) on_draw(x1, x2);
        const XPoint l1 = group.add(x1, x2);
        const XPoint l2 = group.add(x1, alpha.apply(x2));
        for (std::size_t k = 0; k < us.size(); ++k) pu[k] = character(l1, us[k]);
        // (L2, v) - (-L2, v) = 2i Im (L2, v)
        for (std::size_t k = 0; k < vs.size(); ++k) dv[k] = Complex(0.0, 2.0 * character(l2, vs[k]).imag());
        for (std::size_t p = 0; p < probes.size(); ++p) acc[p] += pu[ui[p]] * dv[vi[p]];
    }

    McReport report;
    report.samples = samples;
    report.probes = probes.size();
    for (const auto& a : acc) report.statistic = std::max(report.statistic, std::abs(a) / static_cast<double>(samples));
    report.threshold = 4.0 / std::sqrt(static_cast<double>(samples));
    report.pass = report.statistic <= report.threshold;
    return report;
}

double finite_exact_check(const AtomicSignedMeasure& omega1, const AtomicSignedMeasure& omega2,
                          const XAutomorphism& alpha)
{
    require_compatible(omega1, omega2, alpha);
    if (!omega1.is_finite_supported() || !omega2.is_finite_supported())
        throw InvalidInput("finite_exact_check needs measures supported on Z(2) x G");
    const FiniteTables tab(alpha);
    const auto v1 = slice(CharacteristicFunction(omega1), 0.0, tab.order);
    const auto v2 = slice(CharacteristicFunction(omega2), 0.0, tab.order);
    return finite_kernel(tab, v1, v2, v1, v2);
}

AtomicSignedMeasure z2_measure(double d, const AmbientGroup& group)
{
    const auto zero = group.finite().zero();
    return {group, {{0.5 * (1.0 + d), {}, 0, zero}, {0.5 * (1.0 - d), {}, 1, zero}}};
}

namespace {

struct ProbeValues {
    std::vector<Complex> even1, even2, odd1, odd2;
};

std::optional<DeltaRelation> fit(const std::vector<Complex>& even_num, const std::vector<Complex>& even_den,
                                 const std::vector<Complex>& odd_num, const std::vector<Complex>& odd_den, double tol)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < odd_den.size(); ++k)
        if (std::abs(odd_den[k]) > std::abs(odd_den[best])) best = k;
    if (std::abs(odd_den[best]) < kVanishingThreshold)
        throw HypothesisViolation("delta_relation: vanishing characteristic function on the odd characters");
    const double d = (odd_num[best] / odd_den[best]).real();

    double residual = 0.0;
    for (std::size_t k = 0; k < even_num.size(); ++k) residual = std::max(residual, std::abs(even_num[k] - even_den[k]));
    for (std::size_t k = 0; k < odd_num.size(); ++k) residual = std::max(residual, std::abs(odd_num[k] - d * odd_den[k]));
    if (residual > tol || std::abs(d) > 1.0 + tol) return std::nullopt;
    DeltaRelation r;
    r.d = std::clamp(d, -1.0, 1.0);
    r.residual = residual;
    return r;
}

}  // namespace

DeltaRelation delta_relation(const AtomicSignedMeasure& tau1, const AtomicSignedMeasure& tau2, double tol)
{
    if (!(tau1.group() == tau2.group())) throw InvalidInput("delta_relation: measures on different groups");
    const double scale = std::sqrt(std::max({tau1.max_sigma(), tau2.max_sigma(), 1e-300}));
    const double unit = scale > 1e-150 ? 1.0 / scale : 1.0;
    const std::size_t order = tau1.group().finite().cardinality();
    const CharacteristicFunction f1(tau1);
    const CharacteristicFunction f2(tau2);

    ProbeValues v;
    for (double r : {0.0, 0.25, -0.5, 1.0, -1.5}) {
        const double s = r * unit;
        for (std::size_t h = 0; h < order; ++h) {
            v.even1.push_back(f1.at(s, 0, h));
            v.even2.push_back(f2.at(s, 0, h));
            v.odd1.push_back(f1.at(s, 1, h));
            v.odd2.push_back(f2.at(s, 1, h));
        }
    }

    const auto first = fit(v.even1, v.even2, v.odd1, v.odd2, tol);
    const auto second = fit(v.even2, v.even1, v.odd2, v.odd1, tol);
    if (first) {
        DeltaRelation r = *first;
        r.branch = DeltaBranch::Tau1EqTau2ConvDelta;
        r.tie = second.has_value();
        return r;
    }
    if (second) {
        DeltaRelation r = *second;
        r.branch = DeltaBranch::Tau2EqTau1ConvDelta;
        return r;
    }
    return {};
}

const char* to_string(DeltaBranch branch)
{
    switch (branch) {
    case DeltaBranch::Tau1EqTau2ConvDelta: return "tau1 = tau2 * delta";
    case DeltaBranch::Tau2EqTau1ConvDelta: return "tau2 = tau1 * delta";
    case DeltaBranch::Neither: return "neither";
    }
    return "neither";
}

}  // namespace lca
