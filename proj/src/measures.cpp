#include "lca/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "lca/error.hpp"

namespace lca {

namespace {

using TermKey = std::tuple<int, GroupElement, RealAtom>;

TermKey key_of(const MeasureTerm& t) { return {t.m, t.g, t.atom}; }

void require_same_group(const AtomicSignedMeasure& a, const AtomicSignedMeasure& b)
{
    if (!(a.group() == b.group())) throw InvalidInput("measures live on different ambient groups");
}

Complex real_factor(const RealAtom& atom, Complex s)
{
    return std::exp(-atom.sigma * s * s + Complex(0.0, atom.shift) * s);
}

Complex real_factor(const RealAtom& atom, double s)
{
    return std::polar(std::exp(-atom.sigma * s * s), atom.shift * s);
}

double log_gaussian_density(double sigma, double shift, double t)
{
    const double d = t - shift;
    return -0.5 * std::log(4.0 * std::numbers::pi * sigma) - d * d / (4.0 * sigma);
}

struct SignedGaussian {
    double c;
    double sigma;
    double shift;
};

/// (P - N) / P for the continuous part, evaluated in log space.
double normalized_density(const std::vector<SignedGaussian>& terms, double t)
{
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& term : terms)
        if (term.c > 0.0) top = std::max(top, std::log(term.c) + log_gaussian_density(term.sigma, term.shift, t));
    if (!std::isfinite(top)) return -std::numeric_limits<double>::infinity();
    double pos = 0.0;
    double neg = 0.0;
    for (const auto& term : terms) {
        const double w = std::exp(std::log(std::abs(term.c)) + log_gaussian_density(term.sigma, term.shift, t) - top);
        (term.c > 0.0 ? pos : neg) += w;
    }
    return 1.0 - neg / pos;
}

template <class F>
double golden_section_min(F&& f, double lo, double hi, int iterations = 200)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iterations && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

struct CosetMinimum {
    double t;
    double value;
};

/// Outward search for a point where the normalised density is negative.
std::optional<double> tail_witness(const std::vector<SignedGaussian>& terms, double start, double step, double direction)
{
    for (double d = step; d < 1e12 * step; d *= 2.0) {
        const double t = start + direction * d;
        if (normalized_density(terms, t) < 0.0) return t;
    }
    return std::nullopt;
}

CosetMinimum continuous_minimum(const std::vector<SignedGaussian>& terms)
{
    const bool any_negative = std::any_of(terms.begin(), terms.end(), [](const auto& x) { return x.c < 0.0; });
    if (!any_negative) return {terms.empty() ? 0.0 : terms.front().shift, 1.0};

    const bool any_positive = std::any_of(terms.begin(), terms.end(), [](const auto& x) { return x.c > 0.0; });
    if (!any_positive) return {terms.front().shift, -std::numeric_limits<double>::infinity()};

    // Two Gaussians of opposite sign: closed form.
    if (terms.size() == 2) {
        const auto& pos = terms[0].c > 0.0 ? terms[0] : terms[1];
        const auto& neg = terms[0].c > 0.0 ? terms[1] : terms[0];
        if (neg.sigma < pos.sigma) {
            const double t_star = (neg.shift * pos.sigma - pos.shift * neg.sigma) / (pos.sigma - neg.sigma);
            const double log_kappa = std::log(-neg.c / pos.c);
            const double log_bound = log_two_term_bound(pos.sigma, pos.shift, neg.sigma, neg.shift);
            return {t_star, 1.0 - std::exp(log_kappa - log_bound)};
        }
    }

    double sigma_max = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& x : terms) {
        sigma_max = std::max(sigma_max, x.sigma);
        lo = std::min(lo, x.shift);
        hi = std::max(hi, x.shift);
    }
    const double scale = std::sqrt(sigma_max);

    // Tails: at +inf (-inf) the largest-sigma term with the largest (smallest) shift dominates.
    for (double direction : {1.0, -1.0}) {
        double dominant_shift = direction > 0.0 ? -std::numeric_limits<double>::infinity()
                                                : std::numeric_limits<double>::infinity();
        for (const auto& x : terms)
            if (x.sigma == sigma_max)
                dominant_shift = direction > 0.0 ? std::max(dominant_shift, x.shift) : std::min(dominant_shift, x.shift);
        double tail_sum = 0.0;
        for (const auto& x : terms)
            if (x.sigma == sigma_max && x.shift == dominant_shift) tail_sum += x.c;
        if (tail_sum < 0.0) {
            const double start = direction > 0.0 ? hi : lo;
            if (auto t = tail_witness(terms, start, scale, direction)) return {*t, normalized_density(terms, *t)};
            return {start, -std::numeric_limits<double>::infinity()};
        }
    }

    lo -= 10.0 * scale;
    hi += 10.0 * scale;
    // Include the critical point of every (positive, narrower negative) pair.
    for (const auto& p : terms) {
        for (const auto& q : terms) {
            if (p.c > 0.0 && q.c < 0.0 && q.sigma < p.sigma) {
                const double t_star = (q.shift * p.sigma - p.shift * q.sigma) / (p.sigma - q.sigma);
                if (std::isfinite(t_star) && std::abs(t_star) < 1e8) {
                    lo = std::min(lo, t_star - scale);
                    hi = std::max(hi, t_star + scale);
                }
            }
        }
    }

    constexpr int kGrid = 4096;
    const double step = (hi - lo) / (kGrid - 1);
    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double v = normalized_density(terms, lo + step * i);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, kGrid - 1);
    auto f = [&](double t) { return normalized_density(terms, t); };
    const double t_min = golden_section_min(f, a, b);
    const double v_min = f(t_min);
    if (v_min < best_value) return {t_min, v_min};
    return {lo + step * best, best_value};
}

}  // namespace

// ---------------------------------------------------------------------------

AtomicSignedMeasure::AtomicSignedMeasure(AmbientGroup group, std::vector<MeasureTerm> terms)
    : group_(std::move(group))
{
    std::map<TermKey, std::pair<double, double>> merged;  // sum, sum of magnitudes
    for (auto& term : terms) {
        if (!(term.atom.sigma >= 0.0) || !std::isfinite(term.atom.sigma))
            throw InvalidInput("Gaussian scale sigma must be finite and >= 0");
        if (!std::isfinite(term.atom.shift) || !std::isfinite(term.c))
            throw InvalidInput("measure term has a non-finite coefficient or shift");
        if (term.m != 0 && term.m != 1) throw InvalidInput("Z(2) coordinate must be 0 or 1");
        if (!group_.finite().contains(term.g)) throw InvalidInput("measure term lies outside the finite part G");
        auto& slot = merged[key_of(term)];
        slot.first += term.c;
        slot.second += std::abs(term.c);
    }
    terms_.reserve(merged.size());
    for (auto& [key, sums] : merged) {
        const double c = sums.first;
        if (c == 0.0 || std::abs(c) <= kCoefficientDropTol * sums.second) continue;
        terms_.push_back({c, std::get<2>(key), std::get<0>(key), std::get<1>(key)});
    }
}

double AtomicSignedMeasure::total_mass() const
{
    double mass = 0.0;
    for (const auto& t : terms_) mass += t.c;
    return mass;
}

double AtomicSignedMeasure::max_sigma() const
{
    double s = 0.0;
    for (const auto& t : terms_) s = std::max(s, t.atom.sigma);
    return s;
}

std::optional<double> AtomicSignedMeasure::min_positive_sigma() const
{
    std::optional<double> s;
    for (const auto& t : terms_)
        if (t.atom.sigma > 0.0 && (!s || t.atom.sigma < *s)) s = t.atom.sigma;
    return s;
}

bool AtomicSignedMeasure::is_finite_supported() const
{
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.atom.sigma == 0.0 && t.atom.shift == 0.0; });
}

AtomicSignedMeasure AtomicSignedMeasure::scaled(double k) const
{
    auto terms = terms_;
    for (auto& t : terms) t.c *= k;
    return {group_, std::move(terms)};
}

AtomicSignedMeasure AtomicSignedMeasure::plus(const AtomicSignedMeasure& other) const
{
    require_same_group(*this, other);
    auto terms = terms_;
    terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
    return {group_, std::move(terms)};
}

AtomicSignedMeasure dirac(const AmbientGroup& group, const XPoint& x)
{
    if (!group.contains(x)) throw InvalidInput("dirac: point outside the ambient group");
    return {group, {{1.0, {0.0, x.t}, x.m, x.g}}};
}

AtomicSignedMeasure gaussian(const AmbientGroup& group, double sigma, double shift, int m,
                             std::optional<GroupElement> g, double c)
{
    return {group, {{c, {sigma, shift}, m, g ? *g : group.finite().zero()}}};
}

AtomicSignedMeasure convolve(const AtomicSignedMeasure& mu, const AtomicSignedMeasure& nu)
{
    require_same_group(mu, nu);
    const auto& fin = mu.group().finite();
    std::vector<MeasureTerm> terms;
    terms.reserve(mu.terms().size() * nu.terms().size());
    for (const auto& a : mu.terms())
        for (const auto& b : nu.terms())
            terms.push_back({a.c * b.c,
                             {a.atom.sigma + b.atom.sigma, a.atom.shift + b.atom.shift},
                             (a.m + b.m) % 2,
                             fin.add(a.g, b.g)});
    return {mu.group(), std::move(terms)};
}

AtomicSignedMeasure translate(const AtomicSignedMeasure& mu, const XPoint& x)
{
    return convolve(mu, dirac(mu.group(), x));
}

AtomicSignedMeasure finite_marginal(const AtomicSignedMeasure& mu)
{
    auto terms = mu.terms();
    for (auto& t : terms) t.atom = {};
    return {mu.group(), std::move(terms)};
}

double term_distance(const AtomicSignedMeasure& a, const AtomicSignedMeasure& b)
{
    require_same_group(a, b);
    std::map<TermKey, double> diff;
    for (const auto& t : a.terms()) diff[key_of(t)] += t.c;
    for (const auto& t : b.terms()) diff[key_of(t)] -= t.c;
    double d = 0.0;
    for (const auto& [key, c] : diff) d = std::max(d, std::abs(c));
    return d;
}

Complex char_fn(const AtomicSignedMeasure& mu, const YPoint& y)
{
    if (!mu.group().contains(y)) throw InvalidInput("char_fn: character outside the dual group");
    const auto& fin = mu.group().finite();
    Complex sum = 0.0;
    for (const auto& t : mu.terms()) {
        const double sign = (t.m * y.n) % 2 == 0 ? 1.0 : -1.0;
        sum += t.c * sign * real_factor(t.atom, y.s) * fin.eval_character(y.h, t.g);
    }
    return sum;
}

Complex char_fn(const AtomicSignedMeasure& mu, Complex s, int n, const DualCharacter& h)
{
    const auto& fin = mu.group().finite();
    if (!fin.contains(h) || (n != 0 && n != 1)) throw InvalidInput("char_fn: character outside the dual group");
    Complex sum = 0.0;
    for (const auto& t : mu.terms()) {
        const double sign = (t.m * n) % 2 == 0 ? 1.0 : -1.0;
        sum += t.c * sign * real_factor(t.atom, s) * fin.eval_character(h, t.g);
    }
    return sum;
}

CharacteristicFunction::CharacteristicFunction(const AtomicSignedMeasure& mu) : group_(mu.group())
{
    const auto& fin = group_.finite();
    const auto chars = fin.characters();
    const std::size_t width = 2 * chars.size();
    std::map<RealAtom, std::size_t> index;
    for (const auto& t : mu.terms()) {
        auto [it, inserted] = index.try_emplace(t.atom, atoms_.size());
        if (inserted) {
            atoms_.push_back(t.atom);
            transforms_.emplace_back(width, Complex{});
            masses_.push_back(0.0);
        }
        masses_[it->second] += std::abs(t.c);
        auto& row = transforms_[it->second];
        for (std::size_t hi = 0; hi < chars.size(); ++hi) {
            const Complex v = t.c * fin.eval_character(chars[hi], t.g);
            row[hi] += v;
            row[chars.size() + hi] += t.m == 0 ? v : -v;
        }
    }
}

Complex CharacteristicFunction::at(double s, int n, std::size_t h_index) const
{
    const std::size_t offset = static_cast<std::size_t>(n) * group_.finite().cardinality() + h_index;
    Complex sum = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) sum += real_factor(atoms_[k], s) * transforms_[k][offset];
    return sum;
}

double CharacteristicFunction::magnitude(double s) const
{
    double total = 0.0;
    for (std::size_t k = 0; k < atoms_.size(); ++k) total += masses_[k] * std::exp(-atoms_[k].sigma * s * s);
    return total;
}

Complex CharacteristicFunction::operator()(const YPoint& y) const
{
    if (!group_.contains(y)) throw InvalidInput("char_fn: character outside the dual group");
    return at(y.s, y.n, group_.finite().index_of(GroupElement{y.h.coords}));
}

double gaussian_density(double sigma, double shift, double t)
{
    return std::exp(log_gaussian_density(sigma, shift, t));
}

DensityProfile density_profile(const AtomicSignedMeasure& mu, int m, const GroupElement& g, double t)
{
    DensityProfile out;
    for (const auto& term : mu.terms()) {
        if (term.m != m || !(term.g == g)) continue;
        if (term.atom.sigma > 0.0)
            out.density += term.c * gaussian_density(term.atom.sigma, term.atom.shift, t);
        else
            out.point_masses.emplace_back(term.atom.shift, term.c);
    }
    return out;
}

double log_two_term_bound(double sigma, double shift, double sigma_p, double shift_p)
{
    if (!(0.0 < sigma_p && sigma_p < sigma)) throw InvalidInput("two_term_bound requires 0 < sigma' < sigma");
    const double d = shift - shift_p;
    return 0.5 * std::log(sigma_p / sigma) - d * d / (4.0 * (sigma - sigma_p));
}

double two_term_bound(double sigma, double shift, double sigma_p, double shift_p)
{
    return std::exp(log_two_term_bound(sigma, shift, sigma_p, shift_p));
}

DistributionVerdict is_distribution(const AtomicSignedMeasure& mu, double tol)
{
    DistributionVerdict worst;
    worst.g = mu.group().finite().zero();
    auto consider = [&](double value, int m, const GroupElement& g, double t) {
        if (value < worst.min_normalized) {
            worst.min_normalized = value;
            worst.m = m;
            worst.g = g;
            worst.t = t;
        }
    };

    // Terms are sorted by (m, g, atom), so cosets are contiguous.
    const auto& terms = mu.terms();
    for (std::size_t begin = 0; begin < terms.size();) {
        std::size_t end = begin;
        while (end < terms.size() && terms[end].m == terms[begin].m && terms[end].g == terms[begin].g) ++end;
        std::vector<SignedGaussian> continuous;
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = terms[i];
            if (t.atom.sigma == 0.0)
                consider(t.c >= 0.0 ? 1.0 : t.c, t.m, t.g, t.atom.shift);
            else
                continuous.push_back({t.c, t.atom.sigma, t.atom.shift});
        }
        if (!continuous.empty()) {
            const auto min = continuous_minimum(continuous);
            consider(min.value, terms[begin].m, terms[begin].g, min.t);
        }
        begin = end;
    }

    if (worst.min_normalized < -tol)
        worst.verdict = Verdict::No;
    else if (worst.min_normalized <= tol)
        worst.verdict = Verdict::Boundary;
    else
        worst.verdict = Verdict::Yes;
    return worst;
}

bool is_probability(const AtomicSignedMeasure& mu, double tol)
{
    return std::abs(mu.total_mass() - 1.0) <= std::max(tol, 1e-12) && is_distribution(mu, tol).verdict != Verdict::No;
}

// ---------------------------------------------------------------------------

MeasureSampler::MeasureSampler(const AtomicSignedMeasure& mu) : group_(mu.group())
{
    if (is_distribution(mu).verdict == Verdict::No) throw InvalidInput("cannot sample: measure is not a distribution");
    if (!(mu.total_mass() > 0.0)) throw InvalidInput("cannot sample: measure has zero mass");

    auto accumulate = [](const std::vector<Component>& comps) {
        std::vector<double> cumulative;
        double acc = 0.0;
        for (const auto& c : comps) cumulative.push_back(acc += c.c);
        return cumulative;
    };

    const auto& terms = mu.terms();
    double acc = 0.0;
    for (std::size_t begin = 0; begin < terms.size();) {
        std::size_t end = begin;
        while (end < terms.size() && terms[end].m == terms[begin].m && terms[end].g == terms[begin].g) ++end;
        Coset coset{terms[begin].m, terms[begin].g, 0.0, 0.0, {}, {}, {}, 0.0, {}, {}};
        for (std::size_t i = begin; i < end; ++i) {
            const auto& t = terms[i];
            if (t.atom.sigma == 0.0) {
                if (t.c > 0.0) {
                    coset.points.push_back({t.c, t.atom});
                    coset.point_mass += t.c;
                }
            } else {
                coset.continuous_mass += t.c;
                if (t.c > 0.0) {
                    coset.positive.push_back({t.c, t.atom});
                    coset.positive_mass += t.c;
                } else {
                    coset.negative.push_back({t.c, t.atom});
                }
            }
        }
        coset.continuous_mass = std::max(coset.continuous_mass, 0.0);
        coset.point_cumulative = accumulate(coset.points);
        coset.positive_cumulative = accumulate(coset.positive);
        const double weight = coset.point_mass + coset.continuous_mass;
        if (weight > 0.0) {
            cosets_.push_back(std::move(coset));
            coset_cumulative_.push_back(acc += weight);
        }
        begin = end;
    }
    if (cosets_.empty()) throw InvalidInput("cannot sample: measure has zero mass");
}

namespace {

std::size_t pick_index(const std::vector<double>& cumulative, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(0.0, cumulative.back());
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), unit(rng));
    return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

}  // namespace

double MeasureSampler::sample_continuous(const Coset& coset, std::mt19937_64& rng) const
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const auto& comp = coset.positive[pick_index(coset.positive_cumulative, rng)];
        std::normal_distribution<double> normal(comp.atom.shift, std::sqrt(2.0 * comp.atom.sigma));
        const double t = normal(rng);
        if (coset.negative.empty()) return t;
        double pos = 0.0;
        for (const auto& p : coset.positive) pos += p.c * gaussian_density(p.atom.sigma, p.atom.shift, t);
        double neg = 0.0;
        for (const auto& q : coset.negative) neg -= q.c * gaussian_density(q.atom.sigma, q.atom.shift, t);
        if (!(pos > 0.0)) continue;
        if (unit(rng) * kEnvelopeScale * pos <= pos - neg) return t;
    }
    throw HypothesisViolation("rejection sampler exceeded its retry cap");
}

XPoint MeasureSampler::operator()(std::mt19937_64& rng) const
{
    const auto& coset = cosets_[pick_index(coset_cumulative_, rng)];
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double total = coset.point_mass + coset.continuous_mass;
    double t = 0.0;
    if (coset.positive.empty() || unit(rng) * total < coset.point_mass)
        t = coset.points[pick_index(coset.point_cumulative, rng)].atom.shift;
    else
        t = sample_continuous(coset, rng);
    return {t, coset.m, coset.g};
}

std::vector<XPoint> sample(const AtomicSignedMeasure& mu, std::uint64_t seed, std::size_t count)
{
    MeasureSampler sampler(mu);
    std::mt19937_64 rng(seed);
    std::vector<XPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sampler(rng));
    return out;
}

// ---------------------------------------------------------------------------

bool support_in_annihilator(const AtomicSignedMeasure& mu, const DualSubgroup& sub, double tol)
{
    const auto& group = mu.group();
    for (const auto& term : mu.terms()) {
        if (sub.real_line && (term.atom.sigma > 0.0 || std::abs(term.atom.shift) > tol)) return false;
        for (const auto& y : sub.generators) {
            if (term.atom.sigma > 0.0 && y.s != 0.0) return false;
            const XPoint x{term.atom.shift, term.m, term.g};
            if (std::abs(pair(group, x, y) - 1.0) > tol) return false;
        }
    }
    return true;
}

bool char_is_one_on(const AtomicSignedMeasure& mu, const DualSubgroup& sub, double tol)
{
    const auto& group = mu.group();
    std::vector<YPoint> probes{group.zero_character()};
    if (sub.real_line)
        for (double s : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.7}) probes.push_back({s, 0, group.finite().zero_character()});
    for (const auto& y : sub.generators) {
        YPoint multiple = group.zero_character();
        for (int k = 1; k <= 3; ++k) {
            multiple = group.add(multiple, y);
            probes.push_back(multiple);
            probes.push_back(group.neg(multiple));
        }
        for (const auto& z : sub.generators) probes.push_back(group.add(y, z));
    }
    for (const auto& y : probes)
        if (std::abs(char_fn(mu, y) - 1.0) > tol) return false;
    return true;
}

bool max_modulus_check(const AtomicSignedMeasure& mu, double r, const DualCharacter& h, int n,
                       int boundary_samples, double tol)
{
    if (boundary_samples < 1) throw InvalidInput("max_modulus_check needs at least one boundary sample");
    const auto zero_h = mu.group().finite().zero_character();
    double lhs = 0.0;
    double rhs = 0.0;
    for (int k = 0; k < boundary_samples; ++k) {
        const Complex s = std::polar(r, 2.0 * std::numbers::pi * k / boundary_samples);
        lhs = std::max(lhs, std::abs(char_fn(mu, s, n, h)));
        rhs = std::max(rhs, std::abs(char_fn(mu, s, 0, zero_h)));
    }
    return lhs <= rhs + tol * std::max(1.0, rhs);
}

}  // namespace lca
