#pragma once

// Independent reference computations. Nothing here calls into the library's
// numerics; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <tuple>
#include <numbers>
#include <random>
#include <vector>

#include "lca/measures.hpp"
#include "lca/structure.hpp"
#include "lca/theta.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline cplx character(const std::vector<std::int64_t>& orders, const std::vector<std::int64_t>& h,
                      const std::vector<std::int64_t>& g)
{
    double angle = 0.0;
    for (std::size_t k = 0; k < orders.size(); ++k)
        angle += 2.0 * std::numbers::pi * static_cast<double>(g[k] * h[k] % orders[k]) / static_cast<double>(orders[k]);
    return {std::cos(angle), std::sin(angle)};
}

// Fourier transform of a finite Gaussian/point mixture, straight from the definition.
inline cplx char_fn(const lca::AtomicSignedMeasure& mu, double s, int n, const std::vector<std::int64_t>& h)
{
    const auto& orders = mu.group().finite().cyclic_orders();
    cplx total = 0.0;
    for (const auto& t : mu.terms()) {
        const cplx real_part = std::exp(cplx(-t.atom.sigma * s * s, t.atom.shift * s));
        const double sign = (t.m == 1 && n == 1) ? -1.0 : 1.0;
        total += t.c * sign * real_part * character(orders, h, t.g.coords);
    }
    return total;
}

inline double gauss(double sigma, double shift, double t)
{
    return std::exp(-(t - shift) * (t - shift) / (4.0 * sigma)) / (2.0 * std::sqrt(std::numbers::pi * sigma));
}

template <class F>
double golden_max(F f, double lo, double hi, int iters = 200)
{
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < iters && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++i) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

template <class F>
double grid_then_golden_max(F f, double lo, double hi, int points = 4001)
{
    double best_t = lo;
    double best = f(lo);
    const double step = (hi - lo) / (points - 1);
    for (int i = 1; i < points; ++i) {
        const double t = lo + step * i;
        const double v = f(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return std::max(best, golden_max(f, best_t - step, best_t + step));
}

// Largest log of rho_{s',m'}(t) / rho_{s,m}(t): gamma_{s,m} - k gamma_{s',m'} is a measure
// iff log k + this <= 0. Found numerically on a window around both centers.
inline double log_max_density_ratio(double sigma, double m, double sigma_p, double m_p)
{
    auto log_ratio = [&](double t) {
        return -(t - m_p) * (t - m_p) / (4.0 * sigma_p) + (t - m) * (t - m) / (4.0 * sigma) +
               0.5 * std::log(sigma / sigma_p);
    };
    // The maximiser solves a linear equation; the window below always contains it.
    const double spread = std::abs(m - m_p) * (sigma + sigma_p) / (sigma - sigma_p) + 10.0 * std::sqrt(sigma);
    const double center = 0.5 * (m + m_p);
    return grid_then_golden_max(log_ratio, center - spread, center + spread);
}

inline bool theta_by_density_grid(const lca::ThetaParams& p)
{
    if (p.sigma == p.sigma_p) return p.m == p.m_p && std::abs(p.kappa) <= 1.0;
    if (!(0.0 < p.sigma_p && p.sigma_p < p.sigma)) return false;
    if (p.kappa == 0.0) return false;
    return std::log(std::abs(p.kappa)) + log_max_density_ratio(p.sigma, p.m, p.sigma_p, p.m_p) <= 0.0;
}

// Minimum of a finite mixture's continuous density on one coset, normalised by the
// positive part so that tails do not hide the sign.
inline double min_normalised_density(const lca::AtomicSignedMeasure& mu, int m, const std::vector<std::int64_t>& g)
{
    std::vector<lca::MeasureTerm> terms;
    for (const auto& t : mu.terms())
        if (t.m == m && t.g.coords == g && t.atom.sigma > 0.0) terms.push_back(t);
    if (terms.empty()) return 0.0;
    double lo = terms.front().atom.shift;
    double hi = lo;
    double smax = 0.0;
    for (const auto& t : terms) {
        lo = std::min(lo, t.atom.shift);
        hi = std::max(hi, t.atom.shift);
        smax = std::max(smax, t.atom.sigma);
    }
    lo -= 40.0 * std::sqrt(smax);
    hi += 40.0 * std::sqrt(smax);
    auto ratio = [&](double t) {
        double pos = 0.0;
        double all = 0.0;
        for (const auto& term : terms) {
            const double v = term.c * gauss(term.atom.sigma, term.atom.shift, t);
            all += v;
            if (v > 0.0) pos += v;
        }
        return pos > 0.0 ? all / pos : (all < 0.0 ? -1.0 : 0.0);
    };
    return -grid_then_golden_max([&](double t) { return -ratio(t); }, lo, hi, 20001);
}

inline bool distribution_by_grid(const lca::AtomicSignedMeasure& mu)
{
    const auto& fin = mu.group().finite();
    for (const auto& t : mu.terms())
        if (t.atom.sigma == 0.0 && t.c < 0.0) return false;
    for (int m = 0; m < 2; ++m)
        for (const auto& g : fin.elements())
            if (min_normalised_density(mu, m, g.coords) < 0.0) return false;
    return true;
}

// Rigidity by brute force: does any c in the sweep give gamma' in Theta and omega * pi_{1/c}
// with nonnegative weights?
inline std::vector<double> rigidity_sweep()
{
    std::vector<double> cs;
    for (int k = 1; k <= 500; ++k) cs.push_back(k / 501.0);
    for (int k = 1; k <= 500; ++k) cs.push_back(1.0 + 9.0 * k / 500.0);
    return cs;
}

inline bool flexible_by_sweep(const lca::ThetaParams& gamma, const std::vector<lca::Z2Weights>& w)
{
    const double log_bound = -log_max_density_ratio(gamma.sigma, gamma.m, gamma.sigma_p, gamma.m_p);
    for (double c : rigidity_sweep()) {
        if (std::log(std::abs(gamma.kappa) * c) > log_bound + 1e-12) continue;
        const double d = 1.0 / c;
        bool ok = true;
        for (const auto& x : w) {
            const double a = 0.5 * (1.0 + d) * x.a + 0.5 * (1.0 - d) * x.b;
            const double b = 0.5 * (1.0 + d) * x.b + 0.5 * (1.0 - d) * x.a;
            if (a < -1e-15 || b < -1e-15) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

// Largest field-wise gap between two term lists, after sorting both by (m, g, sigma, shift).
// Infinity when the supports differ in size.
inline double term_list_gap(const lca::AtomicSignedMeasure& a, const lca::AtomicSignedMeasure& b)
{
    auto sorted = [](std::vector<lca::MeasureTerm> t) {
        std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) {
            return std::tie(x.m, x.g, x.atom.sigma, x.atom.shift) < std::tie(y.m, y.g, y.atom.sigma, y.atom.shift);
        });
        return t;
    };
    const auto ta = sorted(a.terms());
    const auto tb = sorted(b.terms());
    if (ta.size() != tb.size()) return std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (ta[i].m != tb[i].m || ta[i].g != tb[i].g) return std::numeric_limits<double>::infinity();
        gap = std::max({gap, std::abs(ta[i].c - tb[i].c), std::abs(ta[i].atom.sigma - tb[i].atom.sigma),
                        std::abs(ta[i].atom.shift - tb[i].atom.shift)});
    }
    return gap;
}

inline std::vector<double> dirichlet(std::mt19937_64& rng, std::size_t k)
{
    std::gamma_distribution<double> g(1.0, 1.0);
    std::vector<double> out(k);
    double sum = 0.0;
    for (auto& x : out) sum += (x = g(rng));
    for (auto& x : out) x /= sum;
    return out;
}

}  // namespace oracle
