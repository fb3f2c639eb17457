#include <doctest.h>

#include <random>

#include "lca/error.hpp"
#include "lca/theta.hpp"
#include "oracles.hpp"

using namespace lca;

TEST_CASE("membership examples")
{
    CHECK(is_in_theta({1.0, 1.0, 0.0, 0.0, 0.5}));
    CHECK(is_in_theta({2.0, 1.0, 0.0, 0.0, 0.70}));
    CHECK_FALSE(is_in_theta({2.0, 1.0, 0.0, 0.0, 0.72}));
    CHECK_FALSE(is_in_theta({1.0, 2.0, 0.0, 0.0, 0.1}));
    CHECK(is_in_theta({2.0, 1.0, 0.0, 0.0, -0.70}));
    CHECK_FALSE(is_in_theta({1.0, 1.0, 0.0, 0.5, 0.5}));
    CHECK_FALSE(is_in_theta({1.0, 1.0, 0.0, 0.0, 1.01}));
    CHECK(is_in_theta({0.0, 0.0, 1.0, 1.0, -1.0}));
    CHECK_FALSE(is_in_theta({2.0, 1.0, 0.0, 0.0, 0.0}));
}

TEST_CASE("boundary verdict")
{
    const ThetaParams p{2.0, 1.0, 0.0, 0.0, 0.0};
    const double rho = rho_extremal(p);
    CHECK(rho == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    auto at = [&](double k) {
        auto q = p;
        q.kappa = k;
        return theta_membership(q);
    };
    CHECK(at(rho).in());
    CHECK(at(rho).verdict == ThetaVerdict::Boundary);
    CHECK_FALSE(at(rho * (1.0 + 1e-6)).in());
    CHECK(at(rho * (1.0 - 1e-6)).verdict == ThetaVerdict::In);
    CHECK(at(0.7071067).in());
    CHECK_FALSE(at(0.7071069).in());
    CHECK(theta_membership({1.0, 1.0, 0.0, 0.0, 1.0}).verdict == ThetaVerdict::Boundary);
}

TEST_CASE("extremal rho")
{
    CHECK(rho_extremal({2.0, 1.0, 0.0, 0.0, 1.0}) == doctest::Approx(std::sqrt(0.5)));
    CHECK(rho_extremal({3.0, 1.5, 0.7, 0.7, 1.0}) == doctest::Approx(std::sqrt(0.5)));
    CHECK(rho_extremal({2.0, 1.0, 0.0, 2.0, 1.0}) == doctest::Approx(two_term_bound(2.0, 0.0, 1.0, 2.0)));
    CHECK_THROWS_AS(rho_extremal({1.0, 1.0, 0.0, 0.0, 1.0}), InvalidInput);
}

TEST_CASE("measure form")
{
    const auto point_like = theta_to_measure({1.5, 1.5, 0.3, 0.3, 1.0});
    REQUIRE(point_like.terms().size() == 1);
    CHECK(point_like.terms()[0].m == 0);
    CHECK(point_like.terms()[0].atom == RealAtom{1.5, 0.3});

    const ThetaParams p{2.0, 1.0, 0.5, -0.5, 0.3};
    const auto mu = theta_to_measure(p);
    for (double s = -2.0; s <= 2.0; s += 0.125) {
        CHECK(std::abs(char_fn(mu, {s, 0, {}}) - std::exp(Complex(-2.0 * s * s, 0.5 * s))) < 1e-15);
        CHECK(std::abs(char_fn(mu, {s, 1, {}}) - 0.3 * std::exp(Complex(-1.0 * s * s, -0.5 * s))) < 1e-15);
        CHECK(std::abs(theta_char(p, s, 1) - char_fn(mu, {s, 1, {}})) < 1e-15);
    }
    CHECK(measure_to_theta(mu) == p);
    CHECK(measure_to_theta(dirac(real_z2_group(), real_z2_group().zero())) == ThetaParams{0.0, 0.0, 0.0, 0.0, 1.0});
    const AtomicSignedMeasure coin(real_z2_group(), {{0.5, {}, 0, {}}, {0.5, {}, 1, {}}});
    CHECK_THROWS_AS(measure_to_theta(coin), InvalidInput);
    CHECK_THROWS_AS(measure_to_theta(gaussian(real_z2_group(), 1.0, 0.0).plus(gaussian(real_z2_group(), 2.0, 0.0)).scaled(0.5)),
                    InvalidInput);
}

TEST_CASE("property: measure round trip")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ThetaParams p{0.1 + 3.9 * u(rng), 0.0, 6.0 * u(rng) - 3.0, 6.0 * u(rng) - 3.0, 2.0 * u(rng) - 1.0};
        p.sigma_p = p.sigma * u(rng);
        if (p.kappa == 0.0) continue;
        CHECK(measure_to_theta(theta_to_measure(p)) == p);
    }
}

TEST_CASE("equal-scale members factor through Z(2)")
{
    const ThetaParams p{1.2, 1.2, 0.4, 0.4, -0.6};
    const auto mu = theta_to_measure(p);
    const AtomicSignedMeasure z2(real_z2_group(), {{0.2, {}, 0, {}}, {0.8, {}, 1, {}}});
    CHECK(term_distance(mu, convolve(gaussian(real_z2_group(), 1.2, 0.4), z2)) < 1e-15);
}

TEST_CASE("signed lambda")
{
    const auto lam = lambda_signed(2.0, 0.0, 1.0, 0.0);
    CHECK(term_distance(lam, theta_to_measure({2.0, 1.0, 0.0, 0.0, 1.0})) == 0.0);
    CHECK(lam.total_mass() == doctest::Approx(1.0));
    CHECK(is_distribution(lam).verdict == Verdict::No);
    CHECK_FALSE(oracle::distribution_by_grid(lam));
    CHECK_THROWS_AS(lambda_signed(1.0, 0.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("pi measures")
{
    CHECK(term_distance(PiMeasure(1.0).to_measure(), dirac(real_z2_group(), real_z2_group().zero())) == 0.0);
    CHECK(PiMeasure(1.0).inverse().c() == 1.0);

    const PiMeasure half(0.5);
    const auto m = pi_to_measure(half);
    const auto mi = pi_to_measure(pi_invert(half));
    CHECK(term_distance(m, AtomicSignedMeasure(real_z2_group(), {{0.75, {}, 0, {}}, {0.25, {}, 1, {}}})) == 0.0);
    CHECK(term_distance(mi, AtomicSignedMeasure(real_z2_group(), {{1.5, {}, 0, {}}, {-0.5, {}, 1, {}}})) == 0.0);
    CHECK(term_distance(convolve(m, mi), dirac(real_z2_group(), real_z2_group().zero())) == 0.0);
    CHECK(half.is_distribution());
    CHECK_FALSE(half.inverse().is_distribution());
    CHECK_THROWS_AS(PiMeasure(0.0), InvalidInput);
}

TEST_CASE("property: the pi group")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double c1 = u(rng);
        const double c2 = u(rng);
        if (c1 == 0.0 || c2 == 0.0) continue;
        const PiMeasure p1(c1);
        const PiMeasure p2(c2);
        const auto prod = convolve(p1.to_measure(), p2.to_measure());
        CHECK(std::abs(char_fn(prod, {0.0, 1, {}}).real() - c1 * c2) < 1e-12);
        CHECK(term_distance(prod, p1.compose(p2).to_measure()) < 1e-12);
        if (std::abs(c1) != 1.0) CHECK(p1.is_distribution() != p1.inverse().is_distribution());
        CHECK((p1.is_distribution() || p1.inverse().is_distribution()));
        CHECK(p1.is_distribution() == is_distribution(p1.to_measure()).is_yes());
    }
}

TEST_CASE("property: analytic membership matches the density grid")
{
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        ThetaParams p{0.05 + 3.95 * u(rng), 0.0, 6.0 * u(rng) - 3.0, 6.0 * u(rng) - 3.0, 0.0};
        p.sigma_p = p.sigma * (0.02 + 0.96 * u(rng));
        const double rho = std::exp(-oracle::log_max_density_ratio(p.sigma, p.m, p.sigma_p, p.m_p));
        p.kappa = (2.4 * u(rng) - 1.2) * rho;
        if (std::abs(std::abs(p.kappa) - rho) <= 1e-9 * rho) continue;
        const bool grid = oracle::theta_by_density_grid(p);
        CHECK(is_in_theta(p) == grid);
        CHECK(is_distribution(theta_to_measure(p)).is_yes() == grid);
        ++compared;
    }
    CHECK(compared > 190);
}
