#include <doctest.h>

#include <random>

#include "lca/error.hpp"
#include "lca/finite_abelian.hpp"
#include "oracles.hpp"

using namespace lca;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<Residue>> rows)
{
    const auto r = static_cast<Eigen::Index>(rows.size());
    IntMatrix m(r, r);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index k = 0;
        for (Residue v : row) m(i, k++) = v;
        ++i;
    }
    return m;
}

bool same_set(std::vector<GroupElement> a, std::vector<GroupElement> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace

TEST_CASE("group law on cyclic products")
{
    const FiniteAbelianGroup g35({3, 5});
    CHECK(g35.add(g35.element({1, 2}), g35.element({2, 4})) == g35.element({0, 1}));
    CHECK(g35.neg(g35.zero()) == g35.zero());
    const FiniteAbelianGroup z6({6});
    CHECK(z6.add(z6.element({4}), z6.element({5})) == z6.element({3}));
    CHECK(g35.element({4, -1}).coords == std::vector<Residue>{1, 4});
    CHECK(g35.cardinality() == 15);
    CHECK(g35.is_odd_order());
    CHECK_FALSE(z6.is_odd_order());
}

TEST_CASE("order of elements")
{
    const FiniteAbelianGroup z6({6});
    CHECK(z6.order_of(z6.element({2})) == 3);
    CHECK(z6.order_of(z6.zero()) == 1);
    const FiniteAbelianGroup g35({3, 5});
    CHECK(g35.order_of(g35.element({1, 1})) == 15);
    // brute force on every element
    for (const auto& g : g35.elements()) {
        Residue k = 1;
        while (g35.scale(k, g) != g35.zero()) ++k;
        CHECK(g35.order_of(g) == k);
    }
}

TEST_CASE("character values")
{
    const FiniteAbelianGroup z3({3});
    CHECK(std::abs(z3.eval_character(z3.character({0}), z3.element({1})) - Complex(1.0)) < 1e-15);
    const Complex expected = std::polar(1.0, 4.0 * std::numbers::pi / 3.0);
    CHECK(std::abs(z3.eval_character(z3.character({2}), z3.element({1})) - expected) < 1e-15);
    const FiniteAbelianGroup g35({3, 5});
    CHECK(std::abs(g35.eval_character(g35.character({0, 3}), g35.element({1, 0})) - Complex(1.0)) < 1e-15);

    for (const auto& h : g35.characters())
        for (const auto& g : g35.elements()) {
            const auto v = g35.eval_character(h, g);
            CHECK(std::abs(v - oracle::character(g35.cyclic_orders(), h.coords, g.coords)) < 1e-13);
            CHECK(std::abs(std::abs(v) - 1.0) < 1e-15);
        }
}

TEST_CASE("mismatched parents are rejected")
{
    const FiniteAbelianGroup z3({3});
    const FiniteAbelianGroup g35({3, 5});
    CHECK_THROWS_AS(z3.add(z3.element({1}), g35.element({1, 1})), InvalidInput);
    CHECK_THROWS_AS(z3.eval_character(g35.character({0, 1}), z3.element({1})), InvalidInput);
    CHECK_THROWS_AS(FiniteAbelianGroup({0}), InvalidInput);
}

TEST_CASE("character orthogonality")
{
    for (auto orders : {std::vector<Residue>{3}, std::vector<Residue>{3, 5}, std::vector<Residue>{9},
                        std::vector<Residue>{15, 15}, std::vector<Residue>{5, 5, 3}}) {
        const FiniteAbelianGroup g(orders);
        for (const auto& h : g.characters()) {
            Complex sum = 0.0;
            for (const auto& x : g.elements()) sum += g.eval_character(h, x);
            sum /= static_cast<double>(g.cardinality());
            const double expected = h == g.zero_character() ? 1.0 : 0.0;
            CHECK(std::abs(sum - expected) < 1e-12);
        }
    }
}

TEST_CASE("automorphism validity")
{
    const FiniteAbelianGroup z3({3});
    CHECK_NOTHROW(GroupAutomorphism(z3, mat({{2}})));
    CHECK_THROWS_AS(GroupAutomorphism(z3, mat({{3}})), InvalidInput);
    const FiniteAbelianGroup g35({3, 5});
    // a map Z(3) -> Z(5) that is not well defined
    CHECK_THROWS_AS(GroupAutomorphism(g35, mat({{1, 0}, {1, 1}})), InvalidInput);
    const FiniteAbelianGroup z39({3, 9});
    // 3 * Z(3) -> Z(9) is well defined, and the map stays bijective
    CHECK_NOTHROW(GroupAutomorphism(z39, mat({{1, 0}, {3, 1}})));
}

TEST_CASE("adjoint examples")
{
    const FiniteAbelianGroup z3({3});
    CHECK(adjoint(GroupAutomorphism::identity(z3)) == GroupAutomorphism::identity(z3));
    const GroupAutomorphism times2(z3, mat({{2}}));
    CHECK(adjoint(times2).matrix() == mat({{2}}));
    const FiniteAbelianGroup z33({3, 3});
    const GroupAutomorphism shear(z33, mat({{1, 1}, {0, 1}}));
    CHECK(adjoint(shear).matrix() == mat({{1, 0}, {1, 1}}));
}

TEST_CASE("adjoint pairing identity, exhaustive")
{
    struct Case {
        std::vector<Residue> orders;
        IntMatrix m;
    };
    const std::vector<Case> cases{{{3, 3}, mat({{1, 1}, {0, 1}})},
                                  {{3, 9}, mat({{1, 0}, {3, 1}})},
                                  {{9}, mat({{4}})},
                                  {{3, 5}, mat({{2, 0}, {0, 3}})}};
    for (const auto& c : cases) {
        const FiniteAbelianGroup g(c.orders);
        const GroupAutomorphism a(g, c.m);
        const auto adj = adjoint(a);
        CHECK(adjoint(adj) == a);
        for (const auto& h : g.characters())
            for (const auto& x : g.elements()) {
                const auto lhs = oracle::character(c.orders, a.apply_adjoint(h).coords, x.coords);
                const auto rhs = oracle::character(c.orders, h.coords, a.apply(x).coords);
                CHECK(std::abs(lhs - rhs) < 1e-12);
            }
    }
}

TEST_CASE("kernel of I + A")
{
    const FiniteAbelianGroup z3({3});
    CHECK(same_set(kernel_of_I_plus(GroupAutomorphism(z3, mat({{2}}))), z3.elements()));
    CHECK(same_set(kernel_of_I_plus(GroupAutomorphism::identity(z3)), {z3.zero()}));
    const FiniteAbelianGroup g35({3, 5});
    const GroupAutomorphism mixed(g35, mat({{2, 0}, {0, 2}}));
    const auto k = kernel_of_I_plus(mixed);
    CHECK(same_set(k, {g35.element({0, 0}), g35.element({1, 0}), g35.element({2, 0})}));
    CHECK(is_subgroup(g35, k));
}

TEST_CASE("restriction to minus identity")
{
    const FiniteAbelianGroup z9({9});
    const GroupAutomorphism times4(z9, mat({{4}}));
    const std::vector<GroupElement> k{z9.element({0}), z9.element({3}), z9.element({6})};
    CHECK_FALSE(restriction_is_minus_identity(times4, k));
    CHECK(restriction_is_minus_identity(GroupAutomorphism::minus_identity(z9), k));
    CHECK(restriction_is_minus_identity(times4, {z9.zero()}));
    CHECK_THROWS_AS(restriction_is_minus_identity(times4, {z9.element({1})}), InvalidInput);
}

TEST_CASE("property: kernels are subgroups, doubling is a bijection")
{
    std::mt19937_64 rng(20240601);
    const std::vector<std::vector<Residue>> shapes{{3}, {5}, {9}, {3, 3}, {3, 5}, {15}, {3, 9}};
    for (int trial = 0; trial < 60; ++trial) {
        const auto& orders = shapes[rng() % shapes.size()];
        const FiniteAbelianGroup g(orders);
        // diagonal automorphisms: units modulo each order
        IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(orders.size()), static_cast<Eigen::Index>(orders.size()));
        for (std::size_t i = 0; i < orders.size(); ++i) {
            Residue u;
            do u = static_cast<Residue>(rng() % static_cast<std::uint64_t>(orders[i]));
            while (std::gcd(u, orders[i]) != 1);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = u;
        }
        const GroupAutomorphism a(g, m);
        const auto k = kernel_of_I_plus(a);
        CHECK(is_subgroup(g, k));
        CHECK(restriction_is_minus_identity(a, k));

        std::vector<GroupElement> doubled;
        for (const auto& x : g.elements()) doubled.push_back(g.scale(2, x));
        CHECK(same_set(doubled, g.elements()));
    }
    const FiniteAbelianGroup g35({3, 5});
    CHECK(same_set(kernel_of_I_plus(GroupAutomorphism::minus_identity(g35)), g35.elements()));
}

TEST_CASE("element indexing round trip")
{
    const FiniteAbelianGroup g({3, 5, 3});
    for (std::size_t i = 0; i < g.cardinality(); ++i) CHECK(g.index_of(g.element_at(i)) == i);
}
