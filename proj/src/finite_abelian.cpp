#include "lca/finite_abelian.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "lca/error.hpp"

namespace lca {

namespace {

Residue reduce(Residue x, Residue n)
{
    Residue r = x % n;
    return r < 0 ? r + n : r;
}

GroupElement apply_matrix(const FiniteAbelianGroup& group, const IntMatrix& m, const GroupElement& g)
{
    const auto r = static_cast<Eigen::Index>(group.rank());
    Eigen::Map<const Eigen::Matrix<Residue, Eigen::Dynamic, 1>> x(g.coords.data(), r);
    const Eigen::Matrix<Residue, Eigen::Dynamic, 1> y = m * x;
    return group.element(std::vector<Residue>(y.data(), y.data() + r));
}

// (A g, h) = sum_k h_k sum_j A_kj g_j / n_k = sum_j g_j (sum_k A_kj h_k n_j / n_k) / n_j
IntMatrix adjoint_of(const std::vector<Residue>& n, const IntMatrix& a)
{
    const auto r = static_cast<Eigen::Index>(n.size());
    IntMatrix b(r, r);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index k = 0; k < r; ++k) b(j, k) = reduce(a(k, j) * n[j] / n[k], n[j]);
    return b;
}

}  // namespace

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<Residue> cyclic_orders)
    : orders_(std::move(cyclic_orders))
{
    for (Residue n : orders_) {
        if (n < 1)
            throw InvalidInput("cyclic order must be >= 1, got " + std::to_string(n));
        cardinality_ *= static_cast<std::size_t>(n);
        lcm_ = std::lcm(lcm_, n);
    }
}

bool FiniteAbelianGroup::is_odd_order() const
{
    for (Residue n : orders_)
        if (n % 2 == 0) return false;
    return true;
}

GroupElement FiniteAbelianGroup::zero() const { return {std::vector<Residue>(rank(), 0)}; }

DualCharacter FiniteAbelianGroup::zero_character() const
{
    return {std::vector<Residue>(rank(), 0)};
}

GroupElement FiniteAbelianGroup::element(std::vector<Residue> coords) const
{
    if (coords.size() != rank())
        throw InvalidInput("element has " + std::to_string(coords.size()) +
                           " coordinates, group has rank " + std::to_string(rank()));
    for (std::size_t k = 0; k < rank(); ++k) coords[k] = reduce(coords[k], orders_[k]);
    return {std::move(coords)};
}

DualCharacter FiniteAbelianGroup::character(std::vector<Residue> coords) const
{
    return {element(std::move(coords)).coords};
}

bool FiniteAbelianGroup::contains(const GroupElement& g) const
{
    if (g.coords.size() != rank()) return false;
    for (std::size_t k = 0; k < rank(); ++k)
        if (g.coords[k] < 0 || g.coords[k] >= orders_[k]) return false;
    return true;
}

bool FiniteAbelianGroup::contains(const DualCharacter& h) const
{
    return contains(GroupElement{h.coords});
}

void FiniteAbelianGroup::require(const GroupElement& g) const
{
    if (!contains(g)) throw InvalidInput("group element does not belong to this group");
}

void FiniteAbelianGroup::require(const DualCharacter& h) const
{
    if (!contains(h)) throw InvalidInput("character does not belong to the dual of this group");
}

GroupElement FiniteAbelianGroup::add(const GroupElement& g1, const GroupElement& g2) const
{
    require(g1);
    require(g2);
    GroupElement r = g1;
    for (std::size_t k = 0; k < rank(); ++k) r.coords[k] = (g1.coords[k] + g2.coords[k]) % orders_[k];
    return r;
}

GroupElement FiniteAbelianGroup::neg(const GroupElement& g) const
{
    require(g);
    GroupElement r = g;
    for (std::size_t k = 0; k < rank(); ++k) r.coords[k] = (orders_[k] - g.coords[k]) % orders_[k];
    return r;
}

GroupElement FiniteAbelianGroup::sub(const GroupElement& g1, const GroupElement& g2) const
{
    return add(g1, neg(g2));
}

GroupElement FiniteAbelianGroup::scale(Residue k, const GroupElement& g) const
{
    require(g);
    GroupElement r = g;
    for (std::size_t i = 0; i < rank(); ++i) r.coords[i] = reduce(reduce(k, orders_[i]) * g.coords[i], orders_[i]);
    return r;
}

DualCharacter FiniteAbelianGroup::add(const DualCharacter& h1, const DualCharacter& h2) const
{
    return {add(GroupElement{h1.coords}, GroupElement{h2.coords}).coords};
}

DualCharacter FiniteAbelianGroup::sub(const DualCharacter& h1, const DualCharacter& h2) const
{
    return {sub(GroupElement{h1.coords}, GroupElement{h2.coords}).coords};
}

DualCharacter FiniteAbelianGroup::neg(const DualCharacter& h) const
{
    return {neg(GroupElement{h.coords}).coords};
}

Residue FiniteAbelianGroup::order_of(const GroupElement& g) const
{
    require(g);
    Residue order = 1;
    for (std::size_t k = 0; k < rank(); ++k)
        order = std::lcm(order, orders_[k] / std::gcd(g.coords[k], orders_[k]));
    return order;
}

Residue FiniteAbelianGroup::phase_numerator(const DualCharacter& h, const GroupElement& g) const
{
    require(g);
    require(h);
    Residue num = 0;
    for (std::size_t k = 0; k < rank(); ++k) {
        const Residue prod = (g.coords[k] * h.coords[k]) % orders_[k];
        num = (num + prod * (lcm_ / orders_[k])) % lcm_;
    }
    return num;
}

Complex FiniteAbelianGroup::eval_character(const DualCharacter& h, const GroupElement& g) const
{
    const Residue num = phase_numerator(h, g);
    if (num == 0) return {1.0, 0.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(lcm_);
    return std::polar(1.0, angle);
}

GroupElement FiniteAbelianGroup::element_at(std::size_t index) const
{
    GroupElement g = zero();
    for (std::size_t k = 0; k < rank(); ++k) {
        const auto n = static_cast<std::size_t>(orders_[k]);
        g.coords[k] = static_cast<Residue>(index % n);
        index /= n;
    }
    return g;
}

std::size_t FiniteAbelianGroup::index_of(const GroupElement& g) const
{
    require(g);
    std::size_t index = 0;
    for (std::size_t k = rank(); k-- > 0;)
        index = index * static_cast<std::size_t>(orders_[k]) + static_cast<std::size_t>(g.coords[k]);
    return index;
}

std::vector<GroupElement> FiniteAbelianGroup::elements() const
{
    std::vector<GroupElement> out;
    out.reserve(cardinality_);
    for (std::size_t i = 0; i < cardinality_; ++i) out.push_back(element_at(i));
    return out;
}

std::vector<DualCharacter> FiniteAbelianGroup::characters() const
{
    std::vector<DualCharacter> out;
    out.reserve(cardinality_);
    for (std::size_t i = 0; i < cardinality_; ++i) out.push_back({element_at(i).coords});
    return out;
}

// ---------------------------------------------------------------------------

GroupAutomorphism::GroupAutomorphism(FiniteAbelianGroup group, IntMatrix matrix)
    : group_(std::move(group)), matrix_(std::move(matrix))
{
    const auto r = static_cast<Eigen::Index>(group_.rank());
    if (matrix_.rows() != r || matrix_.cols() != r)
        throw InvalidInput("automorphism matrix must be " + std::to_string(r) + "x" + std::to_string(r));
    const auto& n = group_.cyclic_orders();
    for (Eigen::Index k = 0; k < r; ++k) {
        for (Eigen::Index j = 0; j < r; ++j) {
            if ((matrix_(k, j) * n[j]) % n[k] != 0)
                throw InvalidInput("automorphism matrix is not well defined at entry (" +
                                   std::to_string(k) + "," + std::to_string(j) + ")");
            matrix_(k, j) = reduce(matrix_(k, j), n[k]);
        }
    }
    if (group_.cardinality() > kMaxEnumeration)
        throw InvalidInput("group too large for exhaustive automorphism validation");
    adjoint_matrix_ = adjoint_of(n, matrix_);
    std::vector<char> hit(group_.cardinality(), 0);
    for (std::size_t i = 0; i < group_.cardinality(); ++i) {
        const std::size_t image = group_.index_of(apply(group_.element_at(i)));
        if (hit[image]) throw InvalidInput("matrix does not define a bijection of the group");
        hit[image] = 1;
    }
}

GroupAutomorphism GroupAutomorphism::identity(const FiniteAbelianGroup& group)
{
    return scalar(group, 1);
}

GroupAutomorphism GroupAutomorphism::minus_identity(const FiniteAbelianGroup& group)
{
    return scalar(group, -1);
}

GroupAutomorphism GroupAutomorphism::scalar(const FiniteAbelianGroup& group, Residue k)
{
    const auto r = static_cast<Eigen::Index>(group.rank());
    IntMatrix m = IntMatrix::Identity(r, r) * k;
    return GroupAutomorphism(group, std::move(m));
}

GroupElement GroupAutomorphism::apply(const GroupElement& g) const
{
    if (!group_.contains(g)) throw InvalidInput("element does not belong to the automorphism's group");
    return apply_matrix(group_, matrix_, g);
}

DualCharacter GroupAutomorphism::apply_adjoint(const DualCharacter& h) const
{
    if (!group_.contains(h)) throw InvalidInput("character does not belong to the automorphism's dual");
    return {apply_matrix(group_, adjoint_matrix_, GroupElement{h.coords}).coords};
}

GroupAutomorphism GroupAutomorphism::compose(const GroupAutomorphism& other) const
{
    if (!(group_ == other.group_)) throw InvalidInput("cannot compose automorphisms of different groups");
    return GroupAutomorphism(group_, matrix_ * other.matrix_);
}

GroupAutomorphism adjoint(const GroupAutomorphism& a)
{
    return GroupAutomorphism(a.group(), a.adjoint_matrix());
}

std::vector<GroupElement> kernel_of_I_plus(const GroupAutomorphism& a)
{
    const auto& g = a.group();
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < g.cardinality(); ++i) {
        GroupElement x = g.element_at(i);
        if (g.add(x, a.apply(x)) == g.zero()) out.push_back(std::move(x));
    }
    return out;
}

bool is_subgroup(const FiniteAbelianGroup& group, const std::vector<GroupElement>& subset)
{
    if (subset.empty()) return false;
    std::set<GroupElement> members;
    for (const auto& x : subset) {
        if (!group.contains(x)) return false;
        members.insert(x);
    }
    for (const auto& x : members)
        for (const auto& y : members)
            if (!members.contains(group.add(x, y))) return false;
    return true;
}

bool restriction_is_minus_identity(const GroupAutomorphism& a, const std::vector<GroupElement>& subgroup)
{
    if (!is_subgroup(a.group(), subgroup)) throw InvalidInput("restriction target is not a subgroup");
    for (const auto& x : subgroup)
        if (!(a.apply(x) == a.group().neg(x))) return false;
    return true;
}

}  // namespace lca
