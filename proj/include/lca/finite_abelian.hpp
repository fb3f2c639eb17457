#pragma once

/**
 * @file finite_abelian.hpp
 * @brief Finite Abelian groups Z(n_1) x ... x Z(n_r), their duals and automorphisms.
 *
 * The dual of Z(n_1) x ... x Z(n_r) is identified with the group itself through
 * the pairing (g, h) = exp(2 pi i * sum_k g_k h_k / n_k).
 *
 * Automorphisms are integer matrices A acting by g -> A g, row k reduced mod n_k.
 * Such a matrix is well defined iff n_k divides A_kj * n_j for every (k, j).
 */

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace lca {

using Residue = std::int64_t;
using IntMatrix = Eigen::Matrix<Residue, Eigen::Dynamic, Eigen::Dynamic>;
using Complex = std::complex<double>;

/// Element of a finite Abelian group, as a residue vector.
struct GroupElement {
    std::vector<Residue> coords;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/// Character of a finite Abelian group; same coordinates as GroupElement.
struct DualCharacter {
    std::vector<Residue> coords;

    friend bool operator==(const DualCharacter&, const DualCharacter&) = default;
    friend auto operator<=>(const DualCharacter&, const DualCharacter&) = default;
};

class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<Residue> cyclic_orders);

    const std::vector<Residue>& cyclic_orders() const { return orders_; }
    std::size_t rank() const { return orders_.size(); }
    std::size_t cardinality() const { return cardinality_; }
    bool is_odd_order() const;

    GroupElement zero() const;
    DualCharacter zero_character() const;

    /// Reduces arbitrary integers into a valid element.
    GroupElement element(std::vector<Residue> coords) const;
    DualCharacter character(std::vector<Residue> coords) const;

    bool contains(const GroupElement& g) const;
    bool contains(const DualCharacter& h) const;

    GroupElement add(const GroupElement& g1, const GroupElement& g2) const;
    GroupElement sub(const GroupElement& g1, const GroupElement& g2) const;
    GroupElement neg(const GroupElement& g) const;
    GroupElement scale(Residue k, const GroupElement& g) const;

    DualCharacter add(const DualCharacter& h1, const DualCharacter& h2) const;
    DualCharacter sub(const DualCharacter& h1, const DualCharacter& h2) const;
    DualCharacter neg(const DualCharacter& h) const;

    /// Least k >= 1 with k g = 0.
    Residue order_of(const GroupElement& g) const;

    /// exp(2 pi i sum_k g_k h_k / n_k); the phase is reduced exactly in integers.
    Complex eval_character(const DualCharacter& h, const GroupElement& g) const;

    /// Phase numerator of (g, h) over the denominator exponent_lcm(), in [0, lcm).
    Residue phase_numerator(const DualCharacter& h, const GroupElement& g) const;
    Residue exponent_lcm() const { return lcm_; }

    /// Mixed-radix enumeration, first coordinate fastest.
    GroupElement element_at(std::size_t index) const;
    std::size_t index_of(const GroupElement& g) const;
    std::vector<GroupElement> elements() const;
    std::vector<DualCharacter> characters() const;

    friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b)
    {
        return a.orders_ == b.orders_;
    }

private:
    void require(const GroupElement& g) const;
    void require(const DualCharacter& h) const;

    std::vector<Residue> orders_;
    std::size_t cardinality_ = 1;
    Residue lcm_ = 1;
};

/// Automorphism g -> A g of a finite Abelian group. Validity is checked eagerly.
class GroupAutomorphism {
public:
    /// Bound on |G| for the exhaustive bijectivity check.
    static constexpr std::size_t kMaxEnumeration = 100000;

    GroupAutomorphism(FiniteAbelianGroup group, IntMatrix matrix);

    static GroupAutomorphism identity(const FiniteAbelianGroup& group);
    static GroupAutomorphism minus_identity(const FiniteAbelianGroup& group);
    static GroupAutomorphism scalar(const FiniteAbelianGroup& group, Residue k);

    const FiniteAbelianGroup& group() const { return group_; }
    const IntMatrix& matrix() const { return matrix_; }
    const IntMatrix& adjoint_matrix() const { return adjoint_matrix_; }

    GroupElement apply(const GroupElement& g) const;
    /// Action of the adjoint on the dual, without materialising it.
    DualCharacter apply_adjoint(const DualCharacter& h) const;

    /// this o other
    GroupAutomorphism compose(const GroupAutomorphism& other) const;

    friend bool operator==(const GroupAutomorphism& a, const GroupAutomorphism& b)
    {
        return a.group_ == b.group_ && a.matrix_ == b.matrix_;
    }

private:
    FiniteAbelianGroup group_;
    IntMatrix matrix_;
    IntMatrix adjoint_matrix_;
};

/// The adjoint automorphism of the dual: (g, adjoint(A) h) = (A g, h).
GroupAutomorphism adjoint(const GroupAutomorphism& a);

/// All g with g + A g = 0, in enumeration order.
std::vector<GroupElement> kernel_of_I_plus(const GroupAutomorphism& a);

/// True iff the finite set is closed under addition (hence a subgroup) and nonempty.
bool is_subgroup(const FiniteAbelianGroup& group, const std::vector<GroupElement>& subset);

/// True iff A g = -g for all g in the subgroup; throws InvalidInput when it is not a subgroup.
bool restriction_is_minus_identity(const GroupAutomorphism& a,
                                   const std::vector<GroupElement>& subgroup);

}  // namespace lca
