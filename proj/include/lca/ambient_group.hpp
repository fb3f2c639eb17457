#pragma once

/**
 * @file ambient_group.hpp
 * @brief X = R x Z(2) x G with G finite Abelian of odd order, and its dual Y = R x Z(2) x H.
 *
 * The pairing of x = (t, m, g) with y = (s, n, h) is e^{its} (-1)^{mn} (g, h).
 * Topological automorphisms have the form alpha = (a, I, alpha_G).
 */

#include <vector>

#include "lca/finite_abelian.hpp"

namespace lca {

inline constexpr double kDefaultRealTol = 1e-12;

struct XPoint {
    double t = 0.0;
    int m = 0;
    GroupElement g;

    friend bool operator==(const XPoint&, const XPoint&) = default;
};

struct YPoint {
    double s = 0.0;
    int n = 0;
    DualCharacter h;

    friend bool operator==(const YPoint&, const YPoint&) = default;
};

class AmbientGroup {
public:
    AmbientGroup() = default;
    /// Rejects any G with an even cyclic order.
    explicit AmbientGroup(FiniteAbelianGroup finite_part);

    const FiniteAbelianGroup& finite() const { return g_; }

    XPoint zero() const { return {0.0, 0, g_.zero()}; }
    YPoint zero_character() const { return {0.0, 0, g_.zero_character()}; }
    /// p = (0, 1, 0), the unique element of order 2.
    XPoint order_two_element() const { return {0.0, 1, g_.zero()}; }

    XPoint point(double t, int m, std::vector<Residue> g) const;
    YPoint character(double s, int n, std::vector<Residue> h) const;

    bool contains(const XPoint& x) const;
    bool contains(const YPoint& y) const;

    XPoint add(const XPoint& x1, const XPoint& x2) const;
    XPoint neg(const XPoint& x) const;
    YPoint add(const YPoint& y1, const YPoint& y2) const;
    YPoint sub(const YPoint& y1, const YPoint& y2) const;
    YPoint neg(const YPoint& y) const;

    /// Every character with the given real coordinate (all n, all h).
    std::vector<YPoint> finite_characters(double s = 0.0) const;

    friend bool operator==(const AmbientGroup& a, const AmbientGroup& b) { return a.g_ == b.g_; }

private:
    FiniteAbelianGroup g_;
};

/// e^{its} (-1)^{mn} (g, h)
Complex pair(const AmbientGroup& x_group, const XPoint& x, const YPoint& y);

class DualAutomorphism;

/// alpha(t, m, g) = (a t, m, alpha_G g); the Z(2) component is always the identity.
class XAutomorphism {
public:
    XAutomorphism(AmbientGroup group, double a, GroupAutomorphism alpha_g);

    static XAutomorphism identity(const AmbientGroup& group);
    static XAutomorphism minus_identity(const AmbientGroup& group);

    const AmbientGroup& group() const { return group_; }
    double a() const { return a_; }
    const GroupAutomorphism& alpha_g() const { return alpha_g_; }

    XPoint apply(const XPoint& x) const;
    /// this o other
    XAutomorphism compose(const XAutomorphism& other) const;

    /// |a + 1| < tol, i.e. the branch where alpha acts as -1 on R.
    bool real_part_is_minus_one(double tol = kDefaultRealTol) const;

private:
    AmbientGroup group_;
    double a_;
    GroupAutomorphism alpha_g_;
};

/// Automorphism of Y: (s, n, h) -> (a s, n, alpha_H h).
class DualAutomorphism {
public:
    DualAutomorphism(AmbientGroup group, double a, GroupAutomorphism alpha_h);

    double a() const { return a_; }
    const GroupAutomorphism& alpha_h() const { return alpha_h_; }

    YPoint apply(const YPoint& y) const;
    DualAutomorphism compose(const DualAutomorphism& other) const;

private:
    AmbientGroup group_;
    double a_;
    GroupAutomorphism alpha_h_;
};

/// The adjoint: pair(x, adjoint(alpha) y) = pair(alpha x, y).
DualAutomorphism adjoint(const XAutomorphism& alpha);

/// A(X, R) = {(0, m, g)}, i.e. Z(2) x G sitting at t = 0; enumerated.
std::vector<XPoint> annihilator_of_real_line(const AmbientGroup& group);

}  // namespace lca
