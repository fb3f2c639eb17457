#include "lca/ambient_group.hpp"

#include <cmath>

#include "lca/error.hpp"

namespace lca {

namespace {

int bit(int v) { return ((v % 2) + 2) % 2; }

void require_bit(int v, const char* what)
{
    if (v != 0 && v != 1) throw InvalidInput(std::string(what) + " must be 0 or 1");
}

}  // namespace

AmbientGroup::AmbientGroup(FiniteAbelianGroup finite_part) : g_(std::move(finite_part))
{
    if (!g_.is_odd_order())
        throw InvalidInput("finite part G must have odd order (no elements of order 2)");
}

XPoint AmbientGroup::point(double t, int m, std::vector<Residue> g) const
{
    require_bit(m, "m");
    return {t, m, g_.element(std::move(g))};
}

YPoint AmbientGroup::character(double s, int n, std::vector<Residue> h) const
{
    require_bit(n, "n");
    return {s, n, g_.character(std::move(h))};
}

bool AmbientGroup::contains(const XPoint& x) const
{
    return (x.m == 0 || x.m == 1) && std::isfinite(x.t) && g_.contains(x.g);
}

bool AmbientGroup::contains(const YPoint& y) const
{
    return (y.n == 0 || y.n == 1) && std::isfinite(y.s) && g_.contains(y.h);
}

XPoint AmbientGroup::add(const XPoint& x1, const XPoint& x2) const
{
    return {x1.t + x2.t, bit(x1.m + x2.m), g_.add(x1.g, x2.g)};
}

XPoint AmbientGroup::neg(const XPoint& x) const { return {-x.t, x.m, g_.neg(x.g)}; }

YPoint AmbientGroup::add(const YPoint& y1, const YPoint& y2) const
{
    return {y1.s + y2.s, bit(y1.n + y2.n), g_.add(y1.h, y2.h)};
}

YPoint AmbientGroup::sub(const YPoint& y1, const YPoint& y2) const
{
    return {y1.s - y2.s, bit(y1.n + y2.n), g_.sub(y1.h, y2.h)};
}

YPoint AmbientGroup::neg(const YPoint& y) const { return {-y.s, y.n, g_.neg(y.h)}; }

std::vector<YPoint> AmbientGroup::finite_characters(double s) const
{
    std::vector<YPoint> out;
    out.reserve(2 * g_.cardinality());
    for (int n = 0; n < 2; ++n)
        for (auto& h : g_.characters()) out.push_back({s, n, std::move(h)});
    return out;
}

Complex pair(const AmbientGroup& x_group, const XPoint& x, const YPoint& y)
{
    if (!x_group.contains(x) || !x_group.contains(y))
        throw InvalidInput("pair: point and character must belong to the same ambient group");
    const Complex finite = x_group.finite().eval_character(y.h, x.g);
    const double sign = (x.m * y.n) % 2 == 0 ? 1.0 : -1.0;
    return std::polar(1.0, x.t * y.s) * sign * finite;
}

// ---------------------------------------------------------------------------

XAutomorphism::XAutomorphism(AmbientGroup group, double a, GroupAutomorphism alpha_g)
    : group_(std::move(group)), a_(a), alpha_g_(std::move(alpha_g))
{
    if (!(a_ != 0.0) || !std::isfinite(a_)) throw InvalidInput("automorphism scalar a must be finite and nonzero");
    if (!(alpha_g_.group() == group_.finite()))
        throw InvalidInput("alpha_G acts on a different finite group");
}

XAutomorphism XAutomorphism::identity(const AmbientGroup& group)
{
    return {group, 1.0, GroupAutomorphism::identity(group.finite())};
}

XAutomorphism XAutomorphism::minus_identity(const AmbientGroup& group)
{
    return {group, -1.0, GroupAutomorphism::minus_identity(group.finite())};
}

XPoint XAutomorphism::apply(const XPoint& x) const
{
    if (!group_.contains(x)) throw InvalidInput("point does not belong to the automorphism's group");
    return {a_ * x.t, x.m, alpha_g_.apply(x.g)};
}

XAutomorphism XAutomorphism::compose(const XAutomorphism& other) const
{
    return {group_, a_ * other.a_, alpha_g_.compose(other.alpha_g_)};
}

bool XAutomorphism::real_part_is_minus_one(double tol) const { return std::abs(a_ + 1.0) < tol; }

DualAutomorphism::DualAutomorphism(AmbientGroup group, double a, GroupAutomorphism alpha_h)
    : group_(std::move(group)), a_(a), alpha_h_(std::move(alpha_h))
{
    if (!(a_ != 0.0)) throw InvalidInput("dual automorphism scalar must be nonzero");
}

YPoint DualAutomorphism::apply(const YPoint& y) const
{
    if (!group_.contains(y)) throw InvalidInput("character does not belong to the automorphism's dual");
    return {a_ * y.s, y.n, {alpha_h_.apply(GroupElement{y.h.coords}).coords}};
}

DualAutomorphism DualAutomorphism::compose(const DualAutomorphism& other) const
{
    return {group_, a_ * other.a_, alpha_h_.compose(other.alpha_h_)};
}

DualAutomorphism adjoint(const XAutomorphism& alpha)
{
    return {alpha.group(), alpha.a(), adjoint(alpha.alpha_g())};
}

std::vector<XPoint> annihilator_of_real_line(const AmbientGroup& group)
{
    std::vector<XPoint> out;
    for (int m = 0; m < 2; ++m)
        for (auto& g : group.finite().elements()) out.push_back({0.0, m, std::move(g)});
    return out;
}

}  // namespace lca
