#include "stab3/cohomology.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace stab3 {

namespace {

void check_same_ambient(const CohomClass& a, const CohomClass& b)
{
    if (a.ambient != b.ambient) throw std::invalid_argument("ambient mismatch");
}

// Sign of e_I ^ e_J for ascending disjoint index sets: parity of the
// number of pairs (i, j) with i in I, j in J and i > j.
int koszul_sign(uint32_t lhs, uint32_t rhs)
{
    int inversions = 0;
    for (uint32_t j = rhs; j != 0; j &= j - 1) {
        const uint32_t bit = j & ~(j - 1);
        inversions += std::popcount(lhs & ~(bit | (bit - 1)));
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

uint32_t top_mask(Ambient a) { return (1u << generator_count(a)) - 1; }

} // namespace

void CohomClass::add_term(uint32_t mask, const CRat& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs.erase(it);
    }
}

CohomClass& CohomClass::operator+=(const CohomClass& o)
{
    check_same_ambient(*this, o);
    for (const auto& [m, c] : o.coeffs) add_term(m, c);
    return *this;
}

CohomClass& CohomClass::operator-=(const CohomClass& o)
{
    check_same_ambient(*this, o);
    for (const auto& [m, c] : o.coeffs) add_term(m, -c);
    return *this;
}

CohomClass& CohomClass::operator*=(const CRat& s)
{
    if (s.is_zero()) {
        coeffs.clear();
        return *this;
    }
    for (auto& [m, c] : coeffs) c *= s;
    return *this;
}

CohomClass CohomClass::component(int degree) const
{
    CohomClass out(ambient);
    for (const auto& [m, c] : coeffs)
        if (std::popcount(m) == degree) out.coeffs.emplace(m, c);
    return out;
}

CohomClass make_monomial(Ambient a, uint32_t mask, const CRat& c)
{
    if ((mask & ~top_mask(a)) != 0) throw std::invalid_argument("generator index out of range");
    CohomClass out(a);
    out.add_term(mask, c);
    return out;
}

CohomClass make_unit(Ambient a) { return make_monomial(a, 0); }

CohomClass wedge(const CohomClass& a, const CohomClass& b)
{
    check_same_ambient(a, b);
    CohomClass out(a.ambient);
    for (const auto& [ma, ca] : a.coeffs)
        for (const auto& [mb, cb] : b.coeffs) {
            if ((ma & mb) != 0) continue;
            CRat c = ca * cb;
            if (koszul_sign(ma, mb) < 0) c = -c;
            out.add_term(ma | mb, c);
        }
    return out;
}

CRat integrate(const CohomClass& a)
{
    auto it = a.coeffs.find(top_mask(a.ambient));
    return it == a.coeffs.end() ? CRat(0) : it->second;
}

CohomClass pushforward_p(const CohomClass& a)
{
    if (a.ambient != Ambient::E3) throw std::invalid_argument("pushforward_p needs an E3 class");
    constexpr uint32_t fiber = (1u << 4) | (1u << 5); // e5 ^ e6
    CohomClass out(Ambient::E2);
    for (const auto& [m, c] : a.coeffs)
        if ((m & fiber) == fiber) out.add_term(m & ~fiber, c);
    return out;
}

CohomClass pullback_p(const CohomClass& a)
{
    if (a.ambient != Ambient::E2) throw std::invalid_argument("pullback_p needs an E2 class");
    CohomClass out(Ambient::E3);
    for (const auto& [m, c] : a.coeffs) out.add_term(m, c);
    return out;
}

CohomClass pullback_q_divisor(const Rational& degree)
{
    CohomClass out(Ambient::E3);
    out.add_term(0, CRat(1));
    out.add_term((1u << 4) | (1u << 5), CRat(degree));
    return out;
}

namespace {

// D_i on E3 is e_{2i-1} ^ e_{2i} (0-based bits 2i-2, 2i-1).
uint32_t divisor_mask(int i) { return (1u << (2 * i - 2)) | (1u << (2 * i - 1)); }

CohomClass diagonal_class(Ambient amb, int i, int j)
{
    // (e_{2i-1} - e_{2j-1}) ^ (e_{2i} - e_{2j})
    CohomClass x(amb);
    x.add_term(1u << (2 * i - 2), CRat(1));
    x.add_term(1u << (2 * j - 2), CRat(-1));
    CohomClass y(amb);
    y.add_term(1u << (2 * i - 1), CRat(1));
    y.add_term(1u << (2 * j - 1), CRat(-1));
    return wedge(x, y);
}

} // namespace

CohomClass cycle_class(CycleName n, Ambient a)
{
    const bool e3 = a == Ambient::E3;
    switch (n) {
    case CycleName::Fund:
        return make_unit(a);
    case CycleName::Point:
        return make_monomial(a, top_mask(a));
    case CycleName::D1:
        return make_monomial(a, divisor_mask(1));
    case CycleName::D2:
        return make_monomial(a, divisor_mask(2));
    case CycleName::D3:
        if (!e3) break;
        return make_monomial(a, divisor_mask(3));
    case CycleName::Delta:
        if (e3) break;
        return diagonal_class(a, 1, 2);
    case CycleName::Delta12:
        if (!e3) break;
        return diagonal_class(a, 1, 2);
    case CycleName::Delta13:
        if (!e3) break;
        return diagonal_class(a, 1, 3);
    case CycleName::Delta23:
        if (!e3) break;
        return diagonal_class(a, 2, 3);
    case CycleName::C12:
        if (!e3) break;
        return make_monomial(a, divisor_mask(1) | divisor_mask(2));
    case CycleName::C13:
        if (!e3) break;
        return make_monomial(a, divisor_mask(1) | divisor_mask(3));
    case CycleName::C23:
        if (!e3) break;
        return make_monomial(a, divisor_mask(2) | divisor_mask(3));
    case CycleName::Dd12:
        if (!e3) break;
        return wedge(diagonal_class(a, 1, 2), cycle_class(CycleName::D3, a));
    case CycleName::Dd13:
        if (!e3) break;
        return wedge(diagonal_class(a, 1, 3), cycle_class(CycleName::D2, a));
    case CycleName::Dd23:
        if (!e3) break;
        return wedge(diagonal_class(a, 2, 3), cycle_class(CycleName::D1, a));
    }
    throw std::invalid_argument("cycle name not defined in this ambient");
}

CohomClass substitute_generators(const CohomClass& a, const std::vector<CohomClass>& images)
{
    if (static_cast<int>(images.size()) != generator_count(a.ambient))
        throw std::invalid_argument("one image per generator required");
    CohomClass out(images.empty() ? a.ambient : images.front().ambient);
    for (const auto& [m, c] : a.coeffs) {
        CohomClass term = make_monomial(out.ambient, 0, c);
        for (int g = 0; g < generator_count(a.ambient); ++g)
            if (m & (1u << g)) term = wedge(term, images[g]);
        out += term;
    }
    return out;
}

CRat mukai_pairing(const CohomClass& a, const CohomClass& b)
{
    check_same_ambient(a, b);
    const int n = a.ambient == Ambient::E3 ? 3 : 2;
    CRat total(0);
    for (int i = 0; i <= n; ++i) {
        CRat term = integrate(wedge(a.component(2 * i), b.component(2 * (n - i))));
        if (i % 2 != 0) term = -term;
        total += term;
    }
    return total;
}

std::string to_string(const CohomClass& a)
{
    if (a.coeffs.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : a.coeffs) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(c.re) << (c.im < 0 ? " - " : " + ")
           << to_string(c.im < 0 ? Rational(-c.im) : c.im) << "i)";
        if (m == 0) continue;
        os << "*e";
        for (int g = 0; g < generator_count(a.ambient); ++g)
            if (m & (1u << g)) os << (g + 1);
    }
    return os.str();
}

} // namespace stab3
