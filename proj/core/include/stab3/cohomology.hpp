#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "stab3/rational.hpp"

namespace stab3 {

// Ambient space of a cohomology class: the threefold E^3 uses six
// generators e1..e6 = dx1,dy1,dx2,dy2,dx3,dy3, the surface E^2 the
// first four. Monomials are kept with ascending indices; Koszul signs
// are absorbed into coefficients.
enum class Ambient : uint8_t { E3, E2 };

inline int generator_count(Ambient a) { return a == Ambient::E3 ? 6 : 4; }

// Named subtori. Delta is the diagonal of E^2; the rest live on E^3
// (Dd_ij denotes the surface Delta_ij x point-divisor on the remaining
// factor, written D_ij elsewhere).
enum class CycleName : uint8_t {
    Fund,
    D1,
    D2,
    D3,
    Delta12,
    Delta13,
    Delta23,
    C12,
    C13,
    C23,
    Dd12,
    Dd13,
    Dd23,
    Point,
    Delta, // E2 diagonal
};

struct CohomClass {
    Ambient ambient = Ambient::E3;
    // Key: bitmask over generators, bit g set means e_{g+1} present.
    std::map<uint32_t, CRat> coeffs;

    CohomClass() = default;
    explicit CohomClass(Ambient a) : ambient(a) {}

    bool is_zero() const { return coeffs.empty(); }
    void add_term(uint32_t mask, const CRat& c);

    CohomClass& operator+=(const CohomClass& o);
    CohomClass& operator-=(const CohomClass& o);
    CohomClass& operator*=(const CRat& s);
    friend CohomClass operator+(CohomClass a, const CohomClass& b) { return a += b; }
    friend CohomClass operator-(CohomClass a, const CohomClass& b) { return a -= b; }
    friend CohomClass operator*(CohomClass a, const CRat& s) { return a *= s; }
    friend CohomClass operator*(const CRat& s, CohomClass a) { return a *= s; }
    friend bool operator==(const CohomClass& a, const CohomClass& b)
    {
        return a.ambient == b.ambient && a.coeffs == b.coeffs;
    }

    // Degree-d part (d = number of generators in the monomial).
    CohomClass component(int degree) const;
};

CohomClass make_monomial(Ambient a, uint32_t mask, const CRat& c = CRat(1));
CohomClass make_unit(Ambient a);

// Exterior product with Koszul signs. Throws on ambient mismatch.
CohomClass wedge(const CohomClass& a, const CohomClass& b);

// Coefficient of the top monomial; fixes the orientation so that the
// integral of e1...e6 (resp. e1...e4) equals +1.
CRat integrate(const CohomClass& a);

// Fiber integration along the third factor: keeps monomials containing
// e5^e6 and strips them (the pair is already rightmost in ascending
// order, so no sign appears). Requires an E3 class, returns E2.
CohomClass pushforward_p(const CohomClass& a);

// Index-renaming inclusions. pullback_p embeds an E2 class along
// e1..e4; pullback_q sends the two generators of the point factor
// (given as an E2 class supported on e1,e2) to e5,e6.
CohomClass pullback_p(const CohomClass& a);
CohomClass pullback_q_divisor(const Rational& degree); // 1 + degree * e5^e6 on E3

CohomClass cycle_class(CycleName n, Ambient a = Ambient::E3);

// Algebra endomorphism induced by a substitution e_{g+1} -> images[g];
// monomials are rebuilt by wedging the images in ascending order, so
// all reordering signs fall out of the exterior product itself.
CohomClass substitute_generators(const CohomClass& a, const std::vector<CohomClass>& images);

// Sum over codimension i of (-1)^i * integral of a_(i) ^ b_(n-i) where
// a_(i) is the degree-2i component; n = 3 for E3, 2 for E2.
CRat mukai_pairing(const CohomClass& a, const CohomClass& b);

std::string to_string(const CohomClass& a);

} // namespace stab3
