#pragma once

#include <array>
#include <string>
#include <vector>

#include "stab3/cohomology.hpp"
#include "stab3/detail/exact_linalg.hpp"
#include "stab3/rational.hpp"

namespace stab3 {

// Numerical Grothendieck lattice of E^3 (rank 14) in the basis
//   (O_X, O_D1, O_D2, O_D3, O_Delta12, O_Delta13, O_Delta23,
//    O_C12, O_C13, O_C23, O_D12, O_D13, O_D23, O_0)
// and of E^2 (rank 5) in the basis (O_S, O_D1, O_D2, O_Delta, O_0).
// Coordinates may be complex rational: complexified classes such as
// exp(i t D) live in the same container.
inline int basis_size(Ambient a) { return a == Ambient::E3 ? 14 : 5; }

struct LatticeVec {
    Ambient ambient = Ambient::E3;
    std::vector<CRat> coords;

    LatticeVec() : coords(14) {}
    explicit LatticeVec(Ambient a) : ambient(a), coords(basis_size(a)) {}

    CRat& operator[](int i) { return coords[i]; }
    const CRat& operator[](int i) const { return coords[i]; }
    int size() const { return static_cast<int>(coords.size()); }

    friend bool operator==(const LatticeVec& a, const LatticeVec& b)
    {
        return a.ambient == b.ambient && a.coords == b.coords;
    }
};

struct LatticeMatrix {
    std::string name;
    detail::Mat<CRat> m;
};

LatticeVec apply(const LatticeMatrix& M, const LatticeVec& v);

// Chern character of the basis sheaf with the given index; all lower
// order correction terms vanish because the defining divisor classes
// square to zero.
CohomClass chern_basis(Ambient a, int index);

// Chern character of an arbitrary lattice vector.
CohomClass chern(const LatticeVec& v);

// Expresses an even algebraic class in basis coordinates. Throws if
// the class lies outside the span (only possible for non-Hodge input).
LatticeVec to_basis(const CohomClass& c);

// Euler pairing matrix chi[i][j] = mukai_pairing(ch B_i, ch B_j).
const detail::Mat<CRat>& euler_matrix(Ambient a = Ambient::E3);

// Euler pairing of two lattice vectors, bilinear over the complexified
// lattice (no conjugation).
CRat euler_pairing(const LatticeVec& v, const LatticeVec& w);

// exp(i t (s1 D1 + s2 D2 + s3 D3)) in basis coordinates:
//   1 + i t sum_k s_k D_k - t^2 (s1 s2 C12 + s1 s3 C13 + s2 s3 C23)
//     - i t^3 s1 s2 s3 [pt].
LatticeVec exp_divisor(const std::array<int, 3>& signs, const Rational& t);

enum class AutoEq {
    F,   // factor rotation (x1,x2,x3) -> (x3,x1,x2) as a functor: D1 -> D2
    F2,  // its square: D1 -> D3
    Phi, // Fourier transform along the Poincare bundle, then phi_L^*
    TensorD1,
    TensorD2,
    TensorD3,
    TensorDelta12,
    TensorDelta13,
    TensorDelta23,
};

// Induced action on the rank-14 lattice, integral for every kind.
const LatticeMatrix& autoeq_matrix(AutoEq kind);

// Action of g in Sp(6,Q) on the lattice through the middle-cohomology
// mirror: beta^{-1} o (pullback of 3-forms along g) o beta.  Pullback is
// contravariant, so sp_action(g h) = sp_action(h) sp_action(g).  Under
// this variance the standard shears match tensoring by the coordinate
// divisors exactly; intertwining with a named autoequivalence matrix is
// canonical only up to a global factor of -1 (the spin double cover).
// Defined in mirror.cpp.
LatticeMatrix sp_action_matrix(const detail::Mat<Rational>& g);

// Coordinate order for symplectic matrices is (x1,x2,x3,y1,y2,y3);
// J6 maps x-block to y-block.
detail::Mat<Rational> symplectic_j6();
bool is_symplectic(const detail::Mat<Rational>& g);

} // namespace stab3
