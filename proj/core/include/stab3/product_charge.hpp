#pragma once

// Central charges on the triple product seen through its surface-times-
// curve splitting: the first two factors form an abelian surface S, the
// third a curve, and every lattice class projects to a pair of surface
// classes.  Pairing those projections with a complexified surface
// polarization yields four rational coefficients per class; a family of
// six autoequivalence transforms (identity, the two factor rotations,
// the even duality, and its rotated composites) turns them into enough
// linear data to reconstruct the full fundamental-domain charge and to
// separate every nonzero lattice class.

#include "stab3/lattice.hpp"
#include "stab3/rational.hpp"

#include <span>

namespace stab3 {

/// Surface shadows of a triple-product class: v1 collects the parts the
/// fiber polarization sees (ranks through ch2 against the third-factor
/// divisor), v2 the untwisted pushforward (ch1 through ch3).  Together
/// with the transform family below they determine the class.
struct SurfaceProjections {
    LatticeVec v1;
    LatticeVec v2;
};

/// Projects an E3 lattice class to its surface pair.  Throws
/// std::invalid_argument on a surface-ambient input.
SurfaceProjections project_to_surface(const LatticeVec& vec);

/// Pushforward of the class twisted by k fiber points, in surface basis
/// coordinates.  For every k this equals v2 + k v1, so consecutive
/// differences recover v1 and then v2 exactly; the projections are
/// independent of which twist is used to compute them.
LatticeVec twisted_pushforward(const LatticeVec& vec, const Rational& k);

/// Number of charge transforms.
inline constexpr int kNumTransforms = 6;

/// The 1-based transform family {Id, F, F^2, Phi, F Phi, F^2 Phi}: the
/// identity, the factor rotation and its square, the even duality, and
/// the duality followed by each rotation.
const LatticeMatrix& charge_transform(int index);

/// exp(i t (D1 + D2)) on the surface in basis coordinates; the
/// complexified polarization all four coefficients pair against.
LatticeVec surface_exp_polarization(const Rational& t);

/// The four asymptotic coefficients of a class under one transform:
///   a + i c = <exp(i t D), v1>,   b + i d = <exp(i t D), v2>,
/// with D = D1 + D2 on the surface and <,> its Mukai pairing.
struct AsymCoeffs {
    Rational a;
    Rational b;
    Rational c;
    Rational d;
};

/// Applies the index-th transform to the class, projects to the
/// surface, and pairs with the polarization at scale t.  Exact for
/// rational t.  Throws std::invalid_argument on a bad transform index
/// or surface-ambient input.
AsymCoeffs asymptotic_coeffs(const LatticeVec& vec, int transform, const Rational& t);

/// Central charge of the product stability condition with surface scale
/// s, curve scale t, and damping alpha on the reflected polarization:
///   Z = (c s + b) + i (-a t + d)
///     + alpha [(-c s + b) + i (-a t - d)],
/// coefficients taken at the identity transform.  Requires s > 0,
/// t > 0, 0 <= alpha < 1; throws std::invalid_argument otherwise.
CRat product_charge(const LatticeVec& vec,
                    const Rational& s,
                    const Rational& t,
                    const Rational& alpha);

/// Fundamental-domain central charge reconstructed from the asymptotic
/// coefficients of the first three transforms at t = 1:
///   Z = (c1 + b1) + alpha (-c1 + b1) + beta (-c2 + b2) + gamma (-c3 + b3)
///     + i [(-a1 + d1) + alpha (-a1 - d1) + beta (-a2 - d2) + gamma (-a3 - d3)].
/// Agrees exactly with pairing against the dampened-exponential class
/// W(alpha, beta, gamma).
CRat reduced_charge(const LatticeVec& vec,
                    const Rational& alpha,
                    const Rational& beta,
                    const Rational& gamma);

/// Exact rank of the stacked surface projections v1 applied after each
/// of the given transforms (1-based indices into the family above).
int stacked_projection_rank(std::span<const int> transforms);

/// Rank of the full six-transform stack.  Fourteen means no nonzero
/// lattice class is invisible to every projection, so the asymptotic
/// coefficient family separates classes.
int injectivity_rank();

/// Largest residual of the duality relations
///   a_{i+3} = -b_i,  b_{i+3} = a_i,  c_{i+3} = -d_i,  d_{i+3} = c_i
/// over all basis classes and i = 1, 2, 3, at t = 1.  Exactly zero:
/// composing with the even duality rotates the coefficient pairs.
Rational poincare_coeff_relations_check();

} // namespace stab3
