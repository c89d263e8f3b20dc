#pragma once

// Correspondence between the rank-14 sheaf-class lattice of the triple
// product and the primitive complex 3-forms on the six-torus.  A fixed
// 14-row table (four complex-exponential classes, three mixed rows built
// from the shifted diagonals F_ij = Delta_ij - D_i - D_j, and the complex
// conjugates of all seven) defines a linear isomorphism; everything else
// -- inverse, induced symplectic action on the lattice, intertwining
// residuals, charge admissibility -- is derived from the table by exact
// rational-complex linear algebra.

#include "stab3/cohomology.hpp"
#include "stab3/lattice.hpp"
#include "stab3/trilinear.hpp"
#include "stab3/uplus.hpp"

#include <array>
#include <cstdint>

namespace stab3 {

/// One row of the correspondence: an even algebraic class in exact basis
/// coordinates and the primitive 3-form it is matched with.
struct MirrorRow {
    LatticeVec charge;
    ThreeForm form;
};

/// The full rank-14 table.  Rows 0-3 are the exponentials of
/// i(+D1+D2+D3), i(D1-D2-D3), i(-D1+D2-D3), i(-D1-D2+D3) paired with the
/// unit-coefficient monomials dz123, dz1 dzb2 dzb3, dzb1 dz2 dzb3,
/// dzb1 dzb2 dz3; rows 4-6 pair 2i F_ij + 2 D_k . F_ij with the cyclic
/// orbit of (dz1 dzb1 + dzb2 dz2) dzb3 under relabeling of the factors --
/// for the (1,3) pair this is (dzb1 dz1 + dz3 dzb3) dzb2, the opposite
/// orientation to the naive smaller-index-unbarred pattern, which is what
/// makes the correspondence commute with factor permutations; rows 7-13
/// are the complex conjugates of rows 0-6 in the same order.
struct MirrorTable {
    std::array<MirrorRow, 14> rows;
};

/// The table, built once behind a thread-safe initializer.
const MirrorTable& mirror_table();

/// Exact matrix of the correspondence: 20 x 14, column j holding the
/// monomial coordinates (ascending-triple order) of the image of the j-th
/// basis sheaf class.  All entries are complex rationals.
const detail::Mat<CRat>& mirror_matrix();

/// Linear extension of the table: basis coordinates -> primitive 3-form.
ThreeForm mirror_form(const LatticeVec& v);

/// Inverse of mirror_form.  Throws std::invalid_argument unless
/// primitivity_residual(omega) < tol.  The returned coordinates are the
/// exact solution of the 14x14 subsystem selected by the pivot rows of
/// the correspondence matrix, so mirror_form(mirror_charge(omega))
/// reproduces a primitive omega to floating-point accuracy.
LatticeVec mirror_charge(const ThreeForm& omega, double tol = 1e-9);

/// Coordinate-wise complex conjugation of a lattice vector (the basis
/// classes are real, so this is conjugation of the underlying class).
LatticeVec conjugate(const LatticeVec& v);

/// Integral of a ^ b over the torus, normalized against the real volume
/// form dx1^dy1^dx2^dy2^dx3^dy3 (the one integrating to +1).
Complex wedge_integral(const ThreeForm& a, const ThreeForm& b);

/// Exact wedge pairing through the correspondence: the integral of
/// mirror_form(v) ^ mirror_form(w) in the normalization above.
CRat primitive_wedge_pairing(const LatticeVec& v, const LatticeVec& w);

/// Residual of the intertwining identity between the lattice action of a
/// known autoequivalence and the induced action of its symplectic image:
/// the max-norm difference between sp_action_matrix(g) and the matching
/// lattice matrix, minimized over the global sign (the double-cover
/// ambiguity).  Recognized g: the symplectic rotation J, the shears
/// N(B) = [[1,B],[0,1]] for B among E_ii and E_ij + E_ji, and the two
/// cyclic coordinate permutations.  Throws std::invalid_argument for any
/// other matrix.
double equivariance_residual(const detail::Mat<Rational>& g);

/// Charge / form pair of the damped-exponential family: the lattice class
///   exp(i(D1+D2+D3)) + a exp(i(-D1-D2+D3)) + b exp(i(-D1+D2-D3))
///                    + c exp(i(D1-D2-D3))
/// together with its image dz123 + a dzb1 dzb2 dz3 + b dzb1 dz2 dzb3
/// + c dz1 dzb2 dzb3.  Parameters are converted to exact rationals, so
/// the pair is exact.  Throws std::invalid_argument outside the cone
/// a, b, c >= 0, a + b + c < 1.
struct ChargePair {
    LatticeVec charge;
    ThreeForm form;
};
ChargePair charge_from_params(double alpha, double beta, double gamma);

/// The 14 values <w, B_j> of the charge functional against the basis
/// sheaf classes (exact Euler pairing, bilinear, no conjugation).
std::array<CRat, 14> mukai_dual_coordinates(const LatticeVec& w);

/// Membership test of the mirror form of a charge vector: runs the
/// Lagrangian sampling / winding certificate on mirror_form(w).  A
/// RejectedWitness verdict certifies that no admissible charge functional
/// has these coordinates.
MembershipVerdict charge_admissible(const LatticeVec& w, int n_samples = 4096,
                                    std::uint64_t seed = 0, double tol = 1e-9);

/// Cross-check construction of the correspondence as the graded tensor
/// cube (or square, on the four-torus) of the one-factor map
///   1 -> dx, dx -> 1, dy -> dx^dy, dx^dy -> dy
/// with Koszul signs for an odd-parity operator.  The result is expanded
/// in the real generators; its restriction to algebraic classes is
/// expected to agree with the table up to one global sign, which the
/// tests pin down.  Sign conventions of the graded tensor product are
/// canonical only up to that global factor, hence this is a diagnostic,
/// not the definition.
CohomClass tensor_mirror_image(const CohomClass& c);

/// Real-generator expansion (complex rational coefficients) of the j-th
/// column of mirror_matrix(); the exact reference that
/// tensor_mirror_image is compared against.
CohomClass mirror_image_class(int basis_index);

/// Rank-5 analogue of the table on the four-torus: the five surface
/// charges exp(i(D1+D2)), exp(i(D1-D2)), exp(i(D2-D1)),
/// 2i(Delta - D1 - D2), exp(-i(D1+D2)) paired with their degree-2 forms
/// dz1 dz2, dz1 dzb2, dzb1 dz2, dz1 dzb1 + dzb2 dz2, dzb1 dzb2, stored
/// as real-generator expansions.  Used as independent test data for the
/// tensor construction.
struct SurfaceMirrorRow {
    LatticeVec charge;  // E2 ambient, 5 exact coordinates
    CohomClass form;    // E2 ambient, pure degree 2, complex coefficients
};
const std::array<SurfaceMirrorRow, 5>& surface_mirror_table();

} // namespace stab3
