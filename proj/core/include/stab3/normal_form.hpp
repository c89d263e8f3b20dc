#pragma once

// Norm-minimizing normal form of a primitive complex 3-form under
// Sp(6,R) x GL+(2,R).  The squared monomial norm is minimized along the
// orbit by gradient descent over the 14 symmetric directions; at the
// critical point the (2,1) and (0,3) type components vanish, the remaining
// symmetric (1,2) block is diagonalized by a unitary congruence, and a final
// phase / scale / permutation cleanup produces the sorted invariants
// (gamma1, gamma2, gamma3) together with the group element realizing them.

#include "stab3/groups.hpp"
#include "stab3/trilinear.hpp"

#include <array>
#include <vector>

namespace stab3 {

/// Derivative of the squared-norm objective's one-parameter family along
/// basis direction a, evaluated on the form: the sp directions substitute the
/// tangent matrix into one argument slot at a time, direction 12 conjugates
/// the values, direction 13 conjugates and multiplies by i.
ThreeForm symmetric_direction_derivative(const ThreeForm& form, LieDirection direction);

/// a-th component = Re<form, D_a form> in the monomial inner product.  All 14
/// components vanish exactly when the squared norm is critical along the
/// orbit, which happens precisely when the (2,1) and (0,3) parts are zero.
std::array<double, kLieDirections> moment_gradient(const ThreeForm& form);

struct DescentResult {
    ThreeForm form;          ///< act(group, input)
    GroupElement group;
    int iterations = 0;
    double gradient_norm = 0.0;
};

/// Backtracking gradient descent of the squared norm along the orbit
/// (initial step 0.1, halving, Armijo slope 1e-4).  Terminates when the
/// gradient norm drops below the tolerance; throws std::runtime_error,
/// reporting the last gradient norm, if the iteration limit is exceeded
/// (which can happen when the infimum is not attained on the orbit).
/// When objective_trace is non-null the squared norm after every accepted
/// step is appended to it.
DescentResult minimize_norm(const ThreeForm& form, double tolerance = 1e-10,
                            int max_iterations = 100000,
                            std::vector<double>* objective_trace = nullptr);

struct CongruenceResult {
    ThreeForm form; ///< act(group, input)
    GroupElement group;
};

/// Clears the off-diagonal entries of the symmetric 3x3 block formed by the
/// primitive (1,2) chart coefficients (diagonal = gamma slots, off-diagonal
/// = gamma pair slots) through an embedded unitary congruence
/// (Autonne-Takagi), leaving nonnegative diagonal entries.  Requires the
/// (2,1) and (0,3) parts to vanish within 1e-8 (run minimize_norm first);
/// repeated or zero singular values are handled by any valid factor.
CongruenceResult diagonalize_12_part(const ThreeForm& form);

struct NormalFormResult {
    /// Ascending invariants: act(group, input) matches
    /// dz123 + g1 dz1 dzbar2 dzbar3 + g2 dzbar1 dz2 dzbar3 + g3 dzbar1 dzbar2 dz3.
    std::array<double, 3> gammas{};
    GroupElement group;
    double gradient_norm = 0.0;        ///< at the final representative
    double off_type_norm = 0.0;        ///< |(2,1)| + |(0,3)| of the final representative
    double reconstruction_error = 0.0; ///< |act(group, input) - assembled representative|
};

/// Final cleanup for a form supported on the four diagonal monomials (within
/// 1e-8): scales the values so the leading coefficient has modulus one,
/// solves the 4x4 integer weight system of coordinate phases plus a value
/// rotation to make the leading coefficient 1 and the three invariants
/// nonnegative, and sorts them ascending by a determinant-one coordinate
/// permutation.  Throws std::invalid_argument when the leading (3,0)
/// coefficient vanishes (the form cannot take the normal shape).
NormalFormResult phase_and_sort(const ThreeForm& form);

/// Full pipeline: minimize_norm, diagonalize_12_part, phase_and_sort, with
/// the group elements composed.  Enforces gamma1 + gamma2 + gamma3 < 1 and
/// throws std::runtime_error otherwise (the critical representative then
/// fails the strict evaluation bound on unitary frames).
NormalFormResult orbit_invariants(const ThreeForm& form);

/// dz123 + g1 dz1 dzbar2 dzbar3 + g2 dzbar1 dz2 dzbar3 + g3 dzbar1 dzbar2 dz3.
ThreeForm normal_form_representative(const std::array<double, 3>& gammas);

} // namespace stab3
