#pragma once

// Membership and component tests for the space of complex 3-forms that are
// nonvanishing on every Lagrangian subspace of R^6 (positively oriented
// component).  Provides Schur-Cohn root location for the cubic attached to a
// Lagrangian loop, randomized Lagrangian sampling with deterministic
// per-sample streams, winding-number component detection, and the
// covering-space phase coordinates.

#include "stab3/trilinear.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace stab3 {

/// Cubic polynomial c3*z^3 + c2*z^2 + c1*z + c0 with complex coefficients.
struct Cubic {
    Complex c3{};
    Complex c2{};
    Complex c1{};
    Complex c0{};

    static Cubic from_coefficients(const std::array<Complex, 4>& descending) {
        return Cubic{descending[0], descending[1], descending[2], descending[3]};
    }
};

/// True iff all three roots lie strictly inside the open unit disk.
///
/// Implemented by the iterated Schur transform
///   (TP)(z) = conj(P(0)) * P(z) - conj(P*(0)) * P*(z)
/// with P*(z) the reciprocal adjoint polynomial; whenever an iterate's
/// |TP(0)| falls below 1e-12 the answer is delegated to companion-matrix
/// eigenvalues of the monic normalization.  Throws std::invalid_argument if
/// the leading coefficient is zero.
bool roots_in_open_disk(const Cubic& p);

/// Hypothesis of the one-sided instability test for a monic cubic
/// z^3 + a*z^2 + b*z + c:
///   0 < 1 - |c|^2 <= |a*conj(c) - conj(b)|.
/// Whenever this returns true the cubic has a root of modulus >= 1.  The
/// coefficients are normalized by the leading coefficient first; a zero
/// leading coefficient never satisfies the hypothesis.
bool polyunstable_hypothesis(const Cubic& p);

/// Roots of the cubic as companion-matrix eigenvalues (unordered).  Used as
/// the internal tie-breaker; exposed so callers can report root locations.
/// Throws std::invalid_argument if the leading coefficient is zero.
std::array<Complex, 3> cubic_roots(const Cubic& p);

/// Coordinate Lagrangian frame: column j is the j-th standard basis vector
/// of C^3 when bit j of `mask` is clear, and i times it when set (so mask 0
/// is the x-frame and mask 7 the y-frame).  Valid masks are 0..7.
LagrangianFrame coordinate_frame(int mask);

/// Haar-random unitary frame drawn from the stream derived deterministically
/// from (seed, index): a complex Gaussian 3x3 matrix orthonormalized with
/// positive diagonal normalization.  Distinct indices give independent
/// samples, so sampling loops can be partitioned freely.
LagrangianFrame haar_lagrangian_frame(std::uint64_t seed, std::uint64_t index);

enum class MembershipStatus {
    RejectedWitness, ///< a Lagrangian frame with |value| below tolerance was found
    PassedSamples,   ///< no rejection found; NOT a certificate of membership
};

/// Frame on which the form was observed to (near-)vanish.
struct MembershipWitness {
    Trivector frame;
    double abs_value = 0.0;
};

struct MembershipVerdict {
    MembershipStatus status = MembershipStatus::PassedSamples;
    std::optional<MembershipWitness> witness;
    int samples_used = 0;          ///< random samples actually evaluated
    double min_abs_value = 0.0;    ///< minimum |value| over everything evaluated
};

/// Samples the form against the eight coordinate frames, a 720-point loop of
/// rotated x-frames, and `n_samples` Haar-random frames; rejects with a
/// witness as soon as some |value| drops below `tol`.  When the loop winding
/// certificate is +3 the cubic attached to the x-frame must have all roots
/// inside the open unit disk; a contradiction (possible only when a root sits
/// numerically on the unit circle) is reported as a rejection whose witness
/// is the loop frame minimizing |value|.  Sampling can certify rejection
/// only, never membership.  Throws std::invalid_argument if the form is not
/// primitive within `tol`.
MembershipVerdict membership_test(const ThreeForm& omega, int n_samples = 4096,
                                  std::uint64_t seed = 0, double tol = 1e-9);

/// Winding number of theta in [0, 2*pi] |-> omega(exp(i*theta) * w), computed
/// by summed argument increments over a 720-point grid.  The result is odd
/// and lies in {-3, -1, 1, 3}.  Throws std::invalid_argument when the loop
/// passes within `tol` of zero.
int winding_number(const ThreeForm& omega, const Trivector& w, double tol = 1e-9);

/// Phase over the reference Lagrangian together with the zero-phase fiber
/// representative.
struct CoveringCoords {
    double theta = 0.0; ///< arg of the value on the x-frame, in [0, 2*pi)
    ThreeForm base;     ///< exp(-i*theta) * omega, which has phase zero there
};

/// Decomposes omega along the universal covering: theta is the argument of
/// the value on the reference frame span(dx1, dx2, dx3) and base = exp(-i*
/// theta) * omega.  Throws std::invalid_argument when |value| < tol there.
CoveringCoords covering_coords(const ThreeForm& omega, double tol = 1e-9);

} // namespace stab3
