#pragma once

#include "stab3/detail/exact_linalg.hpp"
#include "stab3/lattice.hpp"
#include "stab3/rational.hpp"

#include <array>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

// Quadratic-form certificates for the damped central charges.
//
// Every charge in the damped family comes with a candidate quadratic form
// that must be negative definite on the charge's kernel.  This module builds
// those forms with exact rational Gram matrices on the rank-14 lattice,
// restricts them to numerically orthonormalized kernel bases, and certifies
// definiteness both pointwise and across parameter grids.  A six-variable
// coefficient-chart model of the same forms is provided in closed form so
// its principal minors can be compared exactly against hand-derived
// formulas.

namespace stab3 {

/// Coordinate space a quadratic form is expressed on.
enum class FormSpace {
    Lattice14,  ///< the rank-14 lattice of the triple product
    Coeff12,    ///< the asymptotic-coefficient chart, free variables
                ///< (a1, a2, a3, b1, b2, b3)
};

/// Symmetric quadratic form together with the named scalar parameters it was
/// built from.  The Gram matrix is exact.
struct QuadForm {
    FormSpace space = FormSpace::Lattice14;
    detail::Mat<Rational> gram;
    std::vector<std::pair<std::string, Rational>> params;
};

/// Value of the form at a point, computed as point^T gram point.
/// Throws std::invalid_argument on a dimension mismatch.
Rational evaluate(const QuadForm& form, std::span<const Rational> point);

/// Negated Euler square of a surface lattice vector.  The vector must live
/// on the surface ambient and have real coordinates.
Rational surface_quadratic(const LatticeVec& vec);

/// Smallest constant c such that the surface square never exceeds
/// c times the squared polarization charge:
///   surface_quadratic(v) <= c * |<exp-polarization, v>|^2  for all v.
/// Computed exactly by splitting off the kernel of the charge and solving
/// the resulting two-dimensional matrix pencil; the bound is attained, so
/// strict inequalities downstream must use constants strictly above it.
Rational surface_support_constant();

/// Quadratic form attached to one of the six charge transforms: the product
/// of the two mixed asymptotic coefficients minus the product of the two
/// diagonal ones, plus eta times the surface square of the twisted
/// projection.  transform is 1-based as in charge_transform; eta must be
/// positive.
QuadForm lattice_quadratic(int transform, const Rational& eta);

/// Weighted combination of the six transform forms: weight alpha multiplies
/// the pair (1, 4), beta the pair (2, 5), gamma the pair (3, 6); etas[i-1]
/// is the surface damping of transform i.  All weights and dampings must be
/// positive.
QuadForm combined_quadratic(const Rational& alpha, const Rational& beta, const Rational& gamma,
                            const std::array<Rational, 6>& etas);

/// Values of the damped central charge on the fourteen basis vectors.
std::vector<CRat> reduced_charge_values(const Rational& alpha, const Rational& beta,
                                        const Rational& gamma);

/// Orthonormal basis (as columns) of the real twelve-dimensional kernel of a
/// complex charge functional, given its values on the fourteen basis
/// vectors.  Throws std::invalid_argument if the real and imaginary parts do
/// not span two independent directions (checked exactly).
detail::Mat<double> kernel_basis(const std::vector<CRat>& charge_values);

/// A restricted form counts as negative definite when its largest eigenvalue
/// lies strictly below this tolerance.
inline constexpr double kDefinitenessTolerance = -1e-10;

/// Largest eigenvalue of a form restricted to a subspace, with the verdict
/// derived from kDefinitenessTolerance.
struct DefinitenessResult {
    double max_eigenvalue = 0.0;
    bool negative_definite = false;
};

/// Restricts the form to the subspace spanned by the (orthonormal) basis
/// columns and reports the largest eigenvalue of the restriction.
DefinitenessResult restricted_definiteness(const QuadForm& form, const detail::Mat<double>& basis);

/// Parameters of the coefficient-chart model.  The weights multiply the
/// three summand pairs, the damping parameters define the charge whose
/// kernel the chart describes, bound_c is the shared constant of the
/// correction terms, and lambda scales the damping toward the boundary.
struct CoeffFormParams {
    Rational weight_alpha;
    Rational weight_beta;
    Rational weight_gamma;
    Rational damp_alpha;
    Rational damp_beta;
    Rational damp_gamma;
    Rational bound_c;
    Rational lambda;
};

/// Closed-form Gram of the weighted chart form on the kernel of the scaled
/// charge, in the free variables (a1, a2, a3, b1, b2, b3) after the two
/// trailing coefficient pairs are eliminated through the kernel relations.
/// The result is block diagonal with identical 3x3 blocks.  Throws
/// std::invalid_argument when the elimination denominator
/// 1 - lambda * (damping sum) vanishes or a weight or bound is not positive.
QuadForm abstract_kernel_form(const CoeffFormParams& params);

/// Hessian (twice the Gram) of the b-variable block of the difference
/// between the undamped reference form -- the chart form at lambda = 0 with
/// the weights of vanished damping directions removed -- and the chart form
/// at the given lambda.  Its principal minors admit closed formulas used as
/// exact regression oracles.
detail::Mat<Rational> scaling_difference_hessian(const CoeffFormParams& params);

/// Determinant of the principal submatrix picked out by the given strictly
/// increasing index list.
Rational principal_minor(const detail::Mat<Rational>& matrix, std::span<const int> indices);

/// Grid resolution for the chart-form definiteness survey.  Damping axes are
/// sampled on axis_points values between axis_min and axis_max; the scaling
/// runs through lambda_steps values between 0 and 1 inclusive.
struct GridSpec {
    int axis_points = 11;
    int lambda_steps = 11;
    Rational axis_min = Rational(1, 20);
    Rational axis_max = Rational(3, 10);
    int threads = 1;
};

/// One grid point whose restricted form failed to be negative definite.
struct GridViolation {
    CoeffFormParams params;
    double max_eigenvalue = 0.0;
};

/// Outcome of a definiteness survey: every grid point is expected to pass,
/// and the worst (largest) eigenvalue across the grid is reported.
struct GridReport {
    long long points_checked = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    std::vector<GridViolation> violations;
};

/// Sweeps the chart form over a grid of damping parameters and scalings and
/// verifies negative definiteness at every point.  which_case selects how
/// many damping parameters are active: 1 = all three, 2 = two (the third
/// weight is replaced by a sixth of the remaining slack), 3 = one (both
/// missing weights are replaced likewise).  The shared constant is half the
/// slack left after the replacements.
GridReport verify_definiteness_grid(int which_case, const GridSpec& spec = {});

/// One scaling step of a support check.
struct SupportPoint {
    Rational lambda;
    double max_eigenvalue = 0.0;
};

/// Result of a full lattice-side support check: the weights, shared bound
/// and surface damping that were used, plus the eigenvalue margin at every
/// scaling step.
struct SupportReport {
    Rational weight_alpha;
    Rational weight_beta;
    Rational weight_gamma;
    Rational bound_c;
    Rational eta;
    std::vector<SupportPoint> points;
    bool negative_definite = false;
    double worst_margin = -std::numeric_limits<double>::infinity();
};

/// End-to-end check that the combined lattice form stays negative definite
/// on the kernels of the scaled charges lambda * (alpha, beta, gamma) for
/// lambda_steps values of lambda between 0 and 1.  Vanishing parameters get
/// replacement weights of a sixth of the slack; the shared bound is half the
/// slack after replacements and doubles as the surface damping, which keeps
/// it strictly below the ratio bound/surface_support_constant demanded by
/// the certificate.  Requires nonnegative parameters with sum below one and
/// at least two steps.
SupportReport support_check(const Rational& alpha, const Rational& beta, const Rational& gamma,
                            int lambda_steps = 11);

/// True when the twisted surface projections of the vector under all six
/// charge transforms vanish.  Because the stacked projections have full
/// rank, this can only happen for the zero vector, which is asserted.
bool vanishing_check(const LatticeVec& vec);

}  // namespace stab3
