#pragma once

// The Sp(6,R) x GL+(2,R) action on three-forms, a fixed basis of the
// symmetric part of the Cartan decomposition for the optimizer, and
// constructive approximation of real symplectic matrices by exactly
// symplectic rational words in the generators
//
//   N(A) = [[1, A], [0, 1]]  (A symmetric),
//   H(A) = [[A, 0], [0, (A^T)^-1]]  (A invertible),
//   J    = [[0, 1], [-1, 0]].
//
// Symplectic matrices use the block coordinate order (x1, x2, x3, y1, y2, y3);
// conversion to the interleaved order used by three-forms happens internally.

#include "stab3/detail/exact_linalg.hpp"
#include "stab3/rational.hpp"
#include "stab3/trilinear.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace stab3 {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix3d = Eigen::Matrix3d;
using Matrix2d = Eigen::Matrix2d;
using Matrix3cd = Eigen::Matrix3cd;

/// The standard symplectic form [[0, I], [-1, 0]] in block coordinates.
Matrix6d block_j6();

/// Max-abs entry of g^T J g - J; zero exactly on symplectic matrices.
double symplectic_residual(const Matrix6d& g);

/// Element of Sp(6,R) x GL+(2,R).
struct GroupElement {
    Matrix6d sp = Matrix6d::Identity();
    Matrix2d gl2 = Matrix2d::Identity();

    static GroupElement identity() { return {}; }
    static GroupElement from_sp(const Matrix6d& m);
    static GroupElement from_gl2(const Matrix2d& m);

    /// Throws std::invalid_argument unless sp is symplectic within the
    /// tolerance and det(gl2) > 0.
    void validate(double tolerance = 1e-10) const;

    friend GroupElement operator*(const GroupElement& lhs, const GroupElement& rhs)
    {
        return {lhs.sp * rhs.sp, lhs.gl2 * rhs.gl2};
    }
};

/// Left action: the sp part substitutes g^-1 into the arguments, the gl2 part
/// acts on values through C = R^2.  Validates g first.
ThreeForm act(const GroupElement& g, const ThreeForm& form);

/// Unitary 3x3 matrix embedded as the symplectic matrix of z -> u z on
/// C^3 = R^6, in block coordinates: [[Re u, -Im u], [Im u, Re u]].
/// Throws std::invalid_argument if u is not unitary within the tolerance.
Matrix6d embed_unitary(const Matrix3cd& u, double tolerance = 1e-10);

/// Fixed 14-element basis of the symmetric part of the Cartan decomposition:
/// indices 0..5 are block-diagonal [[S, 0], [0, -S]] and 6..11 are
/// block-antidiagonal [[0, S], [S, 0]], with S running over
/// E11, E22, E33, E12+E21, E13+E31, E23+E32; index 12 is diag(1,-1) and
/// index 13 is [[0,1],[1,0]] acting through the gl2 factor.
inline constexpr int kLieDirections = 14;

struct LieDirection {
    int index = 0;
};

/// sp(6) component of the basis element (zero for the gl2 directions).
Matrix6d lie_sp_part(LieDirection direction);

/// gl(2) component of the basis element (zero for the sp directions).
Matrix2d lie_gl2_part(LieDirection direction);

/// exp(t * direction).
GroupElement exp_direction(LieDirection direction, double t);

/// exp of an arbitrary combination of the 14 basis directions (the sp and gl2
/// factors commute and are exponentiated separately).
GroupElement exp_tangent(const std::array<double, kLieDirections>& coefficients);

/// Generator factor of a word: N(A) with A symmetric, H(A) with A invertible,
/// or the fixed rotation J.  Parameters are real or exact rationals; a word is
/// rational-tagged when every factor is.
struct WordFactor {
    enum class Kind { N, H, J };

    Kind kind = Kind::J;
    std::variant<Matrix3d, detail::Mat<Rational>> param{Matrix3d::Zero()};

    bool is_rational() const { return std::holds_alternative<detail::Mat<Rational>>(param); }

    static WordFactor n(const Matrix3d& a) { return {Kind::N, a}; }
    static WordFactor h(const Matrix3d& a) { return {Kind::H, a}; }
    static WordFactor n(detail::Mat<Rational> a) { return {Kind::N, std::move(a)}; }
    static WordFactor h(detail::Mat<Rational> a) { return {Kind::H, std::move(a)}; }
    static WordFactor j() { return {Kind::J, Matrix3d::Zero()}; }
};

using GeneratorWord = std::vector<WordFactor>;

bool is_rational_word(const GeneratorWord& word);

/// 6x6 matrix of a single factor / of the whole word (product left to right).
Matrix6d factor_matrix(const WordFactor& factor);
Matrix6d word_matrix(const GeneratorWord& word);

/// Exact product of a rational-tagged word; throws std::invalid_argument if
/// any factor is real-valued.
detail::Mat<Rational> word_matrix_rational(const GeneratorWord& word);

/// Decomposes a symplectic matrix into generator factors whose product
/// reproduces it within 1e-10.  When the upper-left block is well conditioned
/// the word is N-type * H * N-type; otherwise quarter rotations built from the
/// generators are prepended to move a well-conditioned block into place.
/// Throws std::invalid_argument for non-symplectic input and std::runtime_error
/// (reporting the best condition found) if no rotation produces a usable block.
GeneratorWord nhj_decompose(const Matrix6d& g);

/// Replaces the parameters of the decomposition of g by rational approximants
/// (continued-fraction convergents, symmetrized first where symmetry is
/// required) with the denominator bound grown until the exactly symplectic
/// rational product g' satisfies ||g - g'||_F <= epsilon.  Throws
/// std::domain_error if the bound max_denominator does not suffice.
GeneratorWord rationalize(const Matrix6d& g, double epsilon,
                          long long max_denominator = 1'000'000'000'000LL);

/// Best rational approximation with denominator at most max_denominator.
Rational approx_rational(double x, long long max_denominator);

} // namespace stab3
