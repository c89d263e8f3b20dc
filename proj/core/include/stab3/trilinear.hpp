#pragma once

// Complex alternating 3-forms on R^6 in the 20-monomial dz/dzbar basis,
// together with real trivectors they can be evaluated on.  Covers type
// decomposition, primitivity, the primitive 14-coefficient chart, and the
// cubic polynomial attached to a loop of Lagrangian frames.
//
// Conventions:
//   * form generators, in storage order: dz1, dz2, dz3, dzbar1, dzbar2, dzbar3
//     (indices 0..5); monomials are stored with ascending generator indices
//     and Koszul signs absorbed into the coefficients.
//   * vector generators, in storage order: dx1, dy1, dx2, dy2, dx3, dy3
//     (duals of the real coordinates x1,y1,...,y3 with z_k = x_k + i*y_k).
//   * dz_k(dx_j) = delta_kj, dz_k(dy_j) = i*delta_kj, conjugates accordingly.
//   * the 20 monomials of either kind are declared orthonormal.

#include <array>
#include <complex>
#include <optional>

namespace stab3 {

using Complex = std::complex<double>;

inline constexpr int kNumGenerators = 6;
inline constexpr int kNumTriples = 20;

/// Ascending generator triple of the monomial with the given storage index.
std::array<int, 3> triple_at(int index);

/// Storage index of the ascending triple (a < b < c).
int triple_index(int a, int b, int c);

/// Complex alternating 3-form on R^6 with 20 monomial coefficients.
class ThreeForm {
public:
    ThreeForm() = default;

    /// Single wedge monomial with generators in any order (distinct indices);
    /// the storage coefficient carries the reordering sign.
    static ThreeForm monomial(int g1, int g2, int g3, Complex coeff = 1.0);

    Complex& operator[](int index) { return coeffs_[static_cast<std::size_t>(index)]; }
    const Complex& operator[](int index) const { return coeffs_[static_cast<std::size_t>(index)]; }

    /// Signed coefficient of the wedge of the given generators in any order;
    /// zero if an index repeats.
    Complex coeff(int g1, int g2, int g3) const;

    /// Adds coeff * (g1 ^ g2 ^ g3); a repeated generator contributes nothing.
    void add_term(int g1, int g2, int g3, Complex coeff);

    ThreeForm& operator+=(const ThreeForm& rhs);
    ThreeForm& operator-=(const ThreeForm& rhs);
    ThreeForm& operator*=(Complex scale);
    friend ThreeForm operator+(ThreeForm lhs, const ThreeForm& rhs) { return lhs += rhs; }
    friend ThreeForm operator-(ThreeForm lhs, const ThreeForm& rhs) { return lhs -= rhs; }
    friend ThreeForm operator*(Complex scale, ThreeForm form) { return form *= scale; }

    /// Complex conjugate form: conjugates coefficients and swaps dz_k <-> dzbar_k.
    ThreeForm conjugate() const;

    double norm_squared() const;
    double norm() const;

private:
    std::array<Complex, kNumTriples> coeffs_{};
};

/// Hermitian inner product with the monomials orthonormal (conjugate-linear
/// in the first argument).
Complex inner_product(const ThreeForm& a, const ThreeForm& b);

/// Three complex column vectors spanning a Lagrangian subspace of C^3 = R^6.
struct LagrangianFrame {
    /// columns[j][i] is the i-th complex coordinate of the j-th column.
    std::array<std::array<Complex, 3>, 3> columns;
};

/// Frame with every column multiplied by exp(i*theta); unitarity is preserved.
LagrangianFrame rotate(const LagrangianFrame& frame, double theta);

/// Real trivector on R^6 with 20 monomial components, optionally tagged with
/// the unitary frame whose real wedge it is.
class Trivector {
public:
    Trivector() = default;

    static Trivector from_components(const std::array<double, kNumTriples>& components);

    /// Real wedge of the frame columns.  Throws std::invalid_argument if the
    /// columns are not unitary within the tolerance.
    static Trivector from_frame(const LagrangianFrame& frame, double tolerance = 1e-9);

    double operator[](int index) const { return components_[static_cast<std::size_t>(index)]; }

    bool has_frame() const { return frame_.has_value(); }
    const LagrangianFrame& frame() const { return *frame_; }

private:
    std::array<double, kNumTriples> components_{};
    std::optional<LagrangianFrame> frame_;
};

/// Full contraction of the form with the trivector.
Complex evaluate(const ThreeForm& form, const Trivector& vec);

/// Components by number of conjugated generators; their sum is the input.
struct TypeSplit {
    ThreeForm p30; ///< no bars
    ThreeForm p21; ///< one bar
    ThreeForm p12; ///< two bars
    ThreeForm p03; ///< three bars
};

TypeSplit type_split(const ThreeForm& form);

/// Norm of the 5-form  form ^ omega  with omega = dx1^dy1 + dx2^dy2 + dx3^dy3;
/// vanishes exactly on primitive forms.
double primitivity_residual(const ThreeForm& form);

/// Orthogonal projection onto the primitive subspace (the kernel of wedging
/// with omega), computed by subtracting the components along omega ^ (each
/// generator).
ThreeForm primitive_projection(const ThreeForm& form);

/// Named coefficients of the 14-dimensional primitive chart.  The pair slots
/// are ordered {12, 13, 23}.
struct PrimitiveCoefficients {
    Complex alpha{};
    std::array<Complex, 3> beta{};
    std::array<Complex, 3> beta_pair{};
    std::array<Complex, 3> gamma{};
    std::array<Complex, 3> gamma_pair{};
    Complex delta{};
};

/// Reads the chart coefficients off a form by orthogonal projection; exact
/// whenever the form is primitive.
PrimitiveCoefficients primitive_coefficients(const ThreeForm& form);

/// Builds the primitive form with the given chart coefficients.
ThreeForm assemble_primitive(const PrimitiveCoefficients& coeffs);

/// Coefficients (c3, c2, c1, c0) of the cubic P with
/// form(exp(i*theta) * frame) = exp(-3i*theta) * P(exp(2i*theta)); they are
/// the four type components evaluated on the trivector.  Requires a
/// frame-tagged trivector and throws std::invalid_argument otherwise.
std::array<Complex, 4> lagrangian_cubic(const ThreeForm& form, const Trivector& vec);

using RealMatrix6 = std::array<std::array<double, 6>, 6>;

/// Pullback of the form along the real-linear map with the given matrix in
/// the coordinate order (x1, y1, x2, y2, x3, y3):
/// pullback_linear(form, m) evaluated on v equals form evaluated on m*v.
ThreeForm pullback_linear(const ThreeForm& form, const RealMatrix6& m);

/// Image of the trivector under the real-linear map (third exterior power of
/// m); any frame tag is dropped.
Trivector apply_linear(const Trivector& vec, const RealMatrix6& m);

} // namespace stab3
