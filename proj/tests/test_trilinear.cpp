#include "doctest.h"

#include "stab3/json_io.hpp"
#include "stab3/trilinear.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace stab3;
using testutil::Rng;

namespace {

ThreeForm random_form(Rng& rng)
{
    ThreeForm form;
    for (int idx = 0; idx < kNumTriples; ++idx) form[idx] = rng.complex_gaussian();
    return form;
}

Trivector random_trivector(Rng& rng)
{
    std::array<double, kNumTriples> components{};
    for (double& c : components) c = rng.gaussian();
    return Trivector::from_components(components);
}

LagrangianFrame identity_frame()
{
    LagrangianFrame frame{};
    for (int j = 0; j < 3; ++j) frame.columns[j][j] = 1.0;
    return frame;
}

/// Normal form dz123 + g1 dz1 dzbar2 dzbar3 + g2 dzbar1 dz2 dzbar3
/// + g3 dzbar1 dzbar2 dz3.
ThreeForm normal_form(double g1, double g2, double g3)
{
    PrimitiveCoefficients coeffs;
    coeffs.alpha = 1.0;
    coeffs.gamma = {g1, g2, g3};
    return assemble_primitive(coeffs);
}

constexpr double kTol = 1e-12;

} // namespace

TEST_CASE("evaluation on coordinate trivectors")
{
    const ThreeForm holo = ThreeForm::monomial(0, 1, 2); // dz1 dz2 dz3
    const Trivector xxx = Trivector::from_frame(identity_frame());

    CHECK(std::abs(evaluate(holo, xxx) - Complex(1.0, 0.0)) < kTol);

    // dy1 ^ dx2 ^ dx3 has component +1 at the ascending triple (dy1, dx2, dx3).
    std::array<double, kNumTriples> comps{};
    comps[triple_index(1, 2, 4)] = 1.0;
    const Trivector yxx = Trivector::from_components(comps);
    CHECK(std::abs(evaluate(holo, yxx) - Complex(0.0, 1.0)) < kTol);
}

TEST_CASE("evaluation is linear in both arguments")
{
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const ThreeForm a = random_form(rng);
        const ThreeForm b = random_form(rng);
        const Trivector t = random_trivector(rng);
        const Trivector s = random_trivector(rng);
        const Complex scale = rng.complex_gaussian();

        CHECK(std::abs(evaluate(scale * a + b, t) - (scale * evaluate(a, t) + evaluate(b, t))) < 1e-10);

        const double real_scale = rng.symmetric();
        std::array<double, kNumTriples> mixed{};
        for (int i = 0; i < kNumTriples; ++i) mixed[i] = real_scale * t[i] + s[i];
        CHECK(std::abs(evaluate(a, Trivector::from_components(mixed)) -
                       (real_scale * evaluate(a, t) + evaluate(a, s))) < 1e-10);
    }
}

TEST_CASE("determinant lower bound on unitary frames")
{
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        double g1 = 0.6 * rng.unit();
        double g2 = 0.6 * rng.unit();
        double g3 = 0.6 * rng.unit();
        const double total = g1 + g2 + g3;
        if (total >= 0.95) {
            const double shrink = 0.95 / total;
            g1 *= shrink;
            g2 *= shrink;
            g3 *= shrink;
        }
        const ThreeForm omega = normal_form(g1, g2, g3);
        const Trivector vec = Trivector::from_frame(LagrangianFrame{rng.unitary3()});
        CHECK(std::abs(evaluate(omega, vec)) >= 1.0 - g1 - g2 - g3 - 1e-9);
    }
}

TEST_CASE("type split")
{
    const ThreeForm holo = ThreeForm::monomial(0, 1, 2);
    TypeSplit parts = type_split(holo);
    CHECK(parts.p30.norm() == doctest::Approx(1.0));
    CHECK(parts.p21.norm() == 0.0);
    CHECK(parts.p12.norm() == 0.0);
    CHECK(parts.p03.norm() == 0.0);

    PrimitiveCoefficients coeffs;
    coeffs.alpha = Complex(0.5, 1.0);
    coeffs.beta = {Complex(1, 0), Complex(0, 2), Complex(3, -1)};
    coeffs.gamma = {Complex(-1, 0), Complex(0.25, 0), Complex(0, -0.5)};
    coeffs.delta = Complex(0.125, 0.25);
    const ThreeForm mixed = assemble_primitive(coeffs);
    parts = type_split(mixed);
    CHECK(parts.p30.norm_squared() == doctest::Approx(std::norm(coeffs.alpha)));
    CHECK(parts.p21.norm_squared() ==
          doctest::Approx(std::norm(coeffs.beta[0]) + std::norm(coeffs.beta[1]) + std::norm(coeffs.beta[2])));
    CHECK(parts.p12.norm_squared() ==
          doctest::Approx(std::norm(coeffs.gamma[0]) + std::norm(coeffs.gamma[1]) + std::norm(coeffs.gamma[2])));
    CHECK(parts.p03.norm_squared() == doctest::Approx(std::norm(coeffs.delta)));

    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ThreeForm form = random_form(rng);
        parts = type_split(form);
        // Parts sum back to the form and are mutually orthogonal.
        ThreeForm sum = parts.p30 + parts.p21 + parts.p12 + parts.p03;
        CHECK((sum - form).norm() < kTol);
        CHECK(std::abs(inner_product(parts.p30, parts.p21)) < kTol);
        CHECK(std::abs(inner_product(parts.p21, parts.p12)) < kTol);
        CHECK(std::abs(inner_product(parts.p12, parts.p03)) < kTol);
        // Conjugation swaps the outer types.
        const TypeSplit conj_parts = type_split(form.conjugate());
        CHECK((conj_parts.p30 - parts.p03.conjugate()).norm() < kTol);
        CHECK((conj_parts.p03 - parts.p30.conjugate()).norm() < kTol);
    }
}

TEST_CASE("primitivity residual")
{
    CHECK(primitivity_residual(ThreeForm::monomial(0, 1, 2)) < kTol);

    // dz1 ^ dzbar1 ^ dz2 wedges with dz3 ^ dzbar3 only, leaving one 5-form
    // monomial of size |i/2| = 1/2.
    const ThreeForm nonprimitive = ThreeForm::monomial(0, 3, 1);
    CHECK(primitivity_residual(nonprimitive) == doctest::Approx(0.5).epsilon(1e-12));

    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        PrimitiveCoefficients coeffs;
        coeffs.alpha = rng.complex_gaussian();
        for (int i = 0; i < 3; ++i) {
            coeffs.beta[i] = rng.complex_gaussian();
            coeffs.beta_pair[i] = rng.complex_gaussian();
            coeffs.gamma[i] = rng.complex_gaussian();
            coeffs.gamma_pair[i] = rng.complex_gaussian();
        }
        coeffs.delta = rng.complex_gaussian();
        CHECK(primitivity_residual(assemble_primitive(coeffs)) < kTol);
    }
}

TEST_CASE("primitive projection and coefficient chart")
{
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const ThreeForm form = random_form(rng);
        const ThreeForm projected = primitive_projection(form);

        // The projection is primitive and idempotent.
        CHECK(primitivity_residual(projected) < 1e-10);
        CHECK((primitive_projection(projected) - projected).norm() < 1e-10);

        // Extracting the chart coefficients and reassembling reproduces it.
        const ThreeForm rebuilt = assemble_primitive(primitive_coefficients(projected));
        CHECK((rebuilt - projected).norm() < kTol);

        // The difference removed by the projection is orthogonal to the image.
        CHECK(std::abs(inner_product(form - projected, projected)) < 1e-9);
    }

    // A form that is already primitive is fixed by the projection.
    PrimitiveCoefficients coeffs;
    coeffs.alpha = Complex(1.0, -2.0);
    coeffs.beta_pair = {Complex(0.5, 0.5), Complex(0, 1), Complex(2, 0)};
    coeffs.gamma_pair = {Complex(1, 1), Complex(-1, 0.5), Complex(0, -2)};
    const ThreeForm primitive = assemble_primitive(coeffs);
    CHECK((primitive_projection(primitive) - primitive).norm() < kTol);
    const PrimitiveCoefficients back = primitive_coefficients(primitive);
    CHECK(std::abs(back.alpha - coeffs.alpha) < kTol);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(back.beta_pair[i] - coeffs.beta_pair[i]) < kTol);
        CHECK(std::abs(back.gamma_pair[i] - coeffs.gamma_pair[i]) < kTol);
    }
}

TEST_CASE("cubic attached to a Lagrangian loop")
{
    const Trivector xxx = Trivector::from_frame(identity_frame());

    auto cubic = lagrangian_cubic(ThreeForm::monomial(0, 1, 2), xxx);
    CHECK(std::abs(cubic[0] - Complex(1.0, 0.0)) < kTol);
    CHECK(std::abs(cubic[1]) < kTol);
    CHECK(std::abs(cubic[2]) < kTol);
    CHECK(std::abs(cubic[3]) < kTol);

    PrimitiveCoefficients coeffs;
    coeffs.alpha = Complex(1.0, 0.5);
    coeffs.beta = {Complex(0.1, 0), Complex(0, 0.2), Complex(-0.3, 0.1)};
    coeffs.gamma = {Complex(0.2, -0.1), Complex(0.05, 0), Complex(0, -0.15)};
    coeffs.delta = Complex(-0.25, 0.1);
    const ThreeForm form = assemble_primitive(coeffs);

    cubic = lagrangian_cubic(form, xxx);
    CHECK(std::abs(cubic[0] - coeffs.alpha) < kTol);
    CHECK(std::abs(cubic[1] - (coeffs.beta[0] + coeffs.beta[1] + coeffs.beta[2])) < kTol);
    CHECK(std::abs(cubic[2] - (coeffs.gamma[0] + coeffs.gamma[1] + coeffs.gamma[2])) < kTol);
    CHECK(std::abs(cubic[3] - coeffs.delta) < kTol);

    // Direct-evaluation oracle: rotating the frame by theta must match
    // exp(-3 i theta) P(exp(2 i theta)).
    Rng rng(19);
    const LagrangianFrame frame{rng.unitary3()};
    const Trivector tagged = Trivector::from_frame(frame);
    const ThreeForm generic = random_form(rng);
    cubic = lagrangian_cubic(generic, tagged);
    for (double theta : {0.0, M_PI / 4.0, M_PI / 2.0, 3.0 * M_PI / 4.0}) {
        const Complex rotated_value = evaluate(generic, Trivector::from_frame(rotate(frame, theta)));
        const Complex zeta = std::polar(1.0, 2.0 * theta);
        Complex poly = cubic[0];
        for (int k = 1; k < 4; ++k) poly = poly * zeta + cubic[k];
        const Complex predicted = std::polar(1.0, -3.0 * theta) * poly;
        CHECK(std::abs(rotated_value - predicted) < kTol);
    }

    CHECK_THROWS_AS((void)lagrangian_cubic(form, random_trivector(rng)), std::invalid_argument);
    LagrangianFrame skewed = identity_frame();
    skewed.columns[0][0] = 2.0;
    CHECK_THROWS_AS((void)Trivector::from_frame(skewed), std::invalid_argument);
}

TEST_CASE("norm invariance under unitary pullback")
{
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = rng.unitary3();
        // Embed the unitary as a real matrix in (x1, y1, ..., y3) coordinates:
        // each complex entry a+bi becomes the 2x2 block [[a, -b], [b, a]].
        RealMatrix6 m{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const Complex entry = u[j][i];
                m[2 * i][2 * j] = entry.real();
                m[2 * i][2 * j + 1] = -entry.imag();
                m[2 * i + 1][2 * j] = entry.imag();
                m[2 * i + 1][2 * j + 1] = entry.real();
            }
        const ThreeForm form = random_form(rng);
        CHECK(pullback_linear(form, m).norm() == doctest::Approx(form.norm()).epsilon(1e-10));
        // A global phase also preserves the norm.
        CHECK((std::polar(1.0, rng.symmetric()) * form).norm() == doctest::Approx(form.norm()).epsilon(1e-12));
    }
}

TEST_CASE("pullback pairs with the pushforward of trivectors")
{
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        RealMatrix6 m{};
        for (auto& row : m)
            for (double& entry : row) entry = rng.symmetric();
        const ThreeForm form = random_form(rng);
        const Trivector vec = random_trivector(rng);
        CHECK(std::abs(evaluate(pullback_linear(form, m), vec) - evaluate(form, apply_linear(vec, m))) < 1e-9);
    }
}

TEST_CASE("three-form JSON round trip")
{
    Rng rng(31);
    const ThreeForm form = random_form(rng);
    const ThreeForm back = three_form_from_json(three_form_to_json(form));
    CHECK((back - form).norm() < kTol);

    // Generators may arrive in any order; the wedge sign applies.
    const auto parsed = three_form_from_json(nlohmann::json::parse(
        R"({"terms":[{"gens":["z2","z1","zbar3"],"re":1.0,"im":0.0}]})"));
    CHECK(std::abs(parsed.coeff(0, 1, 5) - Complex(-1.0, 0.0)) < kTol);

    CHECK_THROWS_AS((void)three_form_from_json(nlohmann::json::parse(
                        R"({"terms":[{"gens":["z9","z1","z2"],"re":1.0}]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)three_form_from_json(nlohmann::json::parse(R"({"nope":[]})")),
                    std::invalid_argument);
}
