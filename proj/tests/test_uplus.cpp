#include "doctest.h"

#include "stab3/groups.hpp"
#include "stab3/uplus.hpp"
#include "test_util.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

using namespace stab3;
using testutil::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent root oracle: eigenvalues of the monic companion matrix.
std::array<Complex, 3> companion_roots(Complex c3, Complex c2, Complex c1, Complex c0)
{
    const Complex a = c2 / c3;
    const Complex b = c1 / c3;
    const Complex c = c0 / c3;
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(1, 0) = 1.0;
    m(2, 1) = 1.0;
    m(0, 2) = -c;
    m(1, 2) = -b;
    m(2, 2) = -a;
    return {m.eigenvalues()(0), m.eigenvalues()(1), m.eigenvalues()(2)};
}

double max_root_modulus(const std::array<Complex, 3>& roots)
{
    double best = 0.0;
    for (const Complex& root : roots) best = std::max(best, std::abs(root));
    return best;
}

// dz1 ^ dz2 ^ dz3 + g1 dz1 ^ dzbar2 ^ dzbar3 + g2 dzbar1 ^ dz2 ^ dzbar3
//                 + g3 dzbar1 ^ dzbar2 ^ dz3.
ThreeForm normal_form(double g1, double g2, double g3)
{
    ThreeForm omega = ThreeForm::monomial(0, 1, 2);
    omega += Complex(g1) * ThreeForm::monomial(0, 4, 5);
    omega += Complex(g2) * ThreeForm::monomial(3, 1, 5);
    omega += Complex(g3) * ThreeForm::monomial(3, 4, 2);
    return omega;
}

// (dz1 + dzbar1) ^ (dz2 + dzbar2) ^ (dz3 + dzbar3) / 8.
ThreeForm real_x_form()
{
    ThreeForm omega;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                omega.add_term(i * 3, 1 + j * 3, 2 + k * 3, 0.125);
    return omega;
}

Trivector x_frame_trivector() { return Trivector::from_frame(coordinate_frame(0)); }

} // namespace

TEST_CASE("root location: pinned examples")
{
    // z^3: triple root at the origin.
    CHECK(roots_in_open_disk(Cubic{1.0, 0.0, 0.0, 0.0}));

    // z^3 + 3z: roots 0 and +/- i*sqrt(3); the oracle confirms a root outside.
    const Cubic spread{1.0, 0.0, 3.0, 0.0};
    CHECK_FALSE(roots_in_open_disk(spread));
    CHECK(max_root_modulus(companion_roots(1.0, 0.0, 3.0, 0.0)) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    // z^3 - (3i/2) z^2 + z + i/2 picks up a root outside the disk.
    const Cubic halfway{1.0, Complex(0.0, -1.5), 1.0, Complex(0.0, 0.5)};
    CHECK_FALSE(roots_in_open_disk(halfway));
    CHECK(max_root_modulus(companion_roots(1.0, Complex(0.0, -1.5), 1.0, Complex(0.0, 0.5))) >=
          1.0);

    CHECK_THROWS_AS(roots_in_open_disk(Cubic{0.0, 1.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(cubic_roots(Cubic{0.0, 1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("root location: agreement with constructed roots and the eigenvalue oracle")
{
    Rng rng(20240811u);
    for (int trial = 0; trial < 10000; ++trial) {
        // Sample roots with moduli bounded away from the unit circle.
        std::array<Complex, 3> roots;
        for (Complex& root : roots) {
            double modulus = 0.0;
            do {
                modulus = 2.0 * rng.unit();
            } while (std::abs(modulus - 1.0) < 1e-3);
            root = std::polar(modulus, 2.0 * kPi * rng.unit());
        }
        const Complex lead = std::polar(0.5 + 1.5 * rng.unit(), 2.0 * kPi * rng.unit());
        const Complex e1 = roots[0] + roots[1] + roots[2];
        const Complex e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
        const Complex e3 = roots[0] * roots[1] * roots[2];
        const Cubic cubic{lead, -lead * e1, lead * e2, -lead * e3};

        const bool expected = std::abs(roots[0]) < 1.0 && std::abs(roots[1]) < 1.0 &&
                              std::abs(roots[2]) < 1.0;
        CHECK(roots_in_open_disk(cubic) == expected);

        const std::array<Complex, 3> recovered =
            companion_roots(cubic.c3, cubic.c2, cubic.c1, cubic.c0);
        const bool oracle = max_root_modulus(recovered) < 1.0;
        CHECK(oracle == expected);

        const std::array<Complex, 3> internal = cubic_roots(cubic);
        CHECK(max_root_modulus(internal) ==
              doctest::Approx(max_root_modulus(recovered)).epsilon(1e-8));
    }
}

TEST_CASE("instability hypothesis: pinned examples and root consequence")
{
    // a = -3i/2, b = 1, c = i/2: margin 3/4 against |a conj(c) - conj(b)| = 7/4.
    CHECK(polyunstable_hypothesis(Cubic{1.0, Complex(0.0, -1.5), 1.0, Complex(0.0, 0.5)}));
    // z^3: 1 - 0 <= 0 fails.
    CHECK_FALSE(polyunstable_hypothesis(Cubic{1.0, 0.0, 0.0, 0.0}));

    Rng rng(777100u);
    int fired = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Cubic cubic{1.0, rng.complex_gaussian(), rng.complex_gaussian(),
                          rng.complex_gaussian()};
        if (!polyunstable_hypothesis(cubic)) continue;
        ++fired;
        CHECK_FALSE(roots_in_open_disk(cubic));
        const double outermost =
            max_root_modulus(companion_roots(cubic.c3, cubic.c2, cubic.c1, cubic.c0));
        CHECK(outermost >= 1.0 - 1e-9);
    }
    CHECK(fired > 100); // the property must actually be exercised
}

TEST_CASE("coordinate and Haar frames")
{
    const LagrangianFrame x_frame = coordinate_frame(0);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            CHECK(x_frame.columns[j][i] == (i == j ? Complex(1.0) : Complex(0.0)));
    const LagrangianFrame y_frame = coordinate_frame(7);
    for (int j = 0; j < 3; ++j)
        CHECK(y_frame.columns[j][j] == Complex(0.0, 1.0));
    CHECK_THROWS_AS(coordinate_frame(8), std::invalid_argument);
    CHECK_THROWS_AS(coordinate_frame(-1), std::invalid_argument);

    // Unitarity (from_frame validates) and determinism of the sample streams.
    for (std::uint64_t index = 0; index < 32; ++index) {
        const LagrangianFrame frame = haar_lagrangian_frame(42, index);
        CHECK_NOTHROW(Trivector::from_frame(frame));
        const LagrangianFrame again = haar_lagrangian_frame(42, index);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i)
                CHECK(frame.columns[j][i] == again.columns[j][i]);
    }
    const LagrangianFrame a = haar_lagrangian_frame(42, 0);
    const LagrangianFrame b = haar_lagrangian_frame(42, 1);
    CHECK(std::abs(a.columns[0][0] - b.columns[0][0]) > 0.0);
}

TEST_CASE("membership: holomorphic volume form passes with unit values")
{
    const MembershipVerdict verdict = membership_test(ThreeForm::monomial(0, 1, 2), 1000, 7);
    CHECK(verdict.status == MembershipStatus::PassedSamples);
    CHECK_FALSE(verdict.witness.has_value());
    CHECK(verdict.samples_used == 1000);
    CHECK(verdict.min_abs_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("membership: real form is rejected with a vanishing witness")
{
    const ThreeForm real_form = real_x_form();
    CHECK(primitivity_residual(real_form) < 1e-12);
    const MembershipVerdict verdict = membership_test(real_form, 100, 3);
    CHECK(verdict.status == MembershipStatus::RejectedWitness);
    REQUIRE(verdict.witness.has_value());
    CHECK(verdict.witness->abs_value < 1e-9);
    CHECK(std::abs(evaluate(real_form, verdict.witness->frame)) < 1e-9);
    CHECK(verdict.samples_used == 0); // a coordinate frame already vanishes
}

TEST_CASE("membership: normal form obeys the Hadamard lower bound")
{
    const MembershipVerdict verdict = membership_test(normal_form(0.2, 0.2, 0.2), 500, 11);
    CHECK(verdict.status == MembershipStatus::PassedSamples);
    CHECK(verdict.min_abs_value >= 0.4 - 1e-9);
}

TEST_CASE("membership: rejects non-primitive input and is deterministic")
{
    CHECK_THROWS_AS(membership_test(ThreeForm::monomial(0, 3, 1), 10, 0),
                    std::invalid_argument);

    const ThreeForm omega = normal_form(0.1, 0.25, 0.05);
    const MembershipVerdict first = membership_test(omega, 256, 12345);
    const MembershipVerdict second = membership_test(omega, 256, 12345);
    CHECK(first.status == MembershipStatus::PassedSamples);
    CHECK(first.samples_used == second.samples_used);
    CHECK(first.min_abs_value == second.min_abs_value); // bitwise reproducible
}

TEST_CASE("winding: pinned loops")
{
    const Trivector w = x_frame_trivector();
    const ThreeForm volume = ThreeForm::monomial(0, 1, 2);
    CHECK(winding_number(volume, w) == 3);
    CHECK(winding_number(volume.conjugate(), w) == -3);
    CHECK(winding_number(normal_form(0.1, 0.2, 0.3), w) == 3);

    // The loop of a real form passes through zero.
    CHECK_THROWS_AS(winding_number(real_x_form(), w), std::invalid_argument);

    // An untagged trivector with the same components gives the same loop.
    RealMatrix6 identity{};
    for (int i = 0; i < 6; ++i) identity[i][i] = 1.0;
    const Trivector untagged = apply_linear(w, identity);
    CHECK_FALSE(untagged.has_frame());
    CHECK(winding_number(volume, untagged) == 3);
}

TEST_CASE("winding: invariance under phase scaling and small perturbations")
{
    Rng rng(909090u);
    const Trivector w = x_frame_trivector();
    for (int trial = 0; trial < 50; ++trial) {
        const double g1 = 0.3 * rng.unit();
        const double g2 = 0.3 * rng.unit();
        const double g3 = 0.3 * rng.unit();
        const ThreeForm omega = normal_form(g1, g2, g3);
        const int base = winding_number(omega, w);
        CHECK(base == 3);

        const double phase = 2.0 * kPi * rng.unit();
        CHECK(winding_number(std::polar(1.0, phase) * omega, w) == base);

        ThreeForm perturbed = omega;
        for (int index = 0; index < kNumTriples; ++index)
            perturbed[index] += 1e-6 * rng.complex_gaussian();
        CHECK(winding_number(perturbed, w) == base);
    }
}

TEST_CASE("covering coordinates: pinned examples and round trip")
{
    const ThreeForm volume = ThreeForm::monomial(0, 1, 2);
    const CoveringCoords at_base = covering_coords(volume);
    CHECK(at_base.theta == 0.0);
    CHECK((at_base.base - volume).norm() < 1e-15);

    const CoveringCoords quarter = covering_coords(Complex(0.0, 1.0) * volume);
    CHECK(quarter.theta == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK((quarter.base - volume).norm() < 1e-14);

    const ThreeForm omega = normal_form(0.15, 0.05, 0.3);
    for (const double phase : {0.3, 2.0, kPi, 5.5}) {
        const CoveringCoords coords = covering_coords(std::polar(1.0, phase) * omega);
        CHECK(coords.theta == doctest::Approx(phase).epsilon(1e-12));
        CHECK((coords.base - omega).norm() < 1e-12);
        // Round trip through the covering map.
        const ThreeForm rebuilt = std::polar(1.0, coords.theta) * coords.base;
        CHECK((rebuilt - std::polar(1.0, phase) * omega).norm() < 1e-14);
    }

    // Purely imaginary part of the volume form vanishes on the x-frame.
    ThreeForm imaginary_part = volume;
    imaginary_part -= volume.conjugate();
    CHECK_THROWS_AS(covering_coords(imaginary_part), std::invalid_argument);
}

TEST_CASE("membership: stable under the group action on normal forms")
{
    Rng rng(5151515u);
    for (int trial = 0; trial < 1000; ++trial) {
        const double g1 = 0.2 * rng.unit();
        const double g2 = 0.2 * rng.unit();
        const double g3 = 0.1 * rng.unit();
        const ThreeForm omega = normal_form(g1, g2, g3);

        std::array<double, 14> direction{};
        for (double& entry : direction) entry = 0.25 * rng.symmetric();
        const GroupElement g = exp_tangent(direction);
        const ThreeForm moved = act(g, omega);

        const MembershipVerdict verdict =
            membership_test(moved, 32, static_cast<std::uint64_t>(trial));
        CHECK(verdict.status == MembershipStatus::PassedSamples);
    }
}
