#include "doctest.h"

#include "stab3/lattice.hpp"
#include "stab3/product_charge.hpp"
#include "stab3/support.hpp"

#include <array>
#include <cmath>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

using namespace stab3;

namespace {

using R = Rational;

LatticeVec basis_vec(Ambient amb, int slot)
{
    LatticeVec v(amb);
    v[slot] = CRat(1);
    return v;
}

LatticeVec surface_vec(std::initializer_list<int> coords)
{
    LatticeVec v(Ambient::E2);
    int i = 0;
    for (int c : coords) v[i++] = CRat(c);
    return v;
}

std::vector<R> real_coords(const LatticeVec& v)
{
    std::vector<R> out(static_cast<size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        REQUIRE(v[i].im == R(0));
        out[static_cast<size_t>(i)] = v[i].re;
    }
    return out;
}

detail::Mat<R> rational_matrix(const detail::Mat<CRat>& m)
{
    detail::Mat<R> out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) {
            REQUIRE(m(i, j).im == R(0));
            out(i, j) = m(i, j).re;
        }
    return out;
}

R random_rational(std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return R(num(rng), den(rng));
}

LatticeVec random_lattice_vec(std::mt19937& rng, Ambient amb = Ambient::E3)
{
    LatticeVec v(amb);
    for (int i = 0; i < v.size(); ++i) v[i] = CRat(random_rational(rng));
    return v;
}

// Charge of a surface vector against the unit-scale polarization exponential.
CRat surface_charge(const LatticeVec& v)
{
    return euler_pairing(surface_exp_polarization(R(1)), v);
}

R find_param(const QuadForm& q, const std::string& name)
{
    for (const auto& [key, value] : q.params)
        if (key == name) return value;
    FAIL("missing parameter ", name);
    return R(0);
}

double quad_value(const detail::Mat<R>& gram, const std::vector<double>& x)
{
    double total = 0.0;
    for (int i = 0; i < gram.rows; ++i)
        for (int j = 0; j < gram.cols; ++j) total += to_double(gram(i, j)) * x[i] * x[j];
    return total;
}

// Random product of plane rotations applied to the columns, preserving
// orthonormality of the basis.
detail::Mat<double> rotate_columns(detail::Mat<double> k, std::mt19937& rng)
{
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    for (int pass = 0; pass < 3; ++pass)
        for (int i = 0; i + 1 < k.cols; ++i) {
            const double th = angle(rng);
            const double c = std::cos(th);
            const double s = std::sin(th);
            for (int r = 0; r < k.rows; ++r) {
                const double x = k(r, i);
                const double y = k(r, i + 1);
                k(r, i) = c * x + s * y;
                k(r, i + 1) = -s * x + c * y;
            }
        }
    return k;
}

// The quadratic the coefficient-chart gram must reproduce: plug the kernel
// relations for the trailing coefficient pair into the weighted sum of the
// damped summands and evaluate directly.
R definitional_chart_value(const CoeffFormParams& p, const std::array<R, 3>& a,
                           const std::array<R, 3>& b)
{
    const R sum_d = p.damp_alpha + p.damp_beta + p.damp_gamma;
    const R denom = R(1) - p.lambda * sum_d;
    REQUIRE(denom != R(0));
    const std::array<R, 3> w{p.weight_alpha, p.weight_beta, p.weight_gamma};
    const std::array<R, 3> d{p.damp_alpha, p.damp_beta, p.damp_gamma};
    R db(0);
    R da(0);
    for (int i = 0; i < 3; ++i) {
        db += d[i] * b[i];
        da += d[i] * a[i];
    }
    const R s = R(-2) * p.lambda * db / denom;
    const R t = R(2) * p.lambda * da / denom;
    R total(0);
    for (int i = 0; i < 3; ++i) {
        const R ci = s - b[i];
        const R di = t + a[i];
        const R base = b[i] * ci - a[i] * di;
        total += w[i] * (base + p.bound_c * (ci * ci + a[i] * a[i]));
        total += w[i] * (base + p.bound_c * (b[i] * b[i] + di * di));
    }
    return total;
}

}  // namespace

TEST_CASE("surface euler square matches frozen values")
{
    // Structure sheaf of a point squares to zero.
    CHECK(surface_quadratic(basis_vec(Ambient::E2, 4)) == R(0));
    // Unit plus point picks up the two cross pairings.
    CHECK(surface_quadratic(surface_vec({1, 0, 0, 0, 1})) == R(-2));
    CHECK(surface_quadratic(surface_vec({1, 0, 0, 0, -1})) == R(2));
    // Sum of the two rulings.
    CHECK(surface_quadratic(surface_vec({0, 1, 1, 0, 0})) == R(2));
    // Both rulings plus the diagonal.
    CHECK(surface_quadratic(surface_vec({0, 1, 1, 1, 0})) == R(6));
    // Individual basis classes all square to zero.
    for (int slot = 0; slot < 5; ++slot)
        CHECK(surface_quadratic(basis_vec(Ambient::E2, slot)) == R(0));

    CHECK_THROWS_AS(surface_quadratic(LatticeVec(Ambient::E3)), std::invalid_argument);
    LatticeVec complex_vec(Ambient::E2);
    complex_vec[0] = CRat::i();
    CHECK_THROWS_AS(surface_quadratic(complex_vec), std::invalid_argument);
}

TEST_CASE("surface euler square is negative definite on the polarization kernel")
{
    // Three independent vectors annihilated by the polarization charge.
    const LatticeVec k1 = surface_vec({1, 0, 0, 0, 1});
    const LatticeVec k2 = surface_vec({0, 1, -1, 0, 0});
    const LatticeVec k3 = surface_vec({0, 0, -2, 1, 0});
    CHECK(surface_charge(k1).is_zero());
    CHECK(surface_charge(k2).is_zero());
    CHECK(surface_charge(k3).is_zero());

    CHECK(surface_quadratic(k1) == R(-2));
    CHECK(surface_quadratic(k2) == R(-2));
    CHECK(surface_quadratic(k3) == R(-4));

    // On the kernel the form reduces to -2x^2 - 2y^2 - 4z^2 - 4yz, which is
    // strictly negative away from the origin.
    std::mt19937 rng(2026);
    std::uniform_int_distribution<int> coeff(-5, 5);
    for (int trial = 0; trial < 40; ++trial) {
        const int x = coeff(rng);
        const int y = coeff(rng);
        const int z = coeff(rng);
        if (x == 0 && y == 0 && z == 0) continue;
        LatticeVec v(Ambient::E2);
        for (int i = 0; i < 5; ++i)
            v[i] = CRat(x) * k1[i] + CRat(y) * k2[i] + CRat(z) * k3[i];
        const R expected = R(-2 * x * x - 2 * y * y - 4 * z * z - 4 * y * z);
        CHECK(surface_quadratic(v) == expected);
        CHECK(surface_quadratic(v) < R(0));
    }
}

TEST_CASE("surface support constant is one half")
{
    const R c = surface_support_constant();
    CHECK(c == R(1, 2));

    // Certificate: the square never exceeds half the squared charge.
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const LatticeVec v = random_lattice_vec(rng, Ambient::E2);
        CHECK(R(2) * surface_quadratic(v) <= surface_charge(v).norm2());
    }

    // Equality is attained at unit minus point, whose charge is nonzero, so
    // no smaller constant works.
    const LatticeVec witness = surface_vec({1, 0, 0, 0, -1});
    CHECK(R(2) * surface_quadratic(witness) == surface_charge(witness).norm2());
    CHECK(surface_charge(witness).norm2() == R(4));
    const R below = c - R(1, 128);
    CHECK(surface_quadratic(witness) > below * surface_charge(witness).norm2());
}

TEST_CASE("damped lattice forms have symmetric grams and frozen evaluations")
{
    for (int transform = 1; transform <= 6; ++transform) {
        const QuadForm q = lattice_quadratic(transform, R(1, 3));
        CHECK(q.space == FormSpace::Lattice14);
        CHECK(q.gram.rows == 14);
        CHECK(q.gram.cols == 14);
        CHECK(q.gram == q.gram.transpose());
        CHECK(find_param(q, "transform") == R(transform));
        CHECK(find_param(q, "eta") == R(1, 3));
    }

    // Point and fundamental charges are annihilated by every summand.
    for (int transform = 1; transform <= 6; ++transform)
        for (const R& eta : {R(1, 4), R(1)}) {
            const QuadForm q = lattice_quadratic(transform, eta);
            std::vector<R> point(14);
            point[13] = R(1);
            CHECK(evaluate(q, point) == R(0));
            std::vector<R> fundamental(14);
            fundamental[0] = R(1);
            CHECK(evaluate(q, fundamental) == R(0));
        }

    // Frozen values for the identity summand: the first pairing contributes
    // through the coefficient product, the second through the surface square.
    const QuadForm q14 = lattice_quadratic(1, R(1, 4));
    const QuadForm q1 = lattice_quadratic(1, R(1));
    std::vector<R> d1_plus_d3(14);
    d1_plus_d3[1] = R(1);
    d1_plus_d3[3] = R(1);
    CHECK(evaluate(q14, d1_plus_d3) == R(1));
    CHECK(evaluate(q1, d1_plus_d3) == R(1));

    std::vector<R> d1_plus_d2(14);
    d1_plus_d2[1] = R(1);
    d1_plus_d2[2] = R(1);
    CHECK(evaluate(q14, d1_plus_d2) == R(1, 2));
    CHECK(evaluate(q1, d1_plus_d2) == R(2));

    std::vector<R> all_three(14);
    all_three[1] = R(1);
    all_three[2] = R(1);
    all_three[3] = R(1);
    CHECK(evaluate(q14, all_three) == R(5, 2));

    CHECK_THROWS_AS(lattice_quadratic(0, R(1)), std::invalid_argument);
    CHECK_THROWS_AS(lattice_quadratic(7, R(1)), std::invalid_argument);
    CHECK_THROWS_AS(lattice_quadratic(1, R(0)), std::invalid_argument);
    CHECK_THROWS_AS(lattice_quadratic(1, R(-1, 2)), std::invalid_argument);
}

TEST_CASE("damped lattice forms factor through the charge transforms")
{
    std::mt19937 rng(11);
    const R eta(1, 5);
    const QuadForm base = lattice_quadratic(1, eta);
    for (int transform = 2; transform <= 6; ++transform) {
        const QuadForm q = lattice_quadratic(transform, eta);
        for (int trial = 0; trial < 3; ++trial) {
            const LatticeVec v = random_lattice_vec(rng);
            const LatticeVec moved = apply(charge_transform(transform), v);
            CHECK(evaluate(q, real_coords(v)) == evaluate(base, real_coords(moved)));
        }
    }

    // The coefficient product is shared between each summand and its dual
    // partner; only the surface squares differ.
    for (int i = 1; i <= 3; ++i) {
        const QuadForm qi = lattice_quadratic(i, eta);
        const QuadForm qdual = lattice_quadratic(i + 3, eta);
        for (int trial = 0; trial < 4; ++trial) {
            const LatticeVec v = random_lattice_vec(rng);
            const auto coords = real_coords(v);
            const R si = surface_quadratic(project_to_surface(apply(charge_transform(i), v)).v1);
            const R sdual =
                surface_quadratic(project_to_surface(apply(charge_transform(i + 3), v)).v1);
            CHECK(evaluate(qi, coords) - eta * si == evaluate(qdual, coords) - eta * sdual);
        }
    }
}

TEST_CASE("combined form is invariant under the cyclic relabeling")
{
    // The rotation and the duality commute on the lattice, so rotating a
    // vector permutes the six summands of an evenly weighted combination.
    CHECK(charge_transform(2).m * charge_transform(4).m ==
          charge_transform(4).m * charge_transform(2).m);

    const std::array<R, 6> etas{R(1, 4), R(1, 4), R(1, 4), R(1, 4), R(1, 4), R(1, 4)};
    const QuadForm even = combined_quadratic(R(1, 3), R(1, 3), R(1, 3), etas);
    const detail::Mat<R> rotation = rational_matrix(charge_transform(2).m);
    CHECK(rotation.transpose() * even.gram * rotation == even.gram);

    // Weighted sum of the six summands, pair by pair.
    std::mt19937 rng(23);
    const std::array<R, 6> mixed{R(1, 2), R(1, 3), R(1, 4), R(1, 5), R(1, 6), R(1, 7)};
    const R alpha(2, 5);
    const R beta(1, 5);
    const R gamma(1, 10);
    const QuadForm combined = combined_quadratic(alpha, beta, gamma, mixed);
    CHECK(combined.gram == combined.gram.transpose());
    CHECK(find_param(combined, "alpha") == alpha);
    CHECK(find_param(combined, "eta4") == R(1, 5));
    for (int trial = 0; trial < 4; ++trial) {
        const auto coords = real_coords(random_lattice_vec(rng));
        R expected(0);
        const std::array<R, 3> weights{alpha, beta, gamma};
        for (int i = 1; i <= 3; ++i) {
            expected += weights[i - 1] * evaluate(lattice_quadratic(i, mixed[i - 1]), coords);
            expected +=
                weights[i - 1] * evaluate(lattice_quadratic(i + 3, mixed[i + 2]), coords);
        }
        CHECK(evaluate(combined, coords) == expected);
    }

    CHECK_THROWS_AS(combined_quadratic(R(0), R(1), R(1), etas), std::invalid_argument);
    std::array<R, 6> bad_etas = etas;
    bad_etas[3] = R(0);
    CHECK_THROWS_AS(combined_quadratic(R(1), R(1), R(1), bad_etas), std::invalid_argument);
}

TEST_CASE("kernel bases are orthonormal and annihilate the charge")
{
    const std::vector<CRat> values = reduced_charge_values(R(0), R(0), R(0));
    REQUIRE(values.size() == 14);
    const detail::Mat<double> k = kernel_basis(values);
    REQUIRE(k.rows == 14);
    REQUIRE(k.cols == 12);

    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            double dot = 0.0;
            for (int r = 0; r < 14; ++r) dot += k(r, i) * k(r, j);
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) <= 1e-12);
        }

    for (int col = 0; col < 12; ++col) {
        double re = 0.0;
        double im = 0.0;
        for (int r = 0; r < 14; ++r) {
            re += to_double(values[r].re) * k(r, col);
            im += to_double(values[r].im) * k(r, col);
        }
        CHECK(std::abs(re) <= 1e-12);
        CHECK(std::abs(im) <= 1e-12);
    }

    // A coordinate charge kills exactly the other twelve coordinates.
    std::vector<CRat> coordinate(14);
    coordinate[0] = CRat(1);
    coordinate[13] = CRat::i();
    const detail::Mat<double> kc = kernel_basis(coordinate);
    for (int col = 0; col < 12; ++col) {
        CHECK(std::abs(kc(0, col)) <= 1e-12);
        CHECK(std::abs(kc(13, col)) <= 1e-12);
    }

    // Degenerate charges are rejected: collinear real and imaginary parts.
    std::vector<CRat> collinear(14);
    for (int j = 0; j < 14; ++j) collinear[j] = CRat(R(j + 1), R(2 * (j + 1)));
    CHECK_THROWS_AS(kernel_basis(collinear), std::invalid_argument);
    CHECK_THROWS_AS(kernel_basis(std::vector<CRat>(14)), std::invalid_argument);
    CHECK_THROWS_AS(kernel_basis(std::vector<CRat>(13)), std::invalid_argument);
}

TEST_CASE("restricted definiteness reports eigenvalue margins")
{
    QuadForm negative;
    negative.space = FormSpace::Lattice14;
    negative.gram = detail::Mat<R>(14, 14);
    for (int i = 0; i < 14; ++i) negative.gram(i, i) = R(-1);

    detail::Mat<double> k(14, 3);
    k(0, 0) = 1.0;
    k(5, 1) = 1.0;
    k(9, 2) = 1.0;

    const DefinitenessResult res = restricted_definiteness(negative, k);
    CHECK(res.negative_definite);
    CHECK(res.max_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));

    QuadForm flipped = negative;
    flipped.gram(9, 9) = R(1);
    const DefinitenessResult bad = restricted_definiteness(flipped, k);
    CHECK_FALSE(bad.negative_definite);
    CHECK(bad.max_eigenvalue == doctest::Approx(1.0).epsilon(1e-12));

    detail::Mat<double> wrong(13, 3);
    CHECK_THROWS_AS(restricted_definiteness(negative, wrong), std::invalid_argument);
}

TEST_CASE("charge coefficients rebuild the damped central charge")
{
    std::mt19937 rng(31);
    const std::array<std::array<R, 3>, 3> param_sets{{
        {R(1, 4), R(1, 8), R(1, 2)},
        {R(1, 3), R(1, 5), R(1, 7)},
        {R(0), R(2, 5), R(1, 3)},
    }};
    for (const auto& params : param_sets) {
        for (int trial = 0; trial < 4; ++trial) {
            const LatticeVec v = random_lattice_vec(rng);
            const AsymCoeffs k1 = asymptotic_coeffs(v, 1, R(1));
            const AsymCoeffs k2 = asymptotic_coeffs(v, 2, R(1));
            const AsymCoeffs k3 = asymptotic_coeffs(v, 3, R(1));
            const R re = (k1.c + k1.b) + params[0] * (-k1.c + k1.b) +
                         params[1] * (-k2.c + k2.b) + params[2] * (-k3.c + k3.b);
            const R im = (-k1.a + k1.d) + params[0] * (-k1.a - k1.d) +
                         params[1] * (-k2.a - k2.d) + params[2] * (-k3.a - k3.d);
            CHECK(CRat(re, im) == reduced_charge(v, params[0], params[1], params[2]));
        }
    }
}

TEST_CASE("damped forms stay negative definite along the scaling sweep")
{
    // Fixed-parameter sweep: equal damping 1/5, surface damping 3/10, checked
    // at five scalings of the charge toward the undamped one.
    const std::array<R, 6> etas{R(3, 10), R(3, 10), R(3, 10), R(3, 10), R(3, 10), R(3, 10)};
    const QuadForm q = combined_quadratic(R(1, 5), R(1, 5), R(1, 5), etas);
    for (const R& lambda : {R(0), R(1, 4), R(1, 2), R(3, 4), R(1)}) {
        const detail::Mat<double> k =
            kernel_basis(reduced_charge_values(lambda / 5, lambda / 5, lambda / 5));
        const DefinitenessResult res = restricted_definiteness(q, k);
        CHECK(res.negative_definite);
    }

    // Interior point: all damping parameters present.
    const SupportReport interior = support_check(R(1, 5), R(1, 5), R(1, 5), 5);
    CHECK(interior.negative_definite);
    CHECK(interior.worst_margin < 0.0);
    CHECK(interior.points.size() == 5);
    CHECK(interior.weight_alpha == R(1, 5));
    CHECK(interior.weight_beta == R(1, 5));
    CHECK(interior.weight_gamma == R(1, 5));
    CHECK(interior.bound_c == R(1, 5));
    CHECK(interior.eta == R(1, 5));

    // One damping parameter on the boundary of the cone: the missing weight
    // is replaced by a sixth of the remaining slack.
    const SupportReport edge = support_check(R(1, 4), R(1, 3), R(0), 5);
    CHECK(edge.negative_definite);
    CHECK(edge.weight_gamma == R(5, 72));
    CHECK(edge.bound_c == R(25, 144));
    CHECK(edge.eta == R(25, 144));

    // Two damping parameters on the boundary.
    const SupportReport corner = support_check(R(2, 5), R(0), R(0), 5);
    CHECK(corner.negative_definite);
    CHECK(corner.weight_beta == R(1, 10));
    CHECK(corner.weight_gamma == R(1, 10));
    CHECK(corner.bound_c == R(1, 5));
    CHECK(corner.eta == R(1, 5));

    CHECK_THROWS_AS(support_check(R(-1, 4), R(0), R(0), 5), std::invalid_argument);
    CHECK_THROWS_AS(support_check(R(1, 2), R(1, 2), R(0), 5), std::invalid_argument);
    CHECK_THROWS_AS(support_check(R(1, 5), R(1, 5), R(1, 5), 1), std::invalid_argument);
}

TEST_CASE("random kernel vectors take negative values")
{
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const std::array<std::array<R, 3>, 3> cone_points{{
        {R(1, 5), R(1, 5), R(1, 5)},
        {R(1, 4), R(1, 8), R(1, 2)},
        {R(1, 10), R(3, 10), R(1, 10)},
    }};
    for (const auto& pt : cone_points) {
        const R slack = (R(1) - pt[0] - pt[1] - pt[2]) / 2;
        const std::array<R, 6> etas{slack, slack, slack, slack, slack, slack};
        const QuadForm q = combined_quadratic(pt[0], pt[1], pt[2], etas);
        const detail::Mat<double> k = kernel_basis(reduced_charge_values(pt[0], pt[1], pt[2]));
        const DefinitenessResult res = restricted_definiteness(q, k);
        REQUIRE(res.negative_definite);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> x(14, 0.0);
            double norm2 = 0.0;
            for (int col = 0; col < 12; ++col) {
                const double u = coeff(rng);
                for (int r = 0; r < 14; ++r) x[r] += u * k(r, col);
            }
            for (double xi : x) norm2 += xi * xi;
            if (norm2 < 1e-6) continue;
            CHECK(quad_value(q.gram, x) < 0.0);
        }
    }
}

TEST_CASE("coefficient chart gram matches its defining quadratic")
{
    std::mt19937 rng(59);
    std::uniform_int_distribution<int> num(1, 4);
    std::uniform_int_distribution<int> den(2, 5);
    std::uniform_int_distribution<int> pick(0, 3);
    const std::array<R, 4> lambdas{R(0), R(1, 3), R(1, 2), R(1)};

    for (int trial = 0; trial < 12; ++trial) {
        CoeffFormParams p;
        p.weight_alpha = R(num(rng), den(rng));
        p.weight_beta = R(num(rng), den(rng));
        p.weight_gamma = R(num(rng), den(rng));
        p.damp_alpha = R(1, den(rng) + 2);
        p.damp_beta = pick(rng) == 0 ? R(0) : R(1, den(rng) + 2);
        p.damp_gamma = pick(rng) == 0 ? R(0) : R(1, den(rng) + 2);
        p.bound_c = R(1, den(rng));
        p.lambda = lambdas[static_cast<size_t>(pick(rng))];

        const QuadForm q = abstract_kernel_form(p);
        CHECK(q.space == FormSpace::Coeff12);
        REQUIRE(q.gram.rows == 6);
        CHECK(q.gram == q.gram.transpose());
        // Block diagonal with identical blocks.
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(q.gram(i, j + 3) == R(0));
                CHECK(q.gram(i, j) == q.gram(i + 3, j + 3));
            }

        std::array<R, 3> a;
        std::array<R, 3> b;
        std::vector<R> x(6);
        for (int i = 0; i < 3; ++i) {
            a[i] = random_rational(rng);
            b[i] = random_rational(rng);
            x[i] = a[i];
            x[i + 3] = b[i];
        }
        CHECK(evaluate(q, x) == definitional_chart_value(p, a, b));
    }

    // Undamped limit: the gram is diagonal with entries weight * (2c - 2).
    CoeffFormParams flat;
    flat.weight_alpha = R(1, 3);
    flat.weight_beta = R(1, 4);
    flat.weight_gamma = R(1, 5);
    flat.damp_alpha = R(1, 3);
    flat.damp_beta = R(1, 4);
    flat.damp_gamma = R(1, 5);
    flat.bound_c = R(1, 8);
    flat.lambda = R(0);
    const QuadForm base = abstract_kernel_form(flat);
    CHECK(base.gram(0, 0) == R(-7, 12));
    CHECK(base.gram(1, 1) == R(-7, 16));
    CHECK(base.gram(2, 2) == R(-7, 20));
    CHECK(base.gram(3, 3) == R(-7, 12));
    CHECK(base.gram(0, 1) == R(0));

    // The elimination breaks down when the scaled damping sums to one.
    CoeffFormParams singular = flat;
    singular.damp_alpha = R(1, 2);
    singular.damp_beta = R(1, 4);
    singular.damp_gamma = R(1, 4);
    singular.lambda = R(1);
    CHECK_THROWS_AS(abstract_kernel_form(singular), std::invalid_argument);
    CHECK_THROWS_AS(scaling_difference_hessian(singular), std::invalid_argument);
}

TEST_CASE("difference hessians reproduce the closed-form minors")
{
    // Fully damped: the difference is rank one with an explicit coefficient.
    {
        const R alpha(1, 4);
        const R beta(1, 6);
        const R gamma(1, 12);
        const R c(1, 5);
        const R lambda(1, 2);
        const R sum = alpha + beta + gamma;
        CoeffFormParams p;
        p.weight_alpha = alpha;
        p.weight_beta = beta;
        p.weight_gamma = gamma;
        p.damp_alpha = alpha;
        p.damp_beta = beta;
        p.damp_gamma = gamma;
        p.bound_c = c;
        p.lambda = lambda;
        const detail::Mat<R> h = scaling_difference_hessian(p);
        const R denom = (R(1) - lambda * sum) * (R(1) - lambda * sum);
        const R coeff = R(8) * lambda * (R(1) - c - lambda * sum) / denom;
        const std::array<R, 3> w{alpha, beta, gamma};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(h(i, j) == coeff * w[i] * w[j]);
    }

    // One undamped weight: three closed-form principal minors.
    const auto case_two = [](const R& alpha, const R& beta, const R& gp, const R& c,
                             const R& lambda) {
        CoeffFormParams p;
        p.weight_alpha = alpha;
        p.weight_beta = beta;
        p.weight_gamma = gp;
        p.damp_alpha = alpha;
        p.damp_beta = beta;
        p.damp_gamma = R(0);
        p.bound_c = c;
        p.lambda = lambda;
        return p;
    };
    for (const auto& [alpha, beta, gp, c] :
         {std::array<R, 4>{R(1, 4), R(1, 6), R(1, 8), R(1, 16)},
          std::array<R, 4>{R(1, 3), R(1, 5), R(1, 7), R(1, 9)}}) {
        for (const R& lambda : {R(0), R(1, 3), R(1, 2), R(1)}) {
            const detail::Mat<R> h =
                scaling_difference_hessian(case_two(alpha, beta, gp, c, lambda));
            const R square = (R(-1) + (alpha + beta) * lambda) * (R(-1) + (alpha + beta) * lambda);
            const int last[] = {2};
            CHECK(principal_minor(h, last) == R(-4) * (R(-1) + c) * gp);
            const int first[] = {0};
            const R single = R(-8) * alpha * alpha * lambda *
                             (R(-1) + c + (alpha + beta + c * gp) * lambda) / square;
            CHECK(principal_minor(h, first) == single);
            const int second[] = {1};
            const R swapped = R(-8) * beta * beta * lambda *
                              (R(-1) + c + (alpha + beta + c * gp) * lambda) / square;
            CHECK(principal_minor(h, second) == swapped);
            const int pair[] = {0, 2};
            const R joint = R(16) * (R(-1) + c) * alpha * alpha * gp * lambda *
                            (R(-2) + (R(2) * (alpha + beta) + gp) * lambda +
                             c * (R(2) + gp * lambda)) /
                            square;
            CHECK(principal_minor(h, pair) == joint);
        }
    }

    // Two undamped weights: the first two minors lose the scaling entirely
    // and the full determinant keeps a single closed-form factor.
    const auto case_three = [](const R& alpha, const R& bp, const R& gp, const R& c,
                               const R& lambda) {
        CoeffFormParams p;
        p.weight_alpha = alpha;
        p.weight_beta = bp;
        p.weight_gamma = gp;
        p.damp_alpha = alpha;
        p.damp_beta = R(0);
        p.damp_gamma = R(0);
        p.bound_c = c;
        p.lambda = lambda;
        return p;
    };
    for (const auto& [alpha, bp, gp, c] :
         {std::array<R, 4>{R(1, 4), R(1, 8), R(1, 12), R(1, 16)},
          std::array<R, 4>{R(1, 2), R(1, 9), R(1, 7), R(1, 10)}}) {
        for (const R& lambda : {R(1, 3), R(1, 2), R(1)}) {
            const detail::Mat<R> h = scaling_difference_hessian(case_three(alpha, bp, gp, c, lambda));
            const R square = (R(-1) + alpha * lambda) * (R(-1) + alpha * lambda);
            const int second[] = {1};
            CHECK(principal_minor(h, second) == R(-4) * (R(-1) + c) * bp);
            const int tail[] = {1, 2};
            CHECK(principal_minor(h, tail) == R(16) * (R(-1) + c) * (R(-1) + c) * bp * gp);
            const int full[] = {0, 1, 2};
            const R det = R(-64) * (R(-1) + c) * (R(-1) + c) * alpha * alpha * bp * gp * lambda *
                          (R(2) * (R(-1) + c) + R(2) * alpha * lambda +
                           (R(1) + c) * (bp + gp) * lambda) /
                          square;
            CHECK(principal_minor(h, full) == det);
        }
    }

    const detail::Mat<R> id3 = detail::Mat<R>::identity(3);
    const int bad[] = {0, 0};
    CHECK_THROWS_AS(principal_minor(id3, bad), std::invalid_argument);
    const int out[] = {3};
    CHECK_THROWS_AS(principal_minor(id3, out), std::invalid_argument);
}

TEST_CASE("definiteness survey reports no violations")
{
    GridSpec spec;
    spec.axis_points = 3;
    spec.lambda_steps = 5;

    const GridReport full = verify_definiteness_grid(1, spec);
    CHECK(full.points_checked == 27 * 5);
    CHECK(full.violations.empty());
    CHECK(full.worst_margin < 0.0);

    const GridReport edge = verify_definiteness_grid(2, spec);
    CHECK(edge.points_checked == 9 * 5);
    CHECK(edge.violations.empty());
    CHECK(edge.worst_margin < 0.0);

    const GridReport corner = verify_definiteness_grid(3, spec);
    CHECK(corner.points_checked == 3 * 5);
    CHECK(corner.violations.empty());
    CHECK(corner.worst_margin < 0.0);

    // Parallel evaluation returns the identical report.
    GridSpec threaded = spec;
    threaded.threads = 3;
    const GridReport parallel = verify_definiteness_grid(1, threaded);
    CHECK(parallel.points_checked == full.points_checked);
    CHECK(parallel.violations.empty());
    CHECK(parallel.worst_margin == full.worst_margin);

    // Stress point next to the wall of the cone: margins shrink but the
    // verdict still holds; the exact margin is reported, not pinned.
    GridSpec stress;
    stress.axis_points = 1;
    stress.lambda_steps = 11;
    stress.axis_min = R(33, 100);
    stress.axis_max = R(33, 100);
    const GridReport wall = verify_definiteness_grid(1, stress);
    CHECK(wall.points_checked == 11);
    CHECK(wall.violations.empty());
    CHECK(wall.worst_margin < 0.0);
    MESSAGE("wall margin: ", wall.worst_margin);

    CHECK_THROWS_AS(verify_definiteness_grid(0, spec), std::invalid_argument);
    CHECK_THROWS_AS(verify_definiteness_grid(4, spec), std::invalid_argument);
    GridSpec empty = spec;
    empty.axis_points = 0;
    CHECK_THROWS_AS(verify_definiteness_grid(1, empty), std::invalid_argument);
}

TEST_CASE("all surface projections vanish only for the zero vector")
{
    CHECK(vanishing_check(LatticeVec(Ambient::E3)));
    for (int slot = 0; slot < 14; ++slot)
        CHECK_FALSE(vanishing_check(basis_vec(Ambient::E3, slot)));

    std::mt19937 rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const LatticeVec v = random_lattice_vec(rng);
        bool zero = true;
        for (int i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) zero = false;
        CHECK(vanishing_check(v) == zero);
    }

    CHECK_THROWS_AS(vanishing_check(LatticeVec(Ambient::E2)), std::invalid_argument);
}

TEST_CASE("definiteness verdicts survive orthonormal re-basing")
{
    std::mt19937 rng(71);
    const std::array<R, 6> etas{R(1, 5), R(1, 5), R(1, 5), R(1, 5), R(1, 5), R(1, 5)};
    const QuadForm q = combined_quadratic(R(1, 5), R(1, 5), R(1, 5), etas);
    const detail::Mat<double> k =
        kernel_basis(reduced_charge_values(R(1, 5), R(1, 5), R(1, 5)));
    const DefinitenessResult base = restricted_definiteness(q, k);
    REQUIRE(base.negative_definite);
    for (int trial = 0; trial < 3; ++trial) {
        const detail::Mat<double> rotated = rotate_columns(k, rng);
        const DefinitenessResult res = restricted_definiteness(q, rotated);
        CHECK(res.negative_definite == base.negative_definite);
        CHECK(res.max_eigenvalue == doctest::Approx(base.max_eigenvalue).epsilon(1e-9));
    }
}
