#include "stab3/product_charge.hpp"

#include "stab3/cohomology.hpp"
#include "stab3/detail/exact_linalg.hpp"

#include <array>
#include <stdexcept>

namespace stab3 {

namespace {

void require_triple_ambient(const LatticeVec& vec, const char* what)
{
    if (vec.ambient != Ambient::E3) {
        throw std::invalid_argument(std::string(what) + " expects a triple-product class");
    }
}

} // namespace

SurfaceProjections project_to_surface(const LatticeVec& vec)
{
    require_triple_ambient(vec, "project_to_surface");
    const CohomClass ch = chern(vec);
    const CohomClass fiber_divisor = cycle_class(CycleName::D3);
    return SurfaceProjections{
        to_basis(pushforward_p(wedge(ch, fiber_divisor))),
        to_basis(pushforward_p(ch)),
    };
}

LatticeVec twisted_pushforward(const LatticeVec& vec, const Rational& k)
{
    require_triple_ambient(vec, "twisted_pushforward");
    const CohomClass twist = make_unit(Ambient::E3) + cycle_class(CycleName::D3) * CRat(k);
    return to_basis(pushforward_p(wedge(chern(vec), twist)));
}

const LatticeMatrix& charge_transform(int index)
{
    if (index < 1 || index > kNumTransforms) {
        throw std::invalid_argument("charge_transform index must be in 1..6");
    }
    static const std::array<LatticeMatrix, kNumTransforms> transforms = [] {
        const detail::Mat<CRat> f = autoeq_matrix(AutoEq::F).m;
        const detail::Mat<CRat> phi = autoeq_matrix(AutoEq::Phi).m;
        return std::array<LatticeMatrix, kNumTransforms>{{
            {"Id", detail::Mat<CRat>::identity(basis_size(Ambient::E3))},
            {"F", f},
            {"F^2", f * f},
            {"Phi", phi},
            {"F Phi", f * phi},
            {"F^2 Phi", f * f * phi},
        }};
    }();
    return transforms[static_cast<std::size_t>(index - 1)];
}

LatticeVec surface_exp_polarization(const Rational& t)
{
    const CohomClass polarization = cycle_class(CycleName::D1, Ambient::E2) +
                                    cycle_class(CycleName::D2, Ambient::E2);
    // 1 + i t D + (i t)^2 / 2 D^2; higher powers vanish on the surface.
    CohomClass cls = make_unit(Ambient::E2);
    cls += polarization * CRat::i(t);
    cls += wedge(polarization, polarization) * CRat(-(t * t) / 2);
    return to_basis(cls);
}

AsymCoeffs asymptotic_coeffs(const LatticeVec& vec, int transform, const Rational& t)
{
    const LatticeVec moved = apply(charge_transform(transform), vec);
    const SurfaceProjections proj = project_to_surface(moved);
    const LatticeVec polarization = surface_exp_polarization(t);
    const CRat twisted = euler_pairing(polarization, proj.v1);
    const CRat untwisted = euler_pairing(polarization, proj.v2);
    return AsymCoeffs{twisted.re, untwisted.re, twisted.im, untwisted.im};
}

CRat product_charge(const LatticeVec& vec,
                    const Rational& s,
                    const Rational& t,
                    const Rational& alpha)
{
    if (s <= 0 || t <= 0) {
        throw std::invalid_argument("product_charge requires positive scales");
    }
    if (alpha < 0 || alpha >= 1) {
        throw std::invalid_argument("product_charge requires 0 <= alpha < 1");
    }
    const AsymCoeffs k = asymptotic_coeffs(vec, 1, t);
    const Rational real = (k.c * s + k.b) + alpha * (-k.c * s + k.b);
    const Rational imag = (-k.a * t + k.d) + alpha * (-k.a * t - k.d);
    return CRat(real, imag);
}

CRat reduced_charge(const LatticeVec& vec,
                    const Rational& alpha,
                    const Rational& beta,
                    const Rational& gamma)
{
    const Rational one{1};
    const AsymCoeffs k1 = asymptotic_coeffs(vec, 1, one);
    const AsymCoeffs k2 = asymptotic_coeffs(vec, 2, one);
    const AsymCoeffs k3 = asymptotic_coeffs(vec, 3, one);
    const Rational real = (k1.c + k1.b) + alpha * (-k1.c + k1.b) + beta * (-k2.c + k2.b) +
                          gamma * (-k3.c + k3.b);
    const Rational imag = (-k1.a + k1.d) + alpha * (-k1.a - k1.d) + beta * (-k2.a - k2.d) +
                          gamma * (-k3.a - k3.d);
    return CRat(real, imag);
}

int stacked_projection_rank(std::span<const int> transforms)
{
    const int triple = basis_size(Ambient::E3);
    const int surface = basis_size(Ambient::E2);
    detail::Mat<CRat> stacked(static_cast<int>(transforms.size()) * surface, triple);
    for (std::size_t block = 0; block < transforms.size(); ++block) {
        const LatticeMatrix& transform = charge_transform(transforms[block]);
        for (int j = 0; j < triple; ++j) {
            LatticeVec basis(Ambient::E3);
            basis[j] = CRat(1);
            const LatticeVec v1 = project_to_surface(apply(transform, basis)).v1;
            for (int r = 0; r < surface; ++r) {
                stacked(static_cast<int>(block) * surface + r, j) = v1[r];
            }
        }
    }
    return detail::rank(std::move(stacked));
}

int injectivity_rank()
{
    constexpr std::array<int, kNumTransforms> all = {1, 2, 3, 4, 5, 6};
    return stacked_projection_rank(all);
}

Rational poincare_coeff_relations_check()
{
    const Rational one{1};
    Rational worst{0};
    const auto bump = [&worst](const Rational& r) {
        const Rational mag = r < 0 ? -r : r;
        if (mag > worst) worst = mag;
    };
    for (int j = 0; j < basis_size(Ambient::E3); ++j) {
        LatticeVec basis(Ambient::E3);
        basis[j] = CRat(1);
        for (int i = 1; i <= 3; ++i) {
            const AsymCoeffs plain = asymptotic_coeffs(basis, i, one);
            const AsymCoeffs dualized = asymptotic_coeffs(basis, i + 3, one);
            bump(dualized.a + plain.b);
            bump(dualized.b - plain.a);
            bump(dualized.c + plain.d);
            bump(dualized.d - plain.c);
        }
    }
    return worst;
}

} // namespace stab3
