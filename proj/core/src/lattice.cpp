#include "stab3/lattice.hpp"

#include <functional>
#include <mutex>
#include <stdexcept>

namespace stab3 {

namespace {

constexpr std::array<CycleName, 14> kBasisE3 = {
    CycleName::Fund,    CycleName::D1,      CycleName::D2,      CycleName::D3,
    CycleName::Delta12, CycleName::Delta13, CycleName::Delta23, CycleName::C12,
    CycleName::C13,     CycleName::C23,     CycleName::Dd12,    CycleName::Dd13,
    CycleName::Dd23,    CycleName::Point};

constexpr std::array<CycleName, 5> kBasisE2 = {CycleName::Fund, CycleName::D1, CycleName::D2,
                                               CycleName::Delta, CycleName::Point};

// Columns: chern characters of the basis sheaves as coefficient vectors
// over all 2^n monomials. Used to express classes in basis coordinates.
const detail::Mat<CRat>& basis_span_matrix(Ambient amb)
{
    static detail::Mat<CRat> e3, e2;
    static std::once_flag once;
    std::call_once(once, [] {
        for (Ambient a : {Ambient::E3, Ambient::E2}) {
            const int monomials = 1 << generator_count(a);
            detail::Mat<CRat> m(monomials, basis_size(a));
            for (int j = 0; j < basis_size(a); ++j) {
                const CohomClass c = chern_basis(a, j);
                for (const auto& [mask, coeff] : c.coeffs) m(static_cast<int>(mask), j) = coeff;
            }
            (a == Ambient::E3 ? e3 : e2) = std::move(m);
        }
    });
    return amb == Ambient::E3 ? e3 : e2;
}

CohomClass apply_even_duality(const CohomClass& c);

LatticeMatrix matrix_of(const std::string& name, Ambient amb,
                        const std::function<CohomClass(const CohomClass&)>& action)
{
    const int n = basis_size(amb);
    LatticeMatrix out{name, detail::Mat<CRat>(n, n)};
    for (int j = 0; j < n; ++j) {
        const LatticeVec col = to_basis(action(chern_basis(amb, j)));
        for (int i = 0; i < n; ++i) out.m(i, j) = col[i];
    }
    return out;
}

std::vector<CohomClass> permutation_images()
{
    // Induced action of the factor rotation (x1,x2,x3) -> (x3,x1,x2) as a
    // functor (pushforward of classes, equivalently pullback along the
    // inverse point map): factor k's generator forms become factor k+1's
    // (cyclically), so D1 -> D2, D2 -> D3, D3 -> D1.  This direction is
    // the one under which the second and third dampened exponentials of
    // the fundamental domain are the F- and F^2-transports of the first.
    const int to[6] = {2, 3, 4, 5, 0, 1};
    std::vector<CohomClass> images;
    images.reserve(6);
    for (int g = 0; g < 6; ++g) images.push_back(make_monomial(Ambient::E3, 1u << to[g]));
    return images;
}

// Even-degree action of the Fourier transform along the Poincare
// bundle composed with the polarization pullback. On each elliptic
// factor: 1 -> -pt, dx -> dy, dy -> -dx, pt -> 1; the kernel of the
// product is the external product of the factor kernels, and the
// factor maps preserve parity, so no cross-factor signs appear.
CohomClass apply_even_duality(const CohomClass& c)
{
    if (c.ambient != Ambient::E3) throw std::invalid_argument("duality defined on E3 classes");
    CohomClass out(Ambient::E3);
    for (const auto& [mask, coeff] : c.coeffs) {
        uint32_t image = 0;
        int sign = 1;
        for (int f = 0; f < 3; ++f) {
            const uint32_t part = (mask >> (2 * f)) & 3u;
            uint32_t mapped = 0;
            switch (part) {
            case 0b00: mapped = 0b11; sign = -sign; break;
            case 0b01: mapped = 0b10; break;
            case 0b10: mapped = 0b01; sign = -sign; break;
            case 0b11: mapped = 0b00; break;
            }
            image |= mapped << (2 * f);
        }
        out.add_term(image, sign < 0 ? -coeff : coeff);
    }
    return out;
}

CohomClass tensor_line_bundle(const CohomClass& c, CycleName divisor)
{
    // ch(E (x) O(D)) = ch(E) ^ exp(D) and D ^ D = 0 for every divisor
    // class in play, so exp(D) = 1 + D exactly.
    CohomClass factor = make_unit(Ambient::E3) + cycle_class(divisor);
    return wedge(c, factor);
}

} // namespace

LatticeVec apply(const LatticeMatrix& M, const LatticeVec& v)
{
    if (M.m.cols != v.size()) throw std::invalid_argument("dimension mismatch");
    LatticeVec out(v.ambient);
    for (int i = 0; i < M.m.rows; ++i) {
        CRat acc(0);
        for (int j = 0; j < M.m.cols; ++j) acc += M.m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

CohomClass chern_basis(Ambient a, int index)
{
    if (index < 0 || index >= basis_size(a)) throw std::out_of_range("basis index");
    return a == Ambient::E3 ? cycle_class(kBasisE3[static_cast<size_t>(index)], a)
                            : cycle_class(kBasisE2[static_cast<size_t>(index)], a);
}

CohomClass chern(const LatticeVec& v)
{
    CohomClass out(v.ambient);
    for (int i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        out += chern_basis(v.ambient, i) * v[i];
    }
    return out;
}

LatticeVec to_basis(const CohomClass& c)
{
    const detail::Mat<CRat>& span = basis_span_matrix(c.ambient);
    detail::Mat<CRat> rhs(span.rows, 1);
    for (const auto& [mask, coeff] : c.coeffs) rhs(static_cast<int>(mask), 0) = coeff;
    auto x = detail::solve(span, rhs);
    if (!x) throw std::invalid_argument("class is not in the span of the basis");
    LatticeVec out(c.ambient);
    for (int i = 0; i < out.size(); ++i) out[i] = (*x)(i, 0);
    return out;
}

const detail::Mat<CRat>& euler_matrix(Ambient amb)
{
    static detail::Mat<CRat> e3, e2;
    static std::once_flag once;
    std::call_once(once, [] {
        for (Ambient a : {Ambient::E3, Ambient::E2}) {
            const int n = basis_size(a);
            detail::Mat<CRat> chi(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    chi(i, j) = mukai_pairing(chern_basis(a, i), chern_basis(a, j));
            (a == Ambient::E3 ? e3 : e2) = std::move(chi);
        }
    });
    return amb == Ambient::E3 ? e3 : e2;
}

CRat euler_pairing(const LatticeVec& v, const LatticeVec& w)
{
    if (v.ambient != w.ambient) throw std::invalid_argument("ambient mismatch");
    const detail::Mat<CRat>& chi = euler_matrix(v.ambient);
    CRat acc(0);
    for (int i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (int j = 0; j < w.size(); ++j) acc += v[i] * chi(i, j) * w[j];
    }
    return acc;
}

LatticeVec exp_divisor(const std::array<int, 3>& signs, const Rational& t)
{
    for (int s : signs)
        if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
    CohomClass d(Ambient::E3);
    const CycleName divisors[3] = {CycleName::D1, CycleName::D2, CycleName::D3};
    for (int k = 0; k < 3; ++k)
        d += cycle_class(divisors[k]) * CRat(Rational(0), signs[k] * t);
    const CohomClass d2 = wedge(d, d);
    CohomClass total = make_unit(Ambient::E3) + d + d2 * CRat(Rational(1, 2)) +
                       wedge(d2, d) * CRat(Rational(1, 6));
    return to_basis(total);
}

const LatticeMatrix& autoeq_matrix(AutoEq kind)
{
    static const LatticeMatrix f = matrix_of("F", Ambient::E3, [](const CohomClass& c) {
        return substitute_generators(c, permutation_images());
    });
    static const LatticeMatrix f2 = [] {
        LatticeMatrix m{"F2", f.m * f.m};
        return m;
    }();
    static const LatticeMatrix phi = matrix_of("Phi", Ambient::E3, apply_even_duality);
    static const LatticeMatrix td[3] = {
        matrix_of("TensorO(D1)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::D1); }),
        matrix_of("TensorO(D2)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::D2); }),
        matrix_of("TensorO(D3)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::D3); })};
    static const LatticeMatrix tdelta[3] = {
        matrix_of("TensorO(Delta12)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::Delta12); }),
        matrix_of("TensorO(Delta13)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::Delta13); }),
        matrix_of("TensorO(Delta23)", Ambient::E3,
                  [](const CohomClass& c) { return tensor_line_bundle(c, CycleName::Delta23); })};

    switch (kind) {
    case AutoEq::F: return f;
    case AutoEq::F2: return f2;
    case AutoEq::Phi: return phi;
    case AutoEq::TensorD1: return td[0];
    case AutoEq::TensorD2: return td[1];
    case AutoEq::TensorD3: return td[2];
    case AutoEq::TensorDelta12: return tdelta[0];
    case AutoEq::TensorDelta13: return tdelta[1];
    case AutoEq::TensorDelta23: return tdelta[2];
    }
    throw std::invalid_argument("unknown autoequivalence");
}

detail::Mat<Rational> symplectic_j6()
{
    detail::Mat<Rational> j(6, 6);
    for (int i = 0; i < 3; ++i) {
        j(i, i + 3) = 1;
        j(i + 3, i) = -1;
    }
    return j;
}

bool is_symplectic(const detail::Mat<Rational>& g)
{
    if (g.rows != 6 || g.cols != 6) return false;
    return g.transpose() * symplectic_j6() * g == symplectic_j6();
}

} // namespace stab3
