#include "stab3/trilinear.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace stab3 {

namespace {

constexpr std::array<std::array<int, 3>, kNumTriples> make_triples()
{
    std::array<std::array<int, 3>, kNumTriples> triples{};
    int n = 0;
    for (int a = 0; a < kNumGenerators; ++a)
        for (int b = a + 1; b < kNumGenerators; ++b)
            for (int c = b + 1; c < kNumGenerators; ++c) triples[static_cast<std::size_t>(n++)] = {a, b, c};
    return triples;
}

constexpr auto kTriples = make_triples();

constexpr std::array<std::array<std::array<int, 6>, 6>, 6> make_lookup()
{
    std::array<std::array<std::array<int, 6>, 6>, 6> lookup{};
    for (auto& plane : lookup)
        for (auto& row : plane) row.fill(-1);
    for (int idx = 0; idx < kNumTriples; ++idx) {
        auto [a, b, c] = kTriples[static_cast<std::size_t>(idx)];
        lookup[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] = idx;
    }
    return lookup;
}

constexpr auto kTripleIndex = make_lookup();

/// Sorts three distinct generator indices, returning the permutation sign;
/// returns 0 if any index repeats or is out of range.
int sort_with_sign(int& a, int& b, int& c)
{
    if (a < 0 || b < 0 || c < 0 || a >= kNumGenerators || b >= kNumGenerators || c >= kNumGenerators)
        throw std::out_of_range("generator index out of range");
    if (a == b || a == c || b == c) return 0;
    int sign = 1;
    if (a > b) { std::swap(a, b); sign = -sign; }
    if (b > c) { std::swap(b, c); sign = -sign; }
    if (a > b) { std::swap(a, b); sign = -sign; }
    return sign;
}

int bar_count(const std::array<int, 3>& triple)
{
    int bars = 0;
    for (int g : triple)
        if (g >= 3) ++bars;
    return bars;
}

/// Sparse exterior-algebra element over the 6 form generators, keyed by the
/// bitmask of generators present.  Used internally for wedges of mixed degree.
using SparseForm = std::map<std::uint8_t, Complex>;

void sparse_add(SparseForm& form, std::uint8_t mask, Complex value)
{
    if (value == Complex{}) return;
    auto [it, inserted] = form.try_emplace(mask, value);
    if (!inserted) {
        it->second += value;
        if (it->second == Complex{}) form.erase(it);
    }
}

/// Sign from moving the generators of rhs into ascending position past those
/// of lhs (both masks ascending internally).
int koszul_sign(std::uint8_t lhs, std::uint8_t rhs)
{
    int swaps = 0;
    for (int bit = 0; bit < kNumGenerators; ++bit)
        if (rhs & (1u << bit)) swaps += std::popcount(static_cast<unsigned>(lhs >> (bit + 1)));
    return (swaps % 2 == 0) ? 1 : -1;
}

SparseForm wedge(const SparseForm& lhs, const SparseForm& rhs)
{
    SparseForm out;
    for (const auto& [ml, cl] : lhs)
        for (const auto& [mr, cr] : rhs) {
            if (ml & mr) continue;
            sparse_add(out, static_cast<std::uint8_t>(ml | mr), cl * cr * static_cast<double>(koszul_sign(ml, mr)));
        }
    return out;
}

SparseForm to_sparse(const ThreeForm& form)
{
    SparseForm out;
    for (int idx = 0; idx < kNumTriples; ++idx) {
        auto [a, b, c] = kTriples[static_cast<std::size_t>(idx)];
        sparse_add(out, static_cast<std::uint8_t>((1u << a) | (1u << b) | (1u << c)), form[idx]);
    }
    return out;
}

ThreeForm from_sparse(const SparseForm& sparse)
{
    ThreeForm out;
    for (const auto& [mask, value] : sparse) {
        if (std::popcount(static_cast<unsigned>(mask)) != 3)
            throw std::logic_error("sparse form is not homogeneous of degree 3");
        std::array<int, 3> triple{};
        int n = 0;
        for (int bit = 0; bit < kNumGenerators; ++bit)
            if (mask & (1u << bit)) triple[static_cast<std::size_t>(n++)] = bit;
        out[triple_index(triple[0], triple[1], triple[2])] += value;
    }
    return out;
}

double sparse_norm(const SparseForm& form)
{
    double sum = 0.0;
    for (const auto& [mask, value] : form) sum += std::norm(value);
    return std::sqrt(sum);
}

/// omega = dx1^dy1 + dx2^dy2 + dx3^dy3 = (i/2) * sum_k dz_k ^ dzbar_k.
const SparseForm& symplectic_form()
{
    static const SparseForm omega = [] {
        SparseForm out;
        for (int k = 0; k < 3; ++k)
            sparse_add(out, static_cast<std::uint8_t>((1u << k) | (1u << (k + 3))), Complex(0.0, 0.5));
        return out;
    }();
    return omega;
}

/// Pairings of form generators with vector generators:
/// row = form generator (dz1..dzbar3), column = vector generator (dx1..dy3).
Complex generator_pairing(int form_gen, int vec_gen)
{
    const int coord = form_gen % 3;
    if (vec_gen / 2 != coord) return {};
    if (vec_gen % 2 == 0) return {1.0, 0.0};
    return form_gen < 3 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
}

/// det of the 3x3 pairing matrix between a form triple and a vector triple.
const std::array<std::array<Complex, kNumTriples>, kNumTriples>& pairing_table()
{
    static const auto table = [] {
        std::array<std::array<Complex, kNumTriples>, kNumTriples> out{};
        for (int fi = 0; fi < kNumTriples; ++fi)
            for (int vi = 0; vi < kNumTriples; ++vi) {
                const auto& f = kTriples[static_cast<std::size_t>(fi)];
                const auto& v = kTriples[static_cast<std::size_t>(vi)];
                Complex m[3][3];
                for (int r = 0; r < 3; ++r)
                    for (int s = 0; s < 3; ++s) m[r][s] = generator_pairing(f[static_cast<std::size_t>(r)], v[static_cast<std::size_t>(s)]);
                out[static_cast<std::size_t>(fi)][static_cast<std::size_t>(vi)] =
                    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            }
        return out;
    }();
    return table;
}

/// The 14 chart basis forms in the order (alpha, beta1..3, beta_pair 12,13,23,
/// gamma1..3, gamma_pair 12,13,23, delta), plus the 6 complement forms
/// omega ^ generator spanning the orthogonal complement of the primitive
/// subspace.
struct PrimitiveChart {
    std::array<ThreeForm, 14> basis;
    std::array<double, 14> norm_squared;
    std::array<ThreeForm, 6> complement;
    std::array<double, 6> complement_norm_squared;
};

const PrimitiveChart& primitive_chart()
{
    static const PrimitiveChart chart = [] {
        PrimitiveChart out;
        auto pair = [](int a1, int b1, int c1, int a2, int b2, int c2) {
            ThreeForm f = ThreeForm::monomial(a1, b1, c1);
            f += ThreeForm::monomial(a2, b2, c2);
            return f;
        };
        out.basis = {
            ThreeForm::monomial(0, 1, 2), // alpha: dz1 dz2 dz3
            ThreeForm::monomial(3, 1, 2), // beta1: dzbar1 dz2 dz3
            ThreeForm::monomial(0, 4, 2), // beta2: dz1 dzbar2 dz3
            ThreeForm::monomial(0, 1, 5), // beta3: dz1 dz2 dzbar3
            pair(4, 1, 2, 0, 3, 2),       // beta12: dzbar2 dz2 dz3 + dz1 dzbar1 dz3
            pair(5, 1, 2, 0, 1, 3),       // beta13: dzbar3 dz2 dz3 + dz1 dz2 dzbar1
            pair(0, 5, 2, 0, 1, 4),       // beta23: dz1 dzbar3 dz3 + dz1 dz2 dzbar2
            ThreeForm::monomial(0, 4, 5), // gamma1: dz1 dzbar2 dzbar3
            ThreeForm::monomial(3, 1, 5), // gamma2: dzbar1 dz2 dzbar3
            ThreeForm::monomial(3, 4, 2), // gamma3: dzbar1 dzbar2 dz3
            pair(1, 4, 5, 3, 0, 5),       // gamma12: dz2 dzbar2 dzbar3 + dzbar1 dz1 dzbar3
            pair(2, 4, 5, 3, 4, 0),       // gamma13: dz3 dzbar2 dzbar3 + dzbar1 dzbar2 dz1
            pair(3, 2, 5, 3, 4, 1),       // gamma23: dzbar1 dz3 dzbar3 + dzbar1 dzbar2 dz2
            ThreeForm::monomial(3, 4, 5), // delta: dzbar1 dzbar2 dzbar3
        };
        for (std::size_t k = 0; k < out.basis.size(); ++k) out.norm_squared[k] = out.basis[k].norm_squared();
        for (int g = 0; g < kNumGenerators; ++g) {
            SparseForm gen;
            sparse_add(gen, static_cast<std::uint8_t>(1u << g), 1.0);
            out.complement[static_cast<std::size_t>(g)] = from_sparse(wedge(symplectic_form(), gen));
            out.complement_norm_squared[static_cast<std::size_t>(g)] =
                out.complement[static_cast<std::size_t>(g)].norm_squared();
        }
        return out;
    }();
    return chart;
}

} // namespace

std::array<int, 3> triple_at(int index)
{
    return kTriples.at(static_cast<std::size_t>(index));
}

int triple_index(int a, int b, int c)
{
    if (a < 0 || c >= kNumGenerators || !(a < b && b < c))
        throw std::out_of_range("triple must be strictly ascending generator indices");
    return kTripleIndex[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
}

ThreeForm ThreeForm::monomial(int g1, int g2, int g3, Complex coeff)
{
    ThreeForm out;
    out.add_term(g1, g2, g3, coeff);
    return out;
}

Complex ThreeForm::coeff(int g1, int g2, int g3) const
{
    const int sign = sort_with_sign(g1, g2, g3);
    if (sign == 0) return {};
    return static_cast<double>(sign) * (*this)[triple_index(g1, g2, g3)];
}

void ThreeForm::add_term(int g1, int g2, int g3, Complex coeff)
{
    const int sign = sort_with_sign(g1, g2, g3);
    if (sign == 0) return;
    (*this)[triple_index(g1, g2, g3)] += static_cast<double>(sign) * coeff;
}

ThreeForm& ThreeForm::operator+=(const ThreeForm& rhs)
{
    for (int i = 0; i < kNumTriples; ++i) coeffs_[static_cast<std::size_t>(i)] += rhs[i];
    return *this;
}

ThreeForm& ThreeForm::operator-=(const ThreeForm& rhs)
{
    for (int i = 0; i < kNumTriples; ++i) coeffs_[static_cast<std::size_t>(i)] -= rhs[i];
    return *this;
}

ThreeForm& ThreeForm::operator*=(Complex scale)
{
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

ThreeForm ThreeForm::conjugate() const
{
    ThreeForm out;
    for (int idx = 0; idx < kNumTriples; ++idx) {
        auto [a, b, c] = kTriples[static_cast<std::size_t>(idx)];
        out.add_term((a + 3) % 6, (b + 3) % 6, (c + 3) % 6, std::conj((*this)[idx]));
    }
    return out;
}

double ThreeForm::norm_squared() const
{
    double sum = 0.0;
    for (const auto& c : coeffs_) sum += std::norm(c);
    return sum;
}

double ThreeForm::norm() const
{
    return std::sqrt(norm_squared());
}

Complex inner_product(const ThreeForm& a, const ThreeForm& b)
{
    Complex sum;
    for (int i = 0; i < kNumTriples; ++i) sum += std::conj(a[i]) * b[i];
    return sum;
}

LagrangianFrame rotate(const LagrangianFrame& frame, double theta)
{
    const Complex phase = std::polar(1.0, theta);
    LagrangianFrame out = frame;
    for (auto& column : out.columns)
        for (auto& entry : column) entry *= phase;
    return out;
}

Trivector Trivector::from_components(const std::array<double, kNumTriples>& components)
{
    Trivector out;
    out.components_ = components;
    return out;
}

Trivector Trivector::from_frame(const LagrangianFrame& frame, double tolerance)
{
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            Complex dot;
            for (int i = 0; i < 3; ++i)
                dot += std::conj(frame.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) *
                       frame.columns[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            const Complex expected = (j == k) ? Complex(1.0, 0.0) : Complex{};
            if (std::abs(dot - expected) > tolerance)
                throw std::invalid_argument("frame columns are not unitary");
        }

    // Real coordinates of the columns in the order (x1, y1, x2, y2, x3, y3).
    double real[6][3];
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            real[2 * i][j] = frame.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].real();
            real[2 * i + 1][j] = frame.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].imag();
        }

    Trivector out;
    for (int idx = 0; idx < kNumTriples; ++idx) {
        auto [a, b, c] = kTriples[static_cast<std::size_t>(idx)];
        out.components_[static_cast<std::size_t>(idx)] =
            real[a][0] * (real[b][1] * real[c][2] - real[b][2] * real[c][1]) -
            real[a][1] * (real[b][0] * real[c][2] - real[b][2] * real[c][0]) +
            real[a][2] * (real[b][0] * real[c][1] - real[b][1] * real[c][0]);
    }
    out.frame_ = frame;
    return out;
}

Complex evaluate(const ThreeForm& form, const Trivector& vec)
{
    const auto& table = pairing_table();
    Complex sum;
    for (int fi = 0; fi < kNumTriples; ++fi) {
        if (form[fi] == Complex{}) continue;
        Complex row;
        for (int vi = 0; vi < kNumTriples; ++vi)
            row += table[static_cast<std::size_t>(fi)][static_cast<std::size_t>(vi)] * vec[vi];
        sum += form[fi] * row;
    }
    return sum;
}

TypeSplit type_split(const ThreeForm& form)
{
    TypeSplit out;
    for (int idx = 0; idx < kNumTriples; ++idx) {
        switch (bar_count(kTriples[static_cast<std::size_t>(idx)])) {
        case 0: out.p30[idx] = form[idx]; break;
        case 1: out.p21[idx] = form[idx]; break;
        case 2: out.p12[idx] = form[idx]; break;
        default: out.p03[idx] = form[idx]; break;
        }
    }
    return out;
}

double primitivity_residual(const ThreeForm& form)
{
    return sparse_norm(wedge(to_sparse(form), symplectic_form()));
}

ThreeForm primitive_projection(const ThreeForm& form)
{
    const auto& chart = primitive_chart();
    ThreeForm out = form;
    for (std::size_t g = 0; g < chart.complement.size(); ++g) {
        const Complex overlap = inner_product(chart.complement[g], form) / chart.complement_norm_squared[g];
        out -= overlap * chart.complement[g];
    }
    return out;
}

PrimitiveCoefficients primitive_coefficients(const ThreeForm& form)
{
    const auto& chart = primitive_chart();
    std::array<Complex, 14> raw{};
    for (std::size_t k = 0; k < raw.size(); ++k)
        raw[k] = inner_product(chart.basis[k], form) / chart.norm_squared[k];
    PrimitiveCoefficients out;
    out.alpha = raw[0];
    out.beta = {raw[1], raw[2], raw[3]};
    out.beta_pair = {raw[4], raw[5], raw[6]};
    out.gamma = {raw[7], raw[8], raw[9]};
    out.gamma_pair = {raw[10], raw[11], raw[12]};
    out.delta = raw[13];
    return out;
}

ThreeForm assemble_primitive(const PrimitiveCoefficients& coeffs)
{
    const auto& chart = primitive_chart();
    const std::array<Complex, 14> raw = {
        coeffs.alpha,
        coeffs.beta[0], coeffs.beta[1], coeffs.beta[2],
        coeffs.beta_pair[0], coeffs.beta_pair[1], coeffs.beta_pair[2],
        coeffs.gamma[0], coeffs.gamma[1], coeffs.gamma[2],
        coeffs.gamma_pair[0], coeffs.gamma_pair[1], coeffs.gamma_pair[2],
        coeffs.delta,
    };
    ThreeForm out;
    for (std::size_t k = 0; k < raw.size(); ++k) out += raw[k] * chart.basis[k];
    return out;
}

std::array<Complex, 4> lagrangian_cubic(const ThreeForm& form, const Trivector& vec)
{
    if (!vec.has_frame())
        throw std::invalid_argument("trivector must carry a Lagrangian frame");
    const TypeSplit parts = type_split(form);
    return {evaluate(parts.p30, vec), evaluate(parts.p21, vec), evaluate(parts.p12, vec),
            evaluate(parts.p03, vec)};
}

ThreeForm pullback_linear(const ThreeForm& form, const RealMatrix6& m)
{
    // Image of each form generator: first its real-coordinate row transformed
    // by m, then re-expressed as a combination of dz and dzbar.
    std::array<SparseForm, kNumGenerators> images;
    for (int g = 0; g < kNumGenerators; ++g) {
        // dz_k has real row (dx_k, i dy_k); dzbar_k has (dx_k, -i dy_k).
        const int coord = g % 3;
        const Complex dy_coeff = g < 3 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        std::array<Complex, 6> real_row{};
        for (int col = 0; col < 6; ++col)
            real_row[static_cast<std::size_t>(col)] =
                m[static_cast<std::size_t>(2 * coord)][static_cast<std::size_t>(col)] +
                dy_coeff * m[static_cast<std::size_t>(2 * coord + 1)][static_cast<std::size_t>(col)];
        // a dx_k + b dy_k = ((a - i b)/2) dz_k + ((a + i b)/2) dzbar_k.
        SparseForm image;
        for (int k = 0; k < 3; ++k) {
            const Complex a = real_row[static_cast<std::size_t>(2 * k)];
            const Complex b = real_row[static_cast<std::size_t>(2 * k + 1)];
            sparse_add(image, static_cast<std::uint8_t>(1u << k), (a - Complex(0.0, 1.0) * b) * 0.5);
            sparse_add(image, static_cast<std::uint8_t>(1u << (k + 3)), (a + Complex(0.0, 1.0) * b) * 0.5);
        }
        images[static_cast<std::size_t>(g)] = std::move(image);
    }

    SparseForm total;
    for (int idx = 0; idx < kNumTriples; ++idx) {
        if (form[idx] == Complex{}) continue;
        auto [a, b, c] = kTriples[static_cast<std::size_t>(idx)];
        SparseForm term = wedge(wedge(images[static_cast<std::size_t>(a)], images[static_cast<std::size_t>(b)]),
                                images[static_cast<std::size_t>(c)]);
        for (auto& [mask, value] : term) sparse_add(total, mask, form[idx] * value);
    }
    return from_sparse(total);
}

Trivector apply_linear(const Trivector& vec, const RealMatrix6& m)
{
    // Third compound matrix: component J of the image collects det(m[J, I])
    // over source triples I.
    std::array<double, kNumTriples> out{};
    for (int vi = 0; vi < kNumTriples; ++vi) {
        if (vec[vi] == 0.0) continue;
        const auto& src = kTriples[static_cast<std::size_t>(vi)];
        for (int ti = 0; ti < kNumTriples; ++ti) {
            const auto& dst = kTriples[static_cast<std::size_t>(ti)];
            double sub[3][3];
            for (int r = 0; r < 3; ++r)
                for (int s = 0; s < 3; ++s)
                    sub[r][s] = m[static_cast<std::size_t>(dst[static_cast<std::size_t>(r)])]
                                 [static_cast<std::size_t>(src[static_cast<std::size_t>(s)])];
            const double det = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                               sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                               sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
            out[static_cast<std::size_t>(ti)] += det * vec[vi];
        }
    }
    return Trivector::from_components(out);
}

} // namespace stab3
