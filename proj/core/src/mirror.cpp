#include "stab3/mirror.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stab3 {

namespace {

using detail::Mat;

// ---------------------------------------------------------------------------
// Exact bridge between the two monomial languages.
//
// Real side: the six torus generators dx1, dy1, ..., dx3, dy3 as used by the
// cohomology classes (bit g of a mask = generator g).  Complex side: the 20
// ascending triples of dz1, dz2, dz3, dzb1, dzb2, dzb3 in the storage order
// of the 3-form container.  dz_k = dx_k + i dy_k.

CohomClass complex_generator(int g)
{
    CohomClass c(Ambient::E3);
    const int factor = g % 3;
    c.add_term(1u << (2 * factor), CRat(1));
    c.add_term(1u << (2 * factor + 1), g < 3 ? CRat::i(1) : CRat::i(-1));
    return c;
}

CohomClass complex_monomial_class(int index)
{
    const std::array<int, 3> t = triple_at(index);
    return wedge(wedge(complex_generator(t[0]), complex_generator(t[1])),
                 complex_generator(t[2]));
}

// Parity sign of sorting three distinct generator indices ascending.
CRat sorted_sign(int& a, int& b, int& c)
{
    int sign = 1;
    if (a > b) { std::swap(a, b); sign = -sign; }
    if (b > c) { std::swap(b, c); sign = -sign; }
    if (a > b) { std::swap(a, b); sign = -sign; }
    return CRat(sign);
}

struct ExactTables {
    std::vector<uint32_t> real_masks;       // the 20 degree-3 masks, ascending
    std::vector<int> real_index_of_mask;    // mask -> row, -1 elsewhere
    Mat<CRat> complex_to_real;              // 20 x 20, column = complex monomial
    Mat<CRat> real_to_complex;              // exact inverse
    std::array<CohomClass, kNumTriples> complex_monomials;
    Mat<CRat> wedge_kernel;                 // K(s,t) = integral of mon_s ^ mon_t
    MirrorTable table;
    Mat<CRat> transfer;                     // 14 x 14, columns = table charges
    Mat<CRat> mirror;                       // 20 x 14 = forms * transfer^{-1}
    std::vector<int> pivot_rows;            // 14 rows with invertible block
    Mat<CRat> pivot_inverse;                // exact inverse of that block
    std::array<SurfaceMirrorRow, 5> surface;
};

int real_row(const ExactTables& t, uint32_t mask)
{
    const int row = t.real_index_of_mask[mask];
    if (row < 0) throw std::logic_error("not a degree-3 monomial mask");
    return row;
}

// Adds one wedge monomial, generators in any order, to a form-coefficient
// column (rows in ascending-triple storage order).
void add_exact_monomial(Mat<CRat>& m, int col, int g1, int g2, int g3, const CRat& coeff)
{
    const CRat sign = sorted_sign(g1, g2, g3);
    m(triple_index(g1, g2, g3), col) += sign * coeff;
}

LatticeVec conjugate_vec(const LatticeVec& v)
{
    LatticeVec out(v.ambient);
    for (int i = 0; i < v.size(); ++i) out[i] = v[i].conj();
    return out;
}

const ExactTables& tables()
{
    static const ExactTables t = [] {
        ExactTables t;

        // Monomial bases and their exact change of coordinates.
        for (uint32_t mask = 0; mask < 64; ++mask)
            if (std::popcount(mask) == 3) t.real_masks.push_back(mask);
        t.real_index_of_mask.assign(64, -1);
        for (int i = 0; i < kNumTriples; ++i)
            t.real_index_of_mask[t.real_masks[static_cast<size_t>(i)]] = i;

        t.complex_to_real = Mat<CRat>(kNumTriples, kNumTriples);
        for (int j = 0; j < kNumTriples; ++j) {
            t.complex_monomials[static_cast<size_t>(j)] = complex_monomial_class(j);
            for (const auto& [mask, coeff] : t.complex_monomials[static_cast<size_t>(j)].coeffs)
                t.complex_to_real(real_row(t, mask), j) = coeff;
        }
        auto inv = detail::inverse(t.complex_to_real);
        if (!inv) throw std::logic_error("monomial change of basis is singular");
        t.real_to_complex = std::move(*inv);

        t.wedge_kernel = Mat<CRat>(kNumTriples, kNumTriples);
        for (int s = 0; s < kNumTriples; ++s)
            for (int u = 0; u < kNumTriples; ++u)
                t.wedge_kernel(s, u) = integrate(wedge(t.complex_monomials[static_cast<size_t>(s)],
                                                       t.complex_monomials[static_cast<size_t>(u)]));

        // The seven printed rows of the table.
        const CohomClass d1 = cycle_class(CycleName::D1);
        const CohomClass d2 = cycle_class(CycleName::D2);
        const CohomClass d3 = cycle_class(CycleName::D3);
        auto shifted_diagonal = [&](CycleName diag, const CohomClass& a, const CohomClass& b) {
            return cycle_class(diag) - a - b;
        };
        auto mixed_charge = [&](CycleName diag, const CohomClass& a, const CohomClass& b,
                                const CohomClass& c) {
            const CohomClass f = shifted_diagonal(diag, a, b);
            return to_basis(f * CRat::i(2) + wedge(c, f) * CRat(2));
        };

        std::array<LatticeVec, 7> charges = {
            exp_divisor({+1, +1, +1}, 1),
            exp_divisor({+1, -1, -1}, 1),
            exp_divisor({-1, +1, -1}, 1),
            exp_divisor({-1, -1, +1}, 1),
            mixed_charge(CycleName::Delta12, d1, d2, d3),
            mixed_charge(CycleName::Delta13, d1, d3, d2),
            mixed_charge(CycleName::Delta23, d2, d3, d1),
        };
        // Generator indices: dz1, dz2, dz3, dzb1, dzb2, dzb3 = 0..5.
        const std::array<std::vector<std::array<int, 3>>, 7> monomials = {{
            {{{0, 1, 2}}},             // dz1 dz2 dz3
            {{{0, 4, 5}}},             // dz1 dzb2 dzb3
            {{{3, 1, 5}}},             // dzb1 dz2 dzb3
            {{{3, 4, 2}}},             // dzb1 dzb2 dz3
            {{{0, 3, 5}}, {{4, 1, 5}}}, // (dz1 dzb1 + dzb2 dz2) dzb3
            {{{0, 3, 4}}, {{5, 2, 4}}}, // (dz1 dzb1 + dzb3 dz3) dzb2
            {{{1, 4, 3}}, {{5, 2, 3}}}, // (dz2 dzb2 + dzb3 dz3) dzb1
        }};
        // The three mixed rows must form a single orbit under cyclic
        // relabeling of the factors, or the correspondence cannot commute
        // with factor permutations.  Writing each pair with the smaller
        // index unbarred-first breaks that for the (1,3) pair -- the cycle
        // reaches it from the (1,2) pair only up to sign -- so that row's
        // form carries the opposite orientation:
        //   (dzb1 dz1 + dz3 dzb3) dzb2 = -(dz1 dzb1 + dzb3 dz3) dzb2.
        // With this choice the full permutation group intertwines (cycles
        // exactly, transpositions up to one global sign), and the row pairs
        // with the same mixed charge as before.
        const std::array<int, 7> orientation = {1, 1, 1, 1, 1, -1, 1};

        Mat<CRat> forms(kNumTriples, 14);
        for (int r = 0; r < 7; ++r) {
            ThreeForm form;
            const CRat coeff{Rational(orientation[static_cast<size_t>(r)])};
            for (const auto& m : monomials[static_cast<size_t>(r)]) {
                form += ThreeForm::monomial(m[0], m[1], m[2],
                                            Complex(orientation[static_cast<size_t>(r)], 0));
                add_exact_monomial(forms, r, m[0], m[1], m[2], coeff);
                // Conjugation swaps dz_k <-> dzb_k, i.e. shifts indices by 3.
                add_exact_monomial(forms, r + 7, (m[0] + 3) % 6, (m[1] + 3) % 6,
                                   (m[2] + 3) % 6, coeff);
            }
            t.table.rows[static_cast<size_t>(r)] = {charges[static_cast<size_t>(r)], form};
            t.table.rows[static_cast<size_t>(r + 7)] = {
                conjugate_vec(charges[static_cast<size_t>(r)]), form.conjugate()};
        }

        t.transfer = Mat<CRat>(14, 14);
        for (int r = 0; r < 14; ++r)
            for (int i = 0; i < 14; ++i)
                t.transfer(i, r) = t.table.rows[static_cast<size_t>(r)].charge[i];
        auto transfer_inv = detail::inverse(t.transfer);
        if (!transfer_inv) throw std::logic_error("table charges do not span the lattice");
        t.mirror = forms * *transfer_inv;

        // Select 14 rows carrying an invertible block: the pivot columns of
        // the transposed matrix are exactly such a row set.
        Mat<CRat> transposed = t.mirror.transpose();
        t.pivot_rows = detail::rref(transposed);
        if (t.pivot_rows.size() != 14)
            throw std::logic_error("correspondence matrix does not have rank 14");
        Mat<CRat> block(14, 14);
        for (int i = 0; i < 14; ++i)
            for (int j = 0; j < 14; ++j)
                block(i, j) = t.mirror(t.pivot_rows[static_cast<size_t>(i)], j);
        auto block_inv = detail::inverse(block);
        if (!block_inv) throw std::logic_error("pivot block is singular");
        t.pivot_inverse = std::move(*block_inv);

        // Surface table.  dz_k on the four-torus uses generator bits
        // (2k, 2k+1); all five forms are expanded into real generators.
        auto surface_generator = [](int g) {
            CohomClass c(Ambient::E2);
            const int factor = g % 2;
            c.add_term(1u << (2 * factor), CRat(1));
            c.add_term(1u << (2 * factor + 1), g < 2 ? CRat::i(1) : CRat::i(-1));
            return c;
        };
        // Generator indices on the surface: dz1, dz2, dzb1, dzb2 = 0..3.
        auto surface_form = [&](int a, int b) {
            return wedge(surface_generator(a), surface_generator(b));
        };
        const CohomClass s1 = cycle_class(CycleName::D1, Ambient::E2);
        const CohomClass s2 = cycle_class(CycleName::D2, Ambient::E2);
        auto surface_exp = [&](int sign1, int sign2) {
            // exp(i(s1 D1 + s2 D2)) = 1 + i(s1 D1 + s2 D2) - s1 s2 [pt].
            CohomClass c = make_unit(Ambient::E2);
            c += s1 * CRat::i(sign1) + s2 * CRat::i(sign2);
            c -= wedge(s1, s2) * CRat(sign1 * sign2);
            return to_basis(c);
        };
        const CohomClass shifted = cycle_class(CycleName::Delta, Ambient::E2) - s1 - s2;
        t.surface = {{
            {surface_exp(+1, +1), surface_form(0, 1)},
            {surface_exp(+1, -1), surface_form(0, 3)},
            {surface_exp(-1, +1), surface_form(2, 1)},
            {to_basis(shifted * CRat::i(2)), surface_form(0, 2) + surface_form(3, 1)},
            {surface_exp(-1, -1), surface_form(2, 3)},
        }};
        return t;
    }();
    return t;
}

// Exact coordinates (ascending-triple order) of the image of v.
std::vector<CRat> mirror_coords(const LatticeVec& v)
{
    const ExactTables& t = tables();
    if (v.ambient != Ambient::E3 || v.size() != 14)
        throw std::invalid_argument("mirror_form expects a rank-14 lattice vector");
    std::vector<CRat> out(kNumTriples);
    for (int s = 0; s < kNumTriples; ++s)
        for (int j = 0; j < 14; ++j) {
            if (t.mirror(s, j).is_zero() || v[j].is_zero()) continue;
            out[static_cast<size_t>(s)] += t.mirror(s, j) * v[j];
        }
    return out;
}

} // namespace

const MirrorTable& mirror_table() { return tables().table; }

const detail::Mat<CRat>& mirror_matrix() { return tables().mirror; }

ThreeForm mirror_form(const LatticeVec& v)
{
    const std::vector<CRat> coords = mirror_coords(v);
    ThreeForm out;
    for (int s = 0; s < kNumTriples; ++s) out[s] = to_complex(coords[static_cast<size_t>(s)]);
    return out;
}

LatticeVec mirror_charge(const ThreeForm& omega, double tol)
{
    if (primitivity_residual(omega) >= tol)
        throw std::invalid_argument("mirror_charge requires a primitive 3-form");
    const ExactTables& t = tables();
    LatticeVec out;
    for (int i = 0; i < 14; ++i) {
        Complex value = 0.0;
        for (int j = 0; j < 14; ++j)
            value += to_complex(t.pivot_inverse(i, j)) * omega[t.pivot_rows[static_cast<size_t>(j)]];
        out[i] = CRat(Rational(value.real()), Rational(value.imag()));
    }
    return out;
}

LatticeVec conjugate(const LatticeVec& v) { return conjugate_vec(v); }

Complex wedge_integral(const ThreeForm& a, const ThreeForm& b)
{
    const ExactTables& t = tables();
    Complex out = 0.0;
    for (int s = 0; s < kNumTriples; ++s) {
        if (a[s] == Complex(0.0)) continue;
        for (int u = 0; u < kNumTriples; ++u) {
            const CRat& k = t.wedge_kernel(s, u);
            if (k.is_zero()) continue;
            out += a[s] * b[u] * to_complex(k);
        }
    }
    return out;
}

CRat primitive_wedge_pairing(const LatticeVec& v, const LatticeVec& w)
{
    const ExactTables& t = tables();
    const std::vector<CRat> a = mirror_coords(v);
    const std::vector<CRat> b = mirror_coords(w);
    CRat out;
    for (int s = 0; s < kNumTriples; ++s) {
        if (a[static_cast<size_t>(s)].is_zero()) continue;
        for (int u = 0; u < kNumTriples; ++u) {
            const CRat& k = t.wedge_kernel(s, u);
            if (k.is_zero()) continue;
            out += a[static_cast<size_t>(s)] * b[static_cast<size_t>(u)] * k;
        }
    }
    return out;
}

LatticeMatrix sp_action_matrix(const detail::Mat<Rational>& g)
{
    if (!is_symplectic(g))
        throw std::invalid_argument("sp_action_matrix expects a symplectic matrix");
    const ExactTables& t = tables();

    // Pullback action on forms: a coordinate 1-form u_j composes with g to
    // the j-th row of g, so the assignment is contravariant,
    // sp_action(g h) = sp_action(h) sp_action(g).  This is the variance under
    // which the standard shear matches tensoring by the coordinate divisor.
    // Block coordinate m lives on real generator bit 2m (x-block) or
    // 2(m-3)+1 (y-block).
    auto generator_bit = [](int block) {
        return block < 3 ? 2 * block : 2 * (block - 3) + 1;
    };
    std::vector<CohomClass> images(6, CohomClass(Ambient::E3));
    for (int block = 0; block < 6; ++block) {
        CohomClass image(Ambient::E3);
        for (int m = 0; m < 6; ++m) {
            if (g(block, m) == 0) continue;
            image.add_term(1u << generator_bit(m), CRat(g(block, m)));
        }
        images[static_cast<size_t>(generator_bit(block))] = std::move(image);
    }

    Mat<CRat> action_real(kNumTriples, kNumTriples);
    for (int col = 0; col < kNumTriples; ++col) {
        const CohomClass image =
            substitute_generators(make_monomial(Ambient::E3, t.real_masks[static_cast<size_t>(col)]),
                                  images);
        for (const auto& [mask, coeff] : image.coeffs)
            action_real(real_row(t, mask), col) = coeff;
    }

    const Mat<CRat> action = t.real_to_complex * action_real * t.complex_to_real;
    auto solved = detail::solve(t.mirror, action * t.mirror);
    if (!solved)
        throw std::invalid_argument("the action does not preserve the primitive span");
    return LatticeMatrix{"sp_action", std::move(*solved)};
}

double equivariance_residual(const detail::Mat<Rational>& g)
{
    struct CatalogEntry {
        Mat<Rational> generator;
        Mat<CRat> lattice;
    };
    static const std::vector<CatalogEntry> catalog = [] {
        std::vector<CatalogEntry> entries;
        auto lattice_of = [](AutoEq kind) { return autoeq_matrix(kind).m; };
        auto inverse_of = [](const Mat<CRat>& m) {
            auto inv = detail::inverse(m);
            if (!inv) throw std::logic_error("lattice autoequivalence is singular");
            return *inv;
        };

        entries.push_back({symplectic_j6(), lattice_of(AutoEq::Phi)});

        // Shears N(B) = [[I, B], [0, I]] for B = E_ii match tensoring by the
        // coordinate divisors; B = E_ij + E_ji matches tensoring by the line
        // bundle of the shifted diagonal Delta_ij - D_i - D_j.
        auto shear = [](const std::array<std::pair<int, int>, 2>& slots) {
            Mat<Rational> n = Mat<Rational>::identity(6);
            for (const auto& [r, c] : slots) n(r, 3 + c) = 1;
            return n;
        };
        const std::array<AutoEq, 3> tensor_d = {AutoEq::TensorD1, AutoEq::TensorD2,
                                                AutoEq::TensorD3};
        for (int i = 0; i < 3; ++i)
            entries.push_back({shear({{{i, i}, {i, i}}}),
                               lattice_of(tensor_d[static_cast<size_t>(i)])});
        const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
        const std::array<AutoEq, 3> tensor_delta = {AutoEq::TensorDelta12, AutoEq::TensorDelta13,
                                                    AutoEq::TensorDelta23};
        // The first Chern form of Delta_ij is (dx_i - dx_j)^(dy_i - dy_j),
        // whose cross terms are -E_ij - E_ji, so the *positive* symmetric
        // shear matches tensoring by D_i + D_j - Delta_ij.
        for (int p = 0; p < 3; ++p) {
            const auto [i, j] = pairs[static_cast<size_t>(p)];
            const Mat<CRat> lattice =
                lattice_of(tensor_d[static_cast<size_t>(i)]) *
                lattice_of(tensor_d[static_cast<size_t>(j)]) *
                inverse_of(lattice_of(tensor_delta[static_cast<size_t>(p)]));
            entries.push_back({shear({{{i, j}, {j, i}}}), lattice});
        }

        // Cyclic coordinate permutations: the pullback along
        // (x1,x2,x3) -> (x3,x1,x2) has symplectic image [[P^T, 0], [0, P^-1]]
        // with P the matrix of that substitution on column vectors.
        auto permutation_image = [](const std::array<int, 3>& dest) {
            // dest[k] = index that coordinate k maps to under the point map.
            Mat<Rational> p(3, 3);
            for (int k = 0; k < 3; ++k) p(dest[static_cast<size_t>(k)], k) = 1;
            Mat<Rational> g(6, 6);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    g(r, c) = p(c, r);      // P^T
                    g(3 + r, 3 + c) = p(c, r); // P^{-1} = P^T
                }
            return g;
        };
        // The generator built from dest = {1,2,0} substitutes dx_k by
        // dx_{dest[k]}, i.e. relabels generator forms forward exactly as
        // the rotation functor F does on divisor slots.
        entries.push_back({permutation_image({1, 2, 0}), lattice_of(AutoEq::F)});
        entries.push_back({permutation_image({2, 0, 1}), lattice_of(AutoEq::F2)});
        return entries;
    }();

    for (const CatalogEntry& entry : catalog) {
        if (!(entry.generator == g)) continue;
        const Mat<CRat> induced = sp_action_matrix(g).m;
        double plus = 0.0;
        double minus = 0.0;
        for (int i = 0; i < 14; ++i)
            for (int j = 0; j < 14; ++j) {
                plus = std::max(plus, std::abs(to_complex(induced(i, j) - entry.lattice(i, j))));
                minus = std::max(minus, std::abs(to_complex(induced(i, j) + entry.lattice(i, j))));
            }
        return std::min(plus, minus);
    }
    throw std::invalid_argument("no matching lattice autoequivalence for this generator");
}

ChargePair charge_from_params(double alpha, double beta, double gamma)
{
    if (alpha < 0 || beta < 0 || gamma < 0 || alpha + beta + gamma >= 1)
        throw std::invalid_argument("parameters outside the damping cone");
    const std::array<Rational, 3> weights = {Rational(alpha), Rational(beta), Rational(gamma)};
    const std::array<std::array<int, 3>, 3> signs = {{{-1, -1, +1}, {-1, +1, -1}, {+1, -1, -1}}};
    LatticeVec charge = exp_divisor({+1, +1, +1}, 1);
    for (int k = 0; k < 3; ++k) {
        if (weights[static_cast<size_t>(k)] == 0) continue;
        const LatticeVec term = exp_divisor(signs[static_cast<size_t>(k)], 1);
        for (int i = 0; i < 14; ++i)
            charge[i] += CRat(weights[static_cast<size_t>(k)]) * term[i];
    }
    return ChargePair{charge, mirror_form(charge)};
}

std::array<CRat, 14> mukai_dual_coordinates(const LatticeVec& w)
{
    std::array<CRat, 14> out;
    for (int j = 0; j < 14; ++j) {
        LatticeVec basis_vector;
        basis_vector[j] = CRat(1);
        out[static_cast<size_t>(j)] = euler_pairing(w, basis_vector);
    }
    return out;
}

MembershipVerdict charge_admissible(const LatticeVec& w, int n_samples, std::uint64_t seed,
                                    double tol)
{
    return membership_test(mirror_form(w), n_samples, seed, tol);
}

CohomClass tensor_mirror_image(const CohomClass& c)
{
    const int factors = generator_count(c.ambient) / 2;
    CohomClass out(c.ambient);
    for (const auto& [mask, coeff] : c.coeffs) {
        uint32_t image_mask = 0;
        std::array<int, 3> degree{};
        for (int f = 0; f < factors; ++f) {
            const uint32_t part = (mask >> (2 * f)) & 3u;
            // One-factor map: 1 -> dx, dx -> 1, dy -> dx^dy, dx^dy -> dy.
            static constexpr std::array<uint32_t, 4> kImage = {1u, 0u, 3u, 2u};
            image_mask |= kImage[part] << (2 * f);
            degree[static_cast<std::size_t>(f)] = static_cast<int>(std::popcount(part));
        }
        // Koszul sign of the graded tensor product of odd operators: the
        // factor-f copy moves past every higher-indexed factor's input
        // part, so each input degree counts once per copy applied after
        // it.  This left-to-right convention is functorial for the signed
        // permutation of factors, which is how it stays consistent with
        // the cyclically oriented table.
        int koszul = 0;
        for (int f = 0; f < factors; ++f) {
            koszul += degree[static_cast<std::size_t>(f)] * (factors - 1 - f);
        }
        out.add_term(image_mask, koszul % 2 == 0 ? coeff : -coeff);
    }
    return out;
}

CohomClass mirror_image_class(int basis_index)
{
    if (basis_index < 0 || basis_index >= 14)
        throw std::out_of_range("basis index must be in 0..13");
    const ExactTables& t = tables();
    CohomClass out(Ambient::E3);
    for (int s = 0; s < kNumTriples; ++s) {
        const CRat& coeff = t.mirror(s, basis_index);
        if (coeff.is_zero()) continue;
        for (const auto& [mask, c] : t.complex_monomials[static_cast<size_t>(s)].coeffs)
            out.add_term(mask, coeff * c);
    }
    return out;
}

const std::array<SurfaceMirrorRow, 5>& surface_mirror_table() { return tables().surface; }

} // namespace stab3
