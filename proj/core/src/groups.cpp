#include "stab3/groups.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace stab3 {

namespace {

using detail::Mat;

/// Interleaved index (x1, y1, x2, y2, x3, y3) of a block-order coordinate.
int interleave(int block_index)
{
    return block_index < 3 ? 2 * block_index : 2 * (block_index - 3) + 1;
}

Matrix3d symmetrized(const Matrix3d& m)
{
    return 0.5 * (m + m.transpose());
}

double smallest_singular_value(const Matrix3d& m)
{
    Eigen::JacobiSVD<Matrix3d> svd(m);
    return svd.singularValues()(2);
}

Matrix3d to_double3(const Mat<Rational>& m)
{
    Matrix3d out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = to_double(m(i, j));
    return out;
}

Matrix6d to_double6(const Mat<Rational>& m)
{
    Matrix6d out;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) out(i, j) = to_double(m(i, j));
    return out;
}

const Matrix3d& double_param(const WordFactor& factor)
{
    return std::get<Matrix3d>(factor.param);
}

Matrix3d param_as_double(const WordFactor& factor)
{
    if (factor.is_rational()) return to_double3(std::get<Mat<Rational>>(factor.param));
    return double_param(factor);
}

bool rational_equals(const Mat<Rational>& m, int diagonal)
{
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (m(i, j) != Rational(i == j ? diagonal : 0)) return false;
    return true;
}

bool param_is(const WordFactor& factor, int diagonal, double tolerance)
{
    if (factor.is_rational()) return rational_equals(std::get<Mat<Rational>>(factor.param), diagonal);
    return (double_param(factor) - diagonal * Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tolerance;
}

Mat<Rational> rational_identity3(int diagonal)
{
    Mat<Rational> m(3, 3);
    for (int i = 0; i < 3; ++i) m(i, i) = diagonal;
    return m;
}

/// Merges two same-kind factors when their parameters have the same arithmetic
/// flavor; N parameters add, H parameters multiply.
bool try_merge(WordFactor& lhs, const WordFactor& rhs)
{
    if (lhs.kind != rhs.kind || lhs.kind == WordFactor::Kind::J) return false;
    if (lhs.is_rational() != rhs.is_rational()) return false;
    if (lhs.is_rational()) {
        const auto& a = std::get<Mat<Rational>>(lhs.param);
        const auto& b = std::get<Mat<Rational>>(rhs.param);
        if (lhs.kind == WordFactor::Kind::N) {
            Mat<Rational> sum(3, 3);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) sum(i, j) = a(i, j) + b(i, j);
            lhs.param = std::move(sum);
        } else {
            lhs.param = a * b;
        }
    } else {
        const Matrix3d a = double_param(lhs);
        const Matrix3d b = double_param(rhs);
        lhs.param = lhs.kind == WordFactor::Kind::N ? Matrix3d(a + b) : Matrix3d(a * b);
    }
    return true;
}

/// Drops identity factors, merges adjacent same-kind factors, cancels J*J
/// against a central sign, and reattaches the sign as a single H(-1) factor.
GeneratorWord simplify_word(GeneratorWord word, double tolerance = 1e-14)
{
    bool negate = false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < word.size();) {
            const bool drop_n = word[i].kind == WordFactor::Kind::N && param_is(word[i], 0, tolerance);
            const bool drop_h = word[i].kind == WordFactor::Kind::H && param_is(word[i], 1, tolerance);
            const bool flip_h = word[i].kind == WordFactor::Kind::H && param_is(word[i], -1, tolerance);
            if (drop_n || drop_h || flip_h) {
                negate ^= flip_h;
                word.erase(word.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                continue;
            }
            ++i;
        }
        for (std::size_t i = 0; i + 1 < word.size();) {
            if (word[i].kind == WordFactor::Kind::J && word[i + 1].kind == WordFactor::Kind::J) {
                negate = !negate;
                word.erase(word.begin() + static_cast<std::ptrdiff_t>(i),
                           word.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                changed = true;
                continue;
            }
            if (try_merge(word[i], word[i + 1])) {
                word.erase(word.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                changed = true;
                continue;
            }
            ++i;
        }
    }
    if (negate) {
        if (is_rational_word(word))
            word.insert(word.begin(), WordFactor::h(rational_identity3(-1)));
        else
            word.insert(word.begin(), WordFactor::h(Matrix3d(-Matrix3d::Identity())));
    }
    return word;
}

/// Quarter rotation of the coordinate planes selected by the mask.
Matrix6d partial_rotation(int mask)
{
    Matrix6d m = Matrix6d::Zero();
    for (int i = 0; i < 3; ++i) {
        if (mask & (1 << i)) {
            m(i, i + 3) = 1.0;
            m(i + 3, i) = -1.0;
        } else {
            m(i, i) = 1.0;
            m(i + 3, i + 3) = 1.0;
        }
    }
    return m;
}

/// Word for the inverse of partial_rotation(mask), built from the generators.
GeneratorWord partial_rotation_inverse_word(int mask)
{
    if (mask == 0) return {};
    if (mask == 7) return {WordFactor::h(Matrix3d(-Matrix3d::Identity())), WordFactor::j()};
    Matrix3d d = Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) d(i, i) = 1.0;
    // inverse of N(D) L(-D) N(D), with L(D) = J N(-D) J H(-1).
    return {WordFactor::n(Matrix3d(-d)), WordFactor::j(),    WordFactor::n(Matrix3d(-d)),
            WordFactor::j(),             WordFactor::h(Matrix3d(-Matrix3d::Identity())),
            WordFactor::n(Matrix3d(-d))};
}

/// Decomposition of a symplectic matrix whose upper-left block is invertible:
/// g = L(C A^-1) H(A) N(A^-1 B) with L(S) = J N(-S) J H(-1).
GeneratorWord decompose_invertible_block(const Matrix6d& g)
{
    const Matrix3d a = g.topLeftCorner<3, 3>();
    const Matrix3d b = g.topRightCorner<3, 3>();
    const Matrix3d c = g.bottomLeftCorner<3, 3>();
    const Matrix3d a_inv = a.inverse();
    const Matrix3d lower = symmetrized(c * a_inv);
    const Matrix3d upper = symmetrized(a_inv * b);

    GeneratorWord word;
    if (lower.cwiseAbs().maxCoeff() > 1e-13) {
        word.push_back(WordFactor::j());
        word.push_back(WordFactor::n(Matrix3d(-lower)));
        word.push_back(WordFactor::j());
        word.push_back(WordFactor::h(Matrix3d(-a)));
    } else {
        word.push_back(WordFactor::h(a));
    }
    if (upper.cwiseAbs().maxCoeff() > 1e-13) word.push_back(WordFactor::n(upper));
    return word;
}

std::string condition_message(double best_sigma, double scale)
{
    std::ostringstream oss;
    oss << "no generator rotation yields an invertible block: best singular value " << best_sigma
        << " at scale " << scale;
    return oss.str();
}

} // namespace

Matrix6d block_j6()
{
    Matrix6d j = Matrix6d::Zero();
    for (int i = 0; i < 3; ++i) {
        j(i, i + 3) = 1.0;
        j(i + 3, i) = -1.0;
    }
    return j;
}

double symplectic_residual(const Matrix6d& g)
{
    return (g.transpose() * block_j6() * g - block_j6()).cwiseAbs().maxCoeff();
}

GroupElement GroupElement::from_sp(const Matrix6d& m)
{
    return {m, Matrix2d::Identity()};
}

GroupElement GroupElement::from_gl2(const Matrix2d& m)
{
    return {Matrix6d::Identity(), m};
}

void GroupElement::validate(double tolerance) const
{
    if (symplectic_residual(sp) > tolerance * std::max(1.0, sp.squaredNorm() / 6.0))
        throw std::invalid_argument("group element: matrix part is not symplectic");
    if (gl2.determinant() <= 0.0)
        throw std::invalid_argument("group element: value part must preserve orientation");
}

ThreeForm act(const GroupElement& g, const ThreeForm& form)
{
    g.validate();

    // Left action: substitute g^-1 = J^T g^T J into the arguments.
    const Matrix6d inverse = block_j6().transpose() * g.sp.transpose() * block_j6();
    RealMatrix6 m{};
    for (int r = 0; r < 6; ++r)
        for (int c = 0; c < 6; ++c)
            m[static_cast<std::size_t>(interleave(r))][static_cast<std::size_t>(interleave(c))] =
                inverse(r, c);
    const ThreeForm pulled = pullback_linear(form, m);

    // The value part acts on C = R^2: z = x + iy maps to mu*z + nu*conj(z).
    const double a = g.gl2(0, 0);
    const double b = g.gl2(0, 1);
    const double c = g.gl2(1, 0);
    const double d = g.gl2(1, 1);
    const Complex mu(0.5 * (a + d), 0.5 * (c - b));
    const Complex nu(0.5 * (a - d), 0.5 * (b + c));
    ThreeForm out = mu * pulled;
    out += nu * pulled.conjugate();
    return out;
}

Matrix6d embed_unitary(const Matrix3cd& u, double tolerance)
{
    if ((u.adjoint() * u - Matrix3cd::Identity()).cwiseAbs().maxCoeff() > tolerance)
        throw std::invalid_argument("embed_unitary: matrix is not unitary");
    Matrix6d out;
    out.topLeftCorner<3, 3>() = u.real();
    out.topRightCorner<3, 3>() = -u.imag();
    out.bottomLeftCorner<3, 3>() = u.imag();
    out.bottomRightCorner<3, 3>() = u.real();
    return out;
}

Matrix6d lie_sp_part(LieDirection direction)
{
    const int index = direction.index;
    if (index < 0 || index >= kLieDirections) throw std::out_of_range("direction index out of range");
    Matrix6d out = Matrix6d::Zero();
    if (index >= 12) return out;

    static const std::array<std::pair<int, int>, 6> kSymmetricSlots = {
        {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
    const auto [r, c] = kSymmetricSlots[static_cast<std::size_t>(index % 6)];
    Matrix3d s = Matrix3d::Zero();
    s(r, c) = 1.0;
    s(c, r) = 1.0;
    if (index < 6) {
        out.topLeftCorner<3, 3>() = s;
        out.bottomRightCorner<3, 3>() = -s;
    } else {
        out.topRightCorner<3, 3>() = s;
        out.bottomLeftCorner<3, 3>() = s;
    }
    return out;
}

Matrix2d lie_gl2_part(LieDirection direction)
{
    const int index = direction.index;
    if (index < 0 || index >= kLieDirections) throw std::out_of_range("direction index out of range");
    Matrix2d out = Matrix2d::Zero();
    if (index == 12) {
        out(0, 0) = 1.0;
        out(1, 1) = -1.0;
    } else if (index == 13) {
        out(0, 1) = 1.0;
        out(1, 0) = 1.0;
    }
    return out;
}

GroupElement exp_direction(LieDirection direction, double t)
{
    return {Matrix6d((t * lie_sp_part(direction)).exp()),
            Matrix2d((t * lie_gl2_part(direction)).exp())};
}

GroupElement exp_tangent(const std::array<double, kLieDirections>& coefficients)
{
    Matrix6d sp = Matrix6d::Zero();
    Matrix2d gl2 = Matrix2d::Zero();
    for (int i = 0; i < kLieDirections; ++i) {
        sp += coefficients[static_cast<std::size_t>(i)] * lie_sp_part({i});
        gl2 += coefficients[static_cast<std::size_t>(i)] * lie_gl2_part({i});
    }
    return {Matrix6d(sp.exp()), Matrix2d(gl2.exp())};
}

bool is_rational_word(const GeneratorWord& word)
{
    return std::all_of(word.begin(), word.end(),
                       [](const WordFactor& f) { return f.kind == WordFactor::Kind::J || f.is_rational(); });
}

Matrix6d factor_matrix(const WordFactor& factor)
{
    Matrix6d m = Matrix6d::Identity();
    switch (factor.kind) {
    case WordFactor::Kind::J:
        return block_j6();
    case WordFactor::Kind::N:
        m.topRightCorner<3, 3>() = param_as_double(factor);
        return m;
    case WordFactor::Kind::H: {
        const Matrix3d a = param_as_double(factor);
        m.topLeftCorner<3, 3>() = a;
        m.bottomRightCorner<3, 3>() = a.transpose().inverse();
        return m;
    }
    }
    return m;
}

Matrix6d word_matrix(const GeneratorWord& word)
{
    Matrix6d product = Matrix6d::Identity();
    for (const WordFactor& factor : word) product *= factor_matrix(factor);
    return product;
}

detail::Mat<Rational> word_matrix_rational(const GeneratorWord& word)
{
    Mat<Rational> product = Mat<Rational>::identity(6);
    for (const WordFactor& factor : word) {
        Mat<Rational> m = Mat<Rational>::identity(6);
        switch (factor.kind) {
        case WordFactor::Kind::J:
            for (int i = 0; i < 3; ++i) {
                m(i, i) = 0;
                m(i + 3, i + 3) = 0;
                m(i, i + 3) = 1;
                m(i + 3, i) = -1;
            }
            break;
        case WordFactor::Kind::N: {
            if (!factor.is_rational()) throw std::invalid_argument("word has a non-rational factor");
            const auto& a = std::get<Mat<Rational>>(factor.param);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    if (a(i, j) != a(j, i)) throw std::invalid_argument("shear parameter must be symmetric");
                    m(i, j + 3) = a(i, j);
                }
            break;
        }
        case WordFactor::Kind::H: {
            if (!factor.is_rational()) throw std::invalid_argument("word has a non-rational factor");
            const auto& a = std::get<Mat<Rational>>(factor.param);
            const auto inverse_transpose = detail::inverse(a.transpose());
            if (!inverse_transpose) throw std::invalid_argument("block parameter must be invertible");
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    m(i, j) = a(i, j);
                    m(i + 3, j + 3) = (*inverse_transpose)(i, j);
                }
            break;
        }
        }
        product = product * m;
    }
    return product;
}

GeneratorWord nhj_decompose(const Matrix6d& g)
{
    if (symplectic_residual(g) > 1e-10 * std::max(1.0, g.squaredNorm() / 6.0))
        throw std::invalid_argument("matrix is not symplectic");

    const double scale = std::max(1.0, g.norm() / std::sqrt(6.0));

    // Candidate quarter rotations, cheapest words first; the rotated matrix
    // must have a well-conditioned upper-left block.
    static constexpr std::array<int, 8> kMaskOrder = {0, 7, 1, 2, 4, 3, 5, 6};
    std::array<double, 8> sigma{};
    double best = 0.0;
    for (std::size_t k = 0; k < kMaskOrder.size(); ++k) {
        const Matrix6d rotated = partial_rotation(kMaskOrder[k]) * g;
        sigma[k] = smallest_singular_value(rotated.topLeftCorner<3, 3>());
        best = std::max(best, sigma[k]);
    }
    if (best < 1e-11 * scale) throw std::runtime_error(condition_message(best, scale));

    int chosen = kMaskOrder[0];
    for (std::size_t k = 0; k < kMaskOrder.size(); ++k)
        if (sigma[k] >= 0.1 * best) {
            chosen = kMaskOrder[k];
            break;
        }

    GeneratorWord word = partial_rotation_inverse_word(chosen);
    const GeneratorWord tail = decompose_invertible_block(partial_rotation(chosen) * g);
    word.insert(word.end(), tail.begin(), tail.end());
    word = simplify_word(word);

    const double error = (word_matrix(word) - g).norm();
    if (error > 1e-10 * (1.0 + g.norm()))
        throw std::runtime_error("decomposition did not recompose: error " + std::to_string(error) +
                                 ", " + condition_message(best, scale));
    return word;
}

Rational approx_rational(double x, long long max_denominator)
{
    if (max_denominator < 1) throw std::invalid_argument("denominator bound must be positive");
    if (!std::isfinite(x)) throw std::invalid_argument("cannot approximate a non-finite value");

    const bool negative = x < 0.0;
    const double value = std::fabs(x);
    namespace mp = boost::multiprecision;
    if (value >= 9.0e15) {
        // Beyond this scale doubles have no fractional part to recover.
        Rational r{mp::cpp_int(value)};
        return negative ? Rational(-r) : r;
    }

    // Convergent recurrence h_n = a_n h_{n-1} + h_{n-2}, seeded so that the
    // first step produces floor(value)/1.
    mp::cpp_int h_prev = 0, k_prev = 1;
    mp::cpp_int h = 1, k = 0;

    Rational best = 0;
    bool have_best = false;
    double remainder = value;
    const mp::cpp_int bound(max_denominator);
    for (int iteration = 0; iteration < 64; ++iteration) {
        const double floor_part = std::floor(remainder);
        const mp::cpp_int quotient(floor_part);
        const mp::cpp_int h_next = quotient * h + h_prev;
        const mp::cpp_int k_next = quotient * k + k_prev;
        if (k_next > bound) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        best = Rational(h, k);
        have_best = true;
        const double fractional = remainder - floor_part;
        if (fractional < 5e-16) break;
        remainder = 1.0 / fractional;
        if (!std::isfinite(remainder)) break;
    }
    if (!have_best) throw std::invalid_argument("denominator bound too small for the value scale");
    return negative ? Rational(-best) : best;
}

GeneratorWord rationalize(const Matrix6d& g, double epsilon, long long max_denominator)
{
    if (epsilon <= 0.0) throw std::invalid_argument("tolerance must be positive");
    const GeneratorWord base = nhj_decompose(g);

    double best_error = std::numeric_limits<double>::infinity();
    long long bound = 16;
    while (true) {
        GeneratorWord word;
        bool usable = true;
        for (const WordFactor& factor : base) {
            if (factor.kind == WordFactor::Kind::J) {
                word.push_back(WordFactor::j());
                continue;
            }
            Mat<Rational> approx(3, 3);
            if (factor.kind == WordFactor::Kind::N) {
                const Matrix3d s = symmetrized(param_as_double(factor));
                for (int i = 0; i < 3; ++i)
                    for (int j = i; j < 3; ++j) {
                        approx(i, j) = approx_rational(s(i, j), bound);
                        approx(j, i) = approx(i, j);
                    }
                word.push_back(WordFactor::n(std::move(approx)));
            } else {
                const Matrix3d a = param_as_double(factor);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) approx(i, j) = approx_rational(a(i, j), bound);
                if (detail::det(approx) == Rational(0)) {
                    usable = false;
                    break;
                }
                word.push_back(WordFactor::h(std::move(approx)));
            }
        }
        if (usable) {
            word = simplify_word(word);
            const double error = (to_double6(word_matrix_rational(word)) - g).norm();
            best_error = std::min(best_error, error);
            if (error <= epsilon) return word;
        }
        if (bound >= max_denominator) break;
        bound = bound > max_denominator / 64 ? max_denominator : bound * 64;
    }
    std::ostringstream oss;
    oss << "tolerance " << epsilon << " unreachable with denominators up to " << max_denominator
        << " (best error " << best_error << ")";
    throw std::domain_error(oss.str());
}

} // namespace stab3
