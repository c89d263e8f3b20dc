#include "stab3/normal_form.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace stab3 {
namespace {

constexpr double kInitialStep = 0.1;
constexpr double kBacktrackFactor = 0.5;
constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-16;
constexpr double kOffTypeGate = 1e-8;          // entry gate of diagonalize_12_part
constexpr double kOffDiagonalResidual = 1e-9;  // exit guarantee of the congruence
constexpr double kDiagonalMonomialGate = 1e-8; // entry gate of phase_and_sort

/// Derivative at t = 0 of the pullback family  t -> form o exp(t * tangent)
/// with a real tangent matrix in block coordinates: each generator is
/// replaced, one argument slot at a time, by its composition with the matrix.
ThreeForm substitution_derivative(const ThreeForm& form, const Matrix6d& tangent)
{
    // images[g][h] = coefficient of generator h in (generator g) o tangent,
    // obtained from the values of dz_k o tangent on dx_j and dy_j; the
    // barred rows are componentwise conjugates because the matrix is real.
    const Complex i_unit(0.0, 1.0);
    std::array<std::array<Complex, kNumGenerators>, kNumGenerators> images{};
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) {
            const Complex on_x(tangent(k, j), tangent(k + 3, j));
            const Complex on_y(tangent(k, j + 3), tangent(k + 3, j + 3));
            images[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] =
                0.5 * (on_x - i_unit * on_y);
            images[static_cast<std::size_t>(k)][static_cast<std::size_t>(j + 3)] =
                0.5 * (on_x + i_unit * on_y);
            images[static_cast<std::size_t>(k + 3)][static_cast<std::size_t>(j)] =
                std::conj(images[static_cast<std::size_t>(k)][static_cast<std::size_t>(j + 3)]);
            images[static_cast<std::size_t>(k + 3)][static_cast<std::size_t>(j + 3)] =
                std::conj(images[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
        }
    }

    ThreeForm out;
    for (int index = 0; index < kNumTriples; ++index) {
        const Complex weight = form[index];
        if (weight == Complex{}) continue;
        const std::array<int, 3> gens = triple_at(index);
        for (int slot = 0; slot < 3; ++slot) {
            const auto& row = images[static_cast<std::size_t>(gens[static_cast<std::size_t>(slot)])];
            for (int target = 0; target < kNumGenerators; ++target) {
                const Complex entry = row[static_cast<std::size_t>(target)];
                if (entry == Complex{}) continue;
                std::array<int, 3> replaced = gens;
                replaced[static_cast<std::size_t>(slot)] = target;
                out.add_term(replaced[0], replaced[1], replaced[2], weight * entry);
            }
        }
    }
    return out;
}

/// Trial move along -gradient with the given step.  The sp slots enter with
/// the opposite sign because the left action substitutes the inverse into the
/// arguments, while the gl2 slots act on the values directly; with this
/// choice d/ds |act(move(s), form)|^2 = -2 |gradient|^2 at s = 0.
GroupElement descent_step(const std::array<double, kLieDirections>& gradient, double step)
{
    std::array<double, kLieDirections> tangent{};
    for (int a = 0; a < 12; ++a) tangent[static_cast<std::size_t>(a)] = step * gradient[static_cast<std::size_t>(a)];
    tangent[12] = -step * gradient[12];
    tangent[13] = -step * gradient[13];
    return exp_tangent(tangent);
}

double euclidean_norm(const std::array<double, kLieDirections>& v)
{
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

/// Symmetric 3x3 block of the primitive (1,2) chart: diagonal = gamma slots,
/// off-diagonal = gamma pair slots (ordered {12, 13, 23}).
Matrix3cd block_12(const PrimitiveCoefficients& coeffs)
{
    Matrix3cd m;
    m << coeffs.gamma[0], coeffs.gamma_pair[0], coeffs.gamma_pair[1], //
        coeffs.gamma_pair[0], coeffs.gamma[1], coeffs.gamma_pair[2],  //
        coeffs.gamma_pair[1], coeffs.gamma_pair[2], coeffs.gamma[2];
    return m;
}

int permutation_parity(const std::array<int, 3>& order)
{
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (order[static_cast<std::size_t>(i)] > order[static_cast<std::size_t>(j)]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

} // namespace

ThreeForm symmetric_direction_derivative(const ThreeForm& form, LieDirection direction)
{
    if (direction.index < 0 || direction.index >= kLieDirections)
        throw std::out_of_range("symmetric_direction_derivative: direction index out of range");
    if (direction.index < 12) return substitution_derivative(form, lie_sp_part(direction));
    if (direction.index == 12) return form.conjugate();
    return Complex(0.0, 1.0) * form.conjugate();
}

std::array<double, kLieDirections> moment_gradient(const ThreeForm& form)
{
    std::array<double, kLieDirections> out{};
    for (int a = 0; a < kLieDirections; ++a)
        out[static_cast<std::size_t>(a)] =
            inner_product(form, symmetric_direction_derivative(form, {a})).real();
    return out;
}

DescentResult minimize_norm(const ThreeForm& form, double tolerance, int max_iterations,
                            std::vector<double>* objective_trace)
{
    if (!(tolerance > 0.0)) throw std::invalid_argument("minimize_norm: tolerance must be positive");
    if (max_iterations < 0) throw std::invalid_argument("minimize_norm: negative iteration limit");

    DescentResult result{form, GroupElement::identity(), 0, 0.0};
    double objective = result.form.norm_squared();
    if (objective_trace) objective_trace->push_back(objective);

    for (int iteration = 0; iteration <= max_iterations; ++iteration) {
        const std::array<double, kLieDirections> gradient = moment_gradient(result.form);
        result.gradient_norm = euclidean_norm(gradient);
        result.iterations = iteration;
        if (result.gradient_norm < tolerance) return result;
        if (iteration == max_iterations) break;

        double gradient_sq = result.gradient_norm * result.gradient_norm;

        // Backtracking line search with a floating-point slack: near the
        // critical point the true decrease ~ step * |gradient|^2 falls below
        // the representable resolution of the objective while plain descent
        // steps keep contracting the off-type coefficients, so noise-level
        // differences must not reject the step.
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * objective;
        double step = kInitialStep;
        while (true) {
            const GroupElement move = descent_step(gradient, step);
            const ThreeForm candidate = act(move, result.form);
            const double candidate_objective = candidate.norm_squared();
            const bool sufficient =
                candidate_objective <= objective - 2.0 * kArmijoSlope * step * gradient_sq + slack;
            if (sufficient) {
                result.form = candidate;
                result.group = move * result.group;
                objective = candidate_objective;
                if (objective_trace) objective_trace->push_back(objective);
                break;
            }
            if (step < kMinStep) {
                std::ostringstream message;
                message << "minimize_norm: line search stalled at gradient norm "
                        << result.gradient_norm;
                throw std::runtime_error(message.str());
            }
            step *= kBacktrackFactor;
        }
    }

    std::ostringstream message;
    message << "minimize_norm: iteration limit " << max_iterations
            << " reached at gradient norm " << result.gradient_norm
            << " (the infimum may not be attained on this orbit)";
    throw std::runtime_error(message.str());
}

CongruenceResult diagonalize_12_part(const ThreeForm& form)
{
    const TypeSplit split = type_split(form);
    const double off_type = split.p21.norm() + split.p03.norm();
    if (!(off_type < kOffTypeGate))
        throw std::invalid_argument(
            "diagonalize_12_part: the (2,1) and (0,3) parts must vanish; run minimize_norm first");

    const Matrix3cd m = block_12(primitive_coefficients(form));

    // Autonne-Takagi through the real symmetric doubling K = [[A, B], [B, -A]]
    // with A = Re M, B = Im M: if K (x; y) = sigma (x; y) then
    // M conj(u) = sigma u for u = x + iy, so three eigenvectors of the
    // nonnegative half-spectrum assemble a unitary U with M = U diag(sigma) U^T.
    Matrix6d doubled;
    doubled.topLeftCorner<3, 3>() = m.real();
    doubled.topRightCorner<3, 3>() = m.imag();
    doubled.bottomLeftCorner<3, 3>() = m.imag();
    doubled.bottomRightCorner<3, 3>() = -m.real();
    const Eigen::SelfAdjointEigenSolver<Matrix6d> solver(doubled);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("diagonalize_12_part: eigenvalue decomposition failed");

    // The spectrum comes in pairs {sigma, -sigma}, and multiplying u by i
    // swaps the halves: (x; y) -> (-y; x).  Inside the sigma = 0 kernel the
    // solver may return both members of such a pair, so candidates are
    // filtered against the quarter-turns of the vectors already accepted.
    using Vector6d = Eigen::Matrix<double, 6, 1>;
    const auto quarter_turn = [](const Vector6d& v) {
        Vector6d turned;
        turned.head<3>() = -v.tail<3>();
        turned.tail<3>() = v.head<3>();
        return turned;
    };
    Matrix3cd unitary;
    std::array<Vector6d, 3> picked;
    int found = 0;
    for (int column = 5; column >= 0 && found < 3; --column) {
        Vector6d candidate = solver.eigenvectors().col(column);
        for (int p = 0; p < found; ++p) {
            const Vector6d& prev = picked[static_cast<std::size_t>(p)];
            candidate -= prev.dot(candidate) * prev;
            const Vector6d turned = quarter_turn(prev);
            candidate -= turned.dot(candidate) * turned;
        }
        if (candidate.norm() < 0.5) continue;
        candidate.normalize();
        picked[static_cast<std::size_t>(found)] = candidate;
        for (int i = 0; i < 3; ++i) unitary(i, found) = Complex(candidate(i), candidate(i + 3));
        ++found;
    }
    if (found != 3) throw std::runtime_error("diagonalize_12_part: could not assemble a Takagi factor");

    // With M = U Sigma U^T the embedded action of W = conj(det U) U^T turns
    // the block into det(W) conj(W) M conj(W)^T = Sigma and multiplies the
    // leading (3,0) coefficient by a phase only.
    const Complex det = unitary.determinant();
    const Matrix3cd congruence = std::conj(det) * unitary.transpose();

    CongruenceResult result;
    result.group = GroupElement::from_sp(embed_unitary(congruence));
    result.form = act(result.group, form);

    const PrimitiveCoefficients after = primitive_coefficients(result.form);
    for (const Complex& pair : after.gamma_pair)
        if (std::abs(pair) > kOffDiagonalResidual)
            throw std::runtime_error("diagonalize_12_part: off-diagonal residual exceeds tolerance");
    return result;
}

NormalFormResult phase_and_sort(const ThreeForm& form)
{
    const double scale = std::max(1.0, form.norm());
    const std::array<int, 4> kept = {triple_index(0, 1, 2), triple_index(0, 4, 5),
                                     triple_index(1, 3, 5), triple_index(2, 3, 4)};
    for (int index = 0; index < kNumTriples; ++index) {
        if (std::find(kept.begin(), kept.end(), index) != kept.end()) continue;
        if (std::abs(form[index]) > kDiagonalMonomialGate * scale)
            throw std::invalid_argument(
                "phase_and_sort: form has support outside the four diagonal monomials");
    }

    const PrimitiveCoefficients coeffs = primitive_coefficients(form);
    if (std::abs(coeffs.alpha) < 1e-12 * scale)
        throw std::invalid_argument(
            "phase_and_sort: the leading (3,0) coefficient vanishes, so the form cannot be "
            "scaled to the normal shape");

    // Positive value dilation making the leading coefficient unit-modulus.
    const GroupElement rescale =
        GroupElement::from_gl2(Matrix2d::Identity() / std::abs(coeffs.alpha));

    // Coordinate phases diag(e^{i phi_k}) together with a value rotation
    // e^{i theta} multiply the diagonal coefficients by phase factors with
    // exponents
    //   alpha: theta - (phi1 + phi2 + phi3),   c_k: theta + phi_sum - 2 phi_k,
    // an invertible integer weight system; it is solved in closed form for
    // arguments that cancel the existing ones.  A vanishing c_k constrains
    // nothing and its argument is replaced by the leading one to keep the
    // system determinate.
    const double arg_alpha = std::arg(coeffs.alpha);
    std::array<double, 3> half_difference{};
    for (int k = 0; k < 3; ++k) {
        const Complex c = coeffs.gamma[static_cast<std::size_t>(k)];
        const double arg_c = std::abs(c) < 1e-14 * scale ? arg_alpha : std::arg(c);
        half_difference[static_cast<std::size_t>(k)] = 0.5 * (arg_alpha - arg_c);
    }
    const double phi_sum = 0.5 * (half_difference[0] + half_difference[1] + half_difference[2]);
    const double theta = phi_sum - arg_alpha;
    Matrix3cd phases = Matrix3cd::Zero();
    for (int k = 0; k < 3; ++k)
        phases(k, k) = std::polar(1.0, phi_sum - half_difference[static_cast<std::size_t>(k)]);
    GroupElement phase_move;
    phase_move.sp = embed_unitary(phases);
    phase_move.gl2 << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);

    const ThreeForm aligned = act(phase_move, act(rescale, form));
    const PrimitiveCoefficients cleaned = primitive_coefficients(aligned);

    // Ascending sort through a coordinate permutation; an odd permutation is
    // negated so the determinant stays one, which leaves the diagonal
    // coefficients and the leading coefficient untouched.
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&cleaned](int a, int b) {
        return cleaned.gamma[static_cast<std::size_t>(a)].real() <
               cleaned.gamma[static_cast<std::size_t>(b)].real();
    });
    Matrix3cd permutation = Matrix3cd::Zero();
    for (int a = 0; a < 3; ++a) permutation(a, order[static_cast<std::size_t>(a)]) = 1.0;
    if (permutation_parity(order) < 0) permutation = -permutation;
    const GroupElement permute = GroupElement::from_sp(embed_unitary(permutation));

    const ThreeForm final_form = act(permute, aligned);
    const PrimitiveCoefficients final_coeffs = primitive_coefficients(final_form);

    NormalFormResult result;
    for (int k = 0; k < 3; ++k)
        result.gammas[static_cast<std::size_t>(k)] =
            std::max(final_coeffs.gamma[static_cast<std::size_t>(k)].real(), 0.0);
    result.group = permute * phase_move * rescale;
    const TypeSplit split = type_split(final_form);
    result.off_type_norm = split.p21.norm() + split.p03.norm();
    result.gradient_norm = euclidean_norm(moment_gradient(final_form));
    result.reconstruction_error = (final_form - normal_form_representative(result.gammas)).norm();
    return result;
}

NormalFormResult orbit_invariants(const ThreeForm& form)
{
    const DescentResult descent = minimize_norm(form);
    const CongruenceResult congruence = diagonalize_12_part(descent.form);
    NormalFormResult result = phase_and_sort(congruence.form);
    result.group = result.group * congruence.group * descent.group;

    const double total = result.gammas[0] + result.gammas[1] + result.gammas[2];
    if (!(total < 1.0)) {
        std::ostringstream message;
        message << "orbit_invariants: invariants sum to " << total
                << " >= 1, so the representative violates the strict evaluation bound on "
                   "unitary frames";
        throw std::runtime_error(message.str());
    }
    result.reconstruction_error =
        (act(result.group, form) - normal_form_representative(result.gammas)).norm();
    return result;
}

ThreeForm normal_form_representative(const std::array<double, 3>& gammas)
{
    ThreeForm out = ThreeForm::monomial(0, 1, 2);
    out += ThreeForm::monomial(0, 4, 5, gammas[0]);
    out += ThreeForm::monomial(3, 1, 5, gammas[1]);
    out += ThreeForm::monomial(3, 4, 2, gammas[2]);
    return out;
}

} // namespace stab3
