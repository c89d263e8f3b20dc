#include "stab3/uplus.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace stab3 {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kLoopGridSize = 720;
constexpr double kSchurTieBreakTol = 1e-12;

/// Signals that a Schur iterate's constant term is too small to trust the
/// strict sign comparisons; the caller falls back to eigenvalues.
struct SchurTieBreak {};

/// All roots of the polynomial (descending coefficients, nonzero lead)
/// strictly inside the open unit disk.  One step peels off a degree:
/// with delta = |P(0)|^2 - |lead|^2 = (TP)(0),
///   * delta >= 0 forces a root on or outside the circle (|P(0)/lead| is the
///     product of the root moduli), and
///   * for delta < 0, P is stable iff TP has no roots in the closed disk,
///     which equals stability of the reversal of TP (roots map to their
///     reciprocals; the reversal's lead is delta != 0).
bool schur_stable_in_open_disk(std::vector<Complex> poly) {
    while (true) {
        const std::size_t degree = poly.size() - 1;
        if (degree == 0) {
            return true; // nonzero constant: no roots at all
        }
        const double delta = std::norm(poly.back()) - std::norm(poly.front());
        if (std::abs(delta) < kSchurTieBreakTol) {
            throw SchurTieBreak{};
        }
        if (delta > 0.0) {
            return false;
        }
        // Descending coefficients of TP = conj(P(0)) * P - lead * P*; the
        // top coefficient cancels exactly and the constant term is delta.
        std::vector<Complex> transform(degree);
        const Complex constant_conj = std::conj(poly.back());
        const Complex lead = poly.front();
        for (std::size_t j = 1; j <= degree; ++j) {
            transform[j - 1] = constant_conj * poly[j] - lead * std::conj(poly[degree - j]);
        }
        // Drop exact leading zeros (e.g. a*conj(c) == conj(b) for a cubic) so
        // the reversal does not acquire spurious roots at the origin.
        std::size_t first = 0;
        while (first + 1 < transform.size() && transform[first] == 0.0) {
            ++first;
        }
        poly.assign(transform.rbegin(), transform.rend() - static_cast<std::ptrdiff_t>(first));
    }
}

std::array<Complex, 3> monic_companion_roots(Complex a, Complex b, Complex c) {
    Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(0, 2) = -c;
    companion(1, 2) = -b;
    companion(2, 2) = -a;
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, /*computeEigenvectors=*/false);
    const auto& values = solver.eigenvalues();
    return {values(0), values(1), values(2)};
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Engine seed for sample `index` of the stream labelled `seed`; two mixing
/// rounds decorrelate consecutive indices.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    const std::uint64_t first = splitmix64(state);
    return splitmix64(state) ^ first;
}

double uniform_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Standard normal pair via Box-Muller, spelled out so the stream is fixed
/// by the engine alone rather than by a library distribution.
std::array<double, 2> gaussian_pair(std::mt19937_64& engine) {
    double u = 0.0;
    do {
        u = uniform_unit(engine);
    } while (u <= 0.0);
    const double v = uniform_unit(engine);
    const double radius = std::sqrt(-2.0 * std::log(u));
    return {radius * std::cos(2.0 * kPi * v), radius * std::sin(2.0 * kPi * v)};
}

/// Values of theta |-> omega(exp(i*theta) * w) on the uniform grid, from the
/// graded pieces: a (p,q)-component scales by exp(i*(p-q)*theta).
std::array<Complex, kLoopGridSize> loop_values(const std::array<Complex, 4>& cubic,
                                               int* min_index) {
    std::array<Complex, kLoopGridSize> values{};
    int best = 0;
    double best_abs = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kLoopGridSize; ++k) {
        const double theta = 2.0 * kPi * k / kLoopGridSize;
        const Complex rotation = std::polar(1.0, theta);
        values[static_cast<std::size_t>(k)] =
            cubic[0] * std::polar(1.0, 3.0 * theta) + cubic[1] * rotation +
            cubic[2] * std::conj(rotation) + cubic[3] * std::polar(1.0, -3.0 * theta);
        const double abs_value = std::abs(values[static_cast<std::size_t>(k)]);
        if (abs_value < best_abs) {
            best_abs = abs_value;
            best = k;
        }
    }
    if (min_index != nullptr) {
        *min_index = best;
    }
    return values;
}

/// Winding of a closed grid loop by summed principal argument increments.
int winding_from_values(const std::array<Complex, kLoopGridSize>& values) {
    double total = 0.0;
    for (int k = 0; k < kLoopGridSize; ++k) {
        const Complex current = values[static_cast<std::size_t>(k)];
        const Complex next = values[static_cast<std::size_t>((k + 1) % kLoopGridSize)];
        total += std::arg(next / current);
    }
    const int winding = static_cast<int>(std::lround(total / (2.0 * kPi)));
    if (winding < -3 || winding > 3 || winding % 2 == 0) {
        throw std::runtime_error("winding_number: loop winding " + std::to_string(winding) +
                                 " is outside the odd range {-3,...,3}");
    }
    return winding;
}

/// Graded evaluations (c3, c2, c1, c0) on an arbitrary trivector; equals the
/// Lagrangian cubic when the trivector is a unitary frame wedge.
std::array<Complex, 4> graded_values(const ThreeForm& omega, const Trivector& w) {
    const TypeSplit split = type_split(omega);
    return {evaluate(split.p30, w), evaluate(split.p21, w), evaluate(split.p12, w),
            evaluate(split.p03, w)};
}

} // namespace

bool roots_in_open_disk(const Cubic& p) {
    if (p.c3 == 0.0) {
        throw std::invalid_argument("roots_in_open_disk: leading coefficient is zero");
    }
    const Complex a = p.c2 / p.c3;
    const Complex b = p.c1 / p.c3;
    const Complex c = p.c0 / p.c3;
    try {
        return schur_stable_in_open_disk({Complex(1.0), a, b, c});
    } catch (const SchurTieBreak&) {
        const std::array<Complex, 3> roots = monic_companion_roots(a, b, c);
        return std::all_of(roots.begin(), roots.end(),
                           [](Complex root) { return std::abs(root) < 1.0; });
    }
}

bool polyunstable_hypothesis(const Cubic& p) {
    if (p.c3 == 0.0) {
        return false;
    }
    const Complex a = p.c2 / p.c3;
    const Complex b = p.c1 / p.c3;
    const Complex c = p.c0 / p.c3;
    const double margin = 1.0 - std::norm(c);
    return margin > 0.0 && margin <= std::abs(a * std::conj(c) - std::conj(b));
}

std::array<Complex, 3> cubic_roots(const Cubic& p) {
    if (p.c3 == 0.0) {
        throw std::invalid_argument("cubic_roots: leading coefficient is zero");
    }
    return monic_companion_roots(p.c2 / p.c3, p.c1 / p.c3, p.c0 / p.c3);
}

LagrangianFrame coordinate_frame(int mask) {
    if (mask < 0 || mask > 7) {
        throw std::invalid_argument("coordinate_frame: mask must be in 0..7");
    }
    LagrangianFrame frame{};
    for (int j = 0; j < 3; ++j) {
        const Complex unit = (mask >> j) & 1 ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
        frame.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = unit;
    }
    return frame;
}

LagrangianFrame haar_lagrangian_frame(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 engine(stream_key(seed, index));
    while (true) {
        std::array<std::array<Complex, 3>, 3> columns{};
        for (auto& column : columns) {
            for (auto& entry : column) {
                const std::array<double, 2> pair = gaussian_pair(engine);
                entry = Complex(pair[0], pair[1]);
            }
        }
        // Modified Gram-Schmidt with positive diagonal normalization turns a
        // complex Gaussian matrix into a Haar-distributed unitary.
        bool degenerate = false;
        LagrangianFrame frame{};
        for (int j = 0; j < 3 && !degenerate; ++j) {
            auto& column = columns[static_cast<std::size_t>(j)];
            for (int k = 0; k < j; ++k) {
                const auto& previous = frame.columns[static_cast<std::size_t>(k)];
                Complex overlap = 0.0;
                for (int i = 0; i < 3; ++i) {
                    overlap += std::conj(previous[static_cast<std::size_t>(i)]) *
                               column[static_cast<std::size_t>(i)];
                }
                for (int i = 0; i < 3; ++i) {
                    column[static_cast<std::size_t>(i)] -=
                        overlap * previous[static_cast<std::size_t>(i)];
                }
            }
            double norm_squared = 0.0;
            for (const Complex& entry : column) {
                norm_squared += std::norm(entry);
            }
            const double norm = std::sqrt(norm_squared);
            if (norm < 1e-8) {
                degenerate = true; // essentially impossible; redraw the matrix
                break;
            }
            for (int i = 0; i < 3; ++i) {
                frame.columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                    column[static_cast<std::size_t>(i)] / norm;
            }
        }
        if (!degenerate) {
            return frame;
        }
    }
}

MembershipVerdict membership_test(const ThreeForm& omega, int n_samples, std::uint64_t seed,
                                  double tol) {
    if (n_samples < 0) {
        throw std::invalid_argument("membership_test: n_samples must be nonnegative");
    }
    if (!(primitivity_residual(omega) < tol)) {
        throw std::invalid_argument("membership_test: form is not primitive within tolerance");
    }

    MembershipVerdict verdict;
    verdict.min_abs_value = std::numeric_limits<double>::infinity();

    const auto consider = [&](const Trivector& frame) {
        const double abs_value = std::abs(evaluate(omega, frame));
        verdict.min_abs_value = std::min(verdict.min_abs_value, abs_value);
        if (abs_value < tol) {
            verdict.status = MembershipStatus::RejectedWitness;
            verdict.witness = MembershipWitness{frame, abs_value};
            return true;
        }
        return false;
    };

    // Deterministic coordinate frames: each factor contributes dx_i or dy_i.
    for (int mask = 0; mask < 8; ++mask) {
        if (consider(Trivector::from_frame(coordinate_frame(mask)))) {
            return verdict;
        }
    }

    // Loop of rotated x-frames.  The grid values come from the graded pieces
    // of the cubic, which is exact for the frame wedge.
    const Trivector x_frame = Trivector::from_frame(coordinate_frame(0));
    const std::array<Complex, 4> cubic_coeffs = lagrangian_cubic(omega, x_frame);
    int min_index = 0;
    const std::array<Complex, kLoopGridSize> loop = loop_values(cubic_coeffs, &min_index);
    const double loop_min = std::abs(loop[static_cast<std::size_t>(min_index)]);
    verdict.min_abs_value = std::min(verdict.min_abs_value, loop_min);
    const double min_theta = 2.0 * kPi * min_index / kLoopGridSize;
    if (loop_min < tol) {
        const Trivector witness_frame =
            Trivector::from_frame(rotate(coordinate_frame(0), min_theta));
        verdict.status = MembershipStatus::RejectedWitness;
        verdict.witness = MembershipWitness{witness_frame, loop_min};
        return verdict;
    }

    // With a +3 winding certificate, all roots of the attached cubic must lie
    // inside the open unit disk; a disagreement means a root sits numerically
    // on the unit circle, so the loop frame nearest the dip is the witness.
    const int winding = winding_from_values(loop);
    const Cubic cubic = Cubic::from_coefficients(cubic_coeffs);
    if (winding == 3 && cubic.c3 != 0.0 && !roots_in_open_disk(cubic)) {
        const Trivector witness_frame =
            Trivector::from_frame(rotate(coordinate_frame(0), min_theta));
        verdict.status = MembershipStatus::RejectedWitness;
        verdict.witness = MembershipWitness{witness_frame, loop_min};
        return verdict;
    }

    // Haar-random frames with per-sample streams derived from (seed, index).
    for (int index = 0; index < n_samples; ++index) {
        const Trivector sample = Trivector::from_frame(
            haar_lagrangian_frame(seed, static_cast<std::uint64_t>(index)));
        if (consider(sample)) {
            verdict.samples_used = index + 1;
            return verdict;
        }
    }
    verdict.samples_used = n_samples;
    verdict.status = MembershipStatus::PassedSamples;
    return verdict;
}

int winding_number(const ThreeForm& omega, const Trivector& w, double tol) {
    int min_index = 0;
    const std::array<Complex, kLoopGridSize> loop = loop_values(graded_values(omega, w), &min_index);
    if (!(std::abs(loop[static_cast<std::size_t>(min_index)]) > tol)) {
        throw std::invalid_argument("winding_number: loop passes too close to zero");
    }
    return winding_from_values(loop);
}

CoveringCoords covering_coords(const ThreeForm& omega, double tol) {
    const Trivector x_frame = Trivector::from_frame(coordinate_frame(0));
    const Complex value = evaluate(omega, x_frame);
    if (!(std::abs(value) >= tol)) {
        throw std::invalid_argument(
            "covering_coords: form vanishes on the reference Lagrangian");
    }
    double theta = std::arg(value);
    if (theta < 0.0) {
        theta += 2.0 * kPi;
    }
    if (theta >= 2.0 * kPi) {
        theta = 0.0; // fold the rounding edge back to the base point
    }
    CoveringCoords coords;
    coords.theta = theta;
    coords.base = std::polar(1.0, -theta) * omega;
    return coords;
}

} // namespace stab3
