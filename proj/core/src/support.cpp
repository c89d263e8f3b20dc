#include "stab3/support.hpp"

#include "stab3/product_charge.hpp"

#include <Eigen/Dense>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace stab3 {

namespace {

using detail::Mat;

// Gram matrix of the negated Euler square on the surface basis.
const Mat<Rational>& surface_square_gram()
{
    static const Mat<Rational> gram = [] {
        const Mat<CRat>& chi = euler_matrix(Ambient::E2);
        Mat<Rational> out(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                if (!(chi(i, j).im == Rational(0)))
                    throw std::logic_error("surface pairing has an imaginary part");
                out(i, j) = -chi(i, j).re;
            }
        return out;
    }();
    return gram;
}

std::vector<Rational> real_coords(const LatticeVec& v, const char* where)
{
    std::vector<Rational> out(static_cast<size_t>(v.size()));
    for (int i = 0; i < v.size(); ++i) {
        if (!(v[i].im == Rational(0)))
            throw std::invalid_argument(std::string(where) + ": coordinates must be real");
        out[static_cast<size_t>(i)] = v[i].re;
    }
    return out;
}

// Linear data of one charge transform on the basis: the four asymptotic
// coefficient rows and the twisted surface projection.
struct TransformData {
    std::array<std::vector<Rational>, 4> rows;  // a, b, c, d
    Mat<Rational> projection;                   // 5 x 14
};

const TransformData& transform_data(int transform)
{
    static const std::array<TransformData, 6> all = [] {
        std::array<TransformData, 6> out;
        for (int t = 1; t <= kNumTransforms; ++t) {
            TransformData& data = out[static_cast<size_t>(t - 1)];
            for (auto& row : data.rows) row.assign(14, Rational(0));
            data.projection = Mat<Rational>(5, 14);
            for (int j = 0; j < 14; ++j) {
                LatticeVec e(Ambient::E3);
                e[j] = CRat(1);
                const AsymCoeffs k = asymptotic_coeffs(e, t, Rational(1));
                data.rows[0][static_cast<size_t>(j)] = k.a;
                data.rows[1][static_cast<size_t>(j)] = k.b;
                data.rows[2][static_cast<size_t>(j)] = k.c;
                data.rows[3][static_cast<size_t>(j)] = k.d;
                const LatticeVec v1 = project_to_surface(apply(charge_transform(t), e)).v1;
                for (int i = 0; i < 5; ++i) {
                    if (!(v1[i].im == Rational(0)))
                        throw std::logic_error("surface projection has an imaginary part");
                    data.projection(i, j) = v1[i].re;
                }
            }
        }
        return out;
    }();
    return all[static_cast<size_t>(transform - 1)];
}

// dst += scale * (x_i y_j + x_j y_i) / 2
void add_symmetric_outer(Mat<Rational>& dst, const std::vector<Rational>& x,
                         const std::vector<Rational>& y, const Rational& scale)
{
    const Rational half = scale / 2;
    for (int i = 0; i < dst.rows; ++i)
        for (int j = 0; j < dst.cols; ++j)
            dst(i, j) += half * (x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] +
                                 x[static_cast<size_t>(j)] * y[static_cast<size_t>(i)]);
}

void add_scaled(Mat<Rational>& dst, const Mat<Rational>& src, const Rational& scale)
{
    for (size_t i = 0; i < dst.a.size(); ++i) dst.a[i] += scale * src.a[i];
}

// Basis of the exact solution space of m x = 0, one column per free variable.
Mat<Rational> nullspace(Mat<Rational> m)
{
    const int cols = m.cols;
    const std::vector<int> pivots = detail::rref(m);
    std::vector<int> free_cols;
    for (int c = 0; c < cols; ++c)
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free_cols.push_back(c);
    Mat<Rational> out(cols, static_cast<int>(free_cols.size()));
    for (int k = 0; k < out.cols; ++k) {
        const int f = free_cols[static_cast<size_t>(k)];
        out(f, k) = Rational(1);
        for (size_t r = 0; r < pivots.size(); ++r) out(pivots[r], k) = -m(static_cast<int>(r), f);
    }
    return out;
}

std::optional<Rational> exact_sqrt(const Rational& x)
{
    using boost::multiprecision::cpp_int;
    if (x < Rational(0)) return std::nullopt;
    const cpp_int num = boost::multiprecision::numerator(x);
    const cpp_int den = boost::multiprecision::denominator(x);
    const cpp_int sn = boost::multiprecision::sqrt(num);
    const cpp_int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

Eigen::MatrixXd to_double_matrix(const Mat<Rational>& m)
{
    Eigen::MatrixXd out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(i, j) = to_double(m(i, j));
    return out;
}

// Shared 3x3 block of the coefficient-chart gram: after the kernel relations
// eliminate the trailing coefficient pairs, the form splits into identical
// blocks on (a1, a2, a3) and (b1, b2, b3) given by
//   -2(1-c) sum_i w_i x_i^2 - 4 mu (1-c) (sum d_i x_i)(sum w_i x_i)
//   + 4 c mu^2 (sum w_i) (sum d_i x_i)^2,     mu = lambda / (1 - lambda sum d_i).
Mat<Rational> chart_block(const CoeffFormParams& p)
{
    const Rational sum_d = p.damp_alpha + p.damp_beta + p.damp_gamma;
    const Rational denom = Rational(1) - p.lambda * sum_d;
    if (denom == Rational(0))
        throw std::invalid_argument("chart form: scaled damping sums to one");
    const Rational mu = p.lambda / denom;
    const Rational nu = Rational(1) - p.bound_c;
    const std::array<Rational, 3> w{p.weight_alpha, p.weight_beta, p.weight_gamma};
    const std::array<Rational, 3> d{p.damp_alpha, p.damp_beta, p.damp_gamma};
    const Rational sum_w = w[0] + w[1] + w[2];
    const Rational cross = Rational(-2) * mu * nu;
    const Rational square = Rational(4) * p.bound_c * mu * mu * sum_w;
    Mat<Rational> gram(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            gram(i, j) = cross * (d[static_cast<size_t>(i)] * w[static_cast<size_t>(j)] +
                                  w[static_cast<size_t>(i)] * d[static_cast<size_t>(j)]) +
                         square * d[static_cast<size_t>(i)] * d[static_cast<size_t>(j)];
            if (i == j) gram(i, i) += Rational(-2) * nu * w[static_cast<size_t>(i)];
        }
    return gram;
}

void validate_chart_params(const CoeffFormParams& p, const char* where)
{
    if (!(p.weight_alpha > Rational(0)) || !(p.weight_beta > Rational(0)) ||
        !(p.weight_gamma > Rational(0)))
        throw std::invalid_argument(std::string(where) + ": weights must be positive");
    if (!(p.bound_c > Rational(0)))
        throw std::invalid_argument(std::string(where) + ": bound must be positive");
}

void append_chart_params(QuadForm& form, const CoeffFormParams& p)
{
    form.params.emplace_back("weight_alpha", p.weight_alpha);
    form.params.emplace_back("weight_beta", p.weight_beta);
    form.params.emplace_back("weight_gamma", p.weight_gamma);
    form.params.emplace_back("damp_alpha", p.damp_alpha);
    form.params.emplace_back("damp_beta", p.damp_beta);
    form.params.emplace_back("damp_gamma", p.damp_gamma);
    form.params.emplace_back("bound_c", p.bound_c);
    form.params.emplace_back("lambda", p.lambda);
}

double block_max_eigenvalue(const CoeffFormParams& p)
{
    const Mat<Rational> block = chart_block(p);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = to_double(block(i, j));
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(m);
    return solver.eigenvalues().maxCoeff();
}

// Replacement weights and shared bound for a damping triple that may touch
// the boundary of the cone: vanished parameters get a sixth of the slack
// each, and the bound is half of what remains afterwards.
struct CaseParameters {
    std::array<Rational, 3> weights;
    Rational bound;
};

CaseParameters case_parameters(const std::array<Rational, 3>& damps)
{
    const Rational sum = damps[0] + damps[1] + damps[2];
    const Rational replacement = (Rational(1) - sum) / 6;
    CaseParameters out;
    Rational total = sum;
    for (int i = 0; i < 3; ++i) {
        if (damps[static_cast<size_t>(i)] > Rational(0)) {
            out.weights[static_cast<size_t>(i)] = damps[static_cast<size_t>(i)];
        } else {
            out.weights[static_cast<size_t>(i)] = replacement;
            total += replacement;
        }
    }
    out.bound = (Rational(1) - total) / 2;
    return out;
}

std::vector<Rational> grid_axis(const GridSpec& spec)
{
    std::vector<Rational> values;
    if (spec.axis_points == 1) {
        values.push_back(spec.axis_min);
        return values;
    }
    const Rational step = (spec.axis_max - spec.axis_min) / (spec.axis_points - 1);
    for (int k = 0; k < spec.axis_points; ++k) values.push_back(spec.axis_min + step * k);
    return values;
}

}  // namespace

Rational evaluate(const QuadForm& form, std::span<const Rational> point)
{
    if (static_cast<int>(point.size()) != form.gram.cols)
        throw std::invalid_argument("evaluate: point dimension does not match the form");
    Rational total(0);
    for (int i = 0; i < form.gram.rows; ++i)
        for (int j = 0; j < form.gram.cols; ++j)
            total += form.gram(i, j) * point[static_cast<size_t>(i)] * point[static_cast<size_t>(j)];
    return total;
}

Rational surface_quadratic(const LatticeVec& vec)
{
    if (vec.ambient != Ambient::E2)
        throw std::invalid_argument("surface_quadratic: expected a surface vector");
    const std::vector<Rational> coords = real_coords(vec, "surface_quadratic");
    const Mat<Rational>& gram = surface_square_gram();
    Rational total(0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            total += gram(i, j) * coords[static_cast<size_t>(i)] * coords[static_cast<size_t>(j)];
    return total;
}

Rational surface_support_constant()
{
    static const Rational constant = [] {
        const Mat<Rational>& q = surface_square_gram();

        // Real and imaginary rows of the polarization charge on the basis.
        const LatticeVec pol = surface_exp_polarization(Rational(1));
        Mat<Rational> charge_rows(2, 5);
        for (int j = 0; j < 5; ++j) {
            LatticeVec e(Ambient::E2);
            e[j] = CRat(1);
            const CRat value = euler_pairing(pol, e);
            charge_rows(0, j) = value.re;
            charge_rows(1, j) = value.im;
        }
        if (detail::rank(charge_rows) != 2)
            throw std::logic_error("support constant: polarization charge is degenerate");

        // Split off the charge kernel, on which the square must be negative
        // definite for the constant to exist.
        const Mat<Rational> kernel = nullspace(charge_rows);
        const Mat<Rational> kernel_square = kernel.transpose() * q * kernel;
        for (int k = 1; k <= kernel_square.rows; ++k) {
            Mat<Rational> leading(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) leading(i, j) = -kernel_square(i, j);
            if (!(detail::det(leading) > Rational(0)))
                throw std::logic_error("support constant: square is not negative on the kernel");
        }

        // Complement spanned by the charge rows themselves; reduce the pencil
        // condition c * |charge|^2 - square >= 0 to two dimensions.
        Mat<Rational> complement(5, 2);
        for (int j = 0; j < 5; ++j) {
            complement(j, 0) = charge_rows(0, j);
            complement(j, 1) = charge_rows(1, j);
        }
        Mat<Rational> charge_gram(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                charge_gram(i, j) = charge_rows(0, i) * charge_rows(0, j) +
                                    charge_rows(1, i) * charge_rows(1, j);
        const Mat<Rational> h = complement.transpose() * charge_gram * complement;
        const Mat<Rational> mixed = kernel.transpose() * q * complement;  // 3 x 2
        const auto corrected = detail::solve(kernel_square, mixed);
        if (!corrected) throw std::logic_error("support constant: kernel block is singular");
        const Mat<Rational> v = complement.transpose() * q * complement -
                                mixed.transpose() * (*corrected);

        // Largest root of det(c * h - v) = 0 with h positive definite.
        const Rational a = detail::det(h);
        if (!(h(0, 0) > Rational(0)) || !(a > Rational(0)))
            throw std::logic_error("support constant: complement block is not positive");
        const Rational b =
            h(0, 0) * v(1, 1) + h(1, 1) * v(0, 0) - h(0, 1) * v(1, 0) - h(1, 0) * v(0, 1);
        const Rational c = detail::det(v);
        const std::optional<Rational> root = exact_sqrt(b * b - Rational(4) * a * c);
        if (!root)
            throw std::logic_error("support constant: pencil root is not rational");
        const Rational bound = (b + *root) / (Rational(2) * a);

        // Certificate: bound * |charge|^2 - square is positive semidefinite,
        // checked through every principal minor.
        Mat<Rational> certificate(5, 5);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                certificate(i, j) = bound * charge_gram(i, j) - q(i, j);
        for (int mask = 1; mask < (1 << 5); ++mask) {
            std::vector<int> idx;
            for (int i = 0; i < 5; ++i)
                if (mask & (1 << i)) idx.push_back(i);
            Mat<Rational> sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
            for (size_t i = 0; i < idx.size(); ++i)
                for (size_t j = 0; j < idx.size(); ++j)
                    sub(static_cast<int>(i), static_cast<int>(j)) =
                        certificate(idx[i], idx[j]);
            if (detail::det(sub) < Rational(0))
                throw std::logic_error("support constant: certificate check failed");
        }
        return bound;
    }();
    return constant;
}

QuadForm lattice_quadratic(int transform, const Rational& eta)
{
    if (transform < 1 || transform > kNumTransforms)
        throw std::invalid_argument("lattice_quadratic: transform index out of range");
    if (!(eta > Rational(0)))
        throw std::invalid_argument("lattice_quadratic: eta must be positive");
    const TransformData& data = transform_data(transform);
    QuadForm form;
    form.space = FormSpace::Lattice14;
    form.gram = Mat<Rational>(14, 14);
    add_symmetric_outer(form.gram, data.rows[1], data.rows[2], Rational(1));   // + b c
    add_symmetric_outer(form.gram, data.rows[0], data.rows[3], Rational(-1));  // - a d
    const Mat<Rational> surface_part =
        data.projection.transpose() * (surface_square_gram() * data.projection);
    add_scaled(form.gram, surface_part, eta);
    form.params.emplace_back("transform", Rational(transform));
    form.params.emplace_back("eta", eta);
    return form;
}

QuadForm combined_quadratic(const Rational& alpha, const Rational& beta, const Rational& gamma,
                            const std::array<Rational, 6>& etas)
{
    const std::array<Rational, 3> weights{alpha, beta, gamma};
    for (const Rational& w : weights)
        if (!(w > Rational(0)))
            throw std::invalid_argument("combined_quadratic: weights must be positive");
    for (const Rational& eta : etas)
        if (!(eta > Rational(0)))
            throw std::invalid_argument("combined_quadratic: dampings must be positive");
    QuadForm form;
    form.space = FormSpace::Lattice14;
    form.gram = Mat<Rational>(14, 14);
    for (int i = 1; i <= 3; ++i) {
        const QuadForm first = lattice_quadratic(i, etas[static_cast<size_t>(i - 1)]);
        const QuadForm second = lattice_quadratic(i + 3, etas[static_cast<size_t>(i + 2)]);
        add_scaled(form.gram, first.gram, weights[static_cast<size_t>(i - 1)]);
        add_scaled(form.gram, second.gram, weights[static_cast<size_t>(i - 1)]);
    }
    form.params.emplace_back("alpha", alpha);
    form.params.emplace_back("beta", beta);
    form.params.emplace_back("gamma", gamma);
    for (int i = 0; i < 6; ++i)
        form.params.emplace_back("eta" + std::to_string(i + 1), etas[static_cast<size_t>(i)]);
    return form;
}

std::vector<CRat> reduced_charge_values(const Rational& alpha, const Rational& beta,
                                        const Rational& gamma)
{
    std::vector<CRat> values;
    values.reserve(14);
    for (int j = 0; j < 14; ++j) {
        LatticeVec e(Ambient::E3);
        e[j] = CRat(1);
        values.push_back(reduced_charge(e, alpha, beta, gamma));
    }
    return values;
}

detail::Mat<double> kernel_basis(const std::vector<CRat>& charge_values)
{
    if (charge_values.size() != 14)
        throw std::invalid_argument("kernel_basis: expected fourteen charge values");
    Mat<Rational> rows(2, 14);
    for (int j = 0; j < 14; ++j) {
        rows(0, j) = charge_values[static_cast<size_t>(j)].re;
        rows(1, j) = charge_values[static_cast<size_t>(j)].im;
    }
    if (detail::rank(rows) != 2)
        throw std::invalid_argument(
            "kernel_basis: real and imaginary parts of the charge are dependent");

    Eigen::MatrixXd real_rows(2, 14);
    for (int j = 0; j < 14; ++j) {
        real_rows(0, j) = to_double(rows(0, j));
        real_rows(1, j) = to_double(rows(1, j));
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(real_rows, Eigen::ComputeFullV);
    const Eigen::MatrixXd& v = svd.matrixV();
    Mat<double> basis(14, 12);
    for (int col = 0; col < 12; ++col)
        for (int r = 0; r < 14; ++r) basis(r, col) = v(r, col + 2);
    return basis;
}

DefinitenessResult restricted_definiteness(const QuadForm& form, const detail::Mat<double>& basis)
{
    if (basis.rows != form.gram.rows)
        throw std::invalid_argument("restricted_definiteness: basis dimension mismatch");
    if (basis.cols < 1)
        throw std::invalid_argument("restricted_definiteness: basis is empty");
    Eigen::MatrixXd k(basis.rows, basis.cols);
    for (int i = 0; i < basis.rows; ++i)
        for (int j = 0; j < basis.cols; ++j) k(i, j) = basis(i, j);
    const Eigen::MatrixXd gram = to_double_matrix(form.gram);
    Eigen::MatrixXd restricted = k.transpose() * gram * k;
    restricted = 0.5 * (restricted + restricted.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
    DefinitenessResult result;
    result.max_eigenvalue = solver.eigenvalues().maxCoeff();
    result.negative_definite = result.max_eigenvalue < kDefinitenessTolerance;
    return result;
}

QuadForm abstract_kernel_form(const CoeffFormParams& params)
{
    validate_chart_params(params, "abstract_kernel_form");
    const Mat<Rational> block = chart_block(params);
    QuadForm form;
    form.space = FormSpace::Coeff12;
    form.gram = Mat<Rational>(6, 6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            form.gram(i, j) = block(i, j);
            form.gram(i + 3, j + 3) = block(i, j);
        }
    append_chart_params(form, params);
    return form;
}

detail::Mat<Rational> scaling_difference_hessian(const CoeffFormParams& params)
{
    validate_chart_params(params, "scaling_difference_hessian");
    CoeffFormParams reference = params;
    reference.lambda = Rational(0);
    if (params.damp_alpha == Rational(0)) reference.weight_alpha = Rational(0);
    if (params.damp_beta == Rational(0)) reference.weight_beta = Rational(0);
    if (params.damp_gamma == Rational(0)) reference.weight_gamma = Rational(0);
    const Mat<Rational> current = chart_block(params);
    const Mat<Rational> base = chart_block(reference);
    Mat<Rational> hessian(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) hessian(i, j) = Rational(2) * (base(i, j) - current(i, j));
    return hessian;
}

Rational principal_minor(const detail::Mat<Rational>& matrix, std::span<const int> indices)
{
    if (matrix.rows != matrix.cols)
        throw std::invalid_argument("principal_minor: matrix must be square");
    if (indices.empty())
        throw std::invalid_argument("principal_minor: index list is empty");
    for (size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 0 || indices[k] >= matrix.rows)
            throw std::invalid_argument("principal_minor: index out of range");
        if (k > 0 && indices[k] <= indices[k - 1])
            throw std::invalid_argument("principal_minor: indices must be strictly increasing");
    }
    Mat<Rational> sub(static_cast<int>(indices.size()), static_cast<int>(indices.size()));
    for (size_t i = 0; i < indices.size(); ++i)
        for (size_t j = 0; j < indices.size(); ++j)
            sub(static_cast<int>(i), static_cast<int>(j)) = matrix(indices[i], indices[j]);
    return detail::det(sub);
}

GridReport verify_definiteness_grid(int which_case, const GridSpec& spec)
{
    if (which_case < 1 || which_case > 3)
        throw std::invalid_argument("verify_definiteness_grid: case must be 1, 2 or 3");
    if (spec.axis_points < 1 || spec.lambda_steps < 2)
        throw std::invalid_argument("verify_definiteness_grid: grid is too small");
    if (spec.threads < 1)
        throw std::invalid_argument("verify_definiteness_grid: thread count must be positive");
    if (spec.axis_max < spec.axis_min)
        throw std::invalid_argument("verify_definiteness_grid: empty axis range");

    const std::vector<Rational> axis = grid_axis(spec);
    std::vector<std::array<Rational, 3>> damping_points;
    if (which_case == 1) {
        for (const Rational& a : axis)
            for (const Rational& b : axis)
                for (const Rational& g : axis) damping_points.push_back({a, b, g});
    } else if (which_case == 2) {
        for (const Rational& a : axis)
            for (const Rational& b : axis) damping_points.push_back({a, b, Rational(0)});
    } else {
        for (const Rational& a : axis) damping_points.push_back({a, Rational(0), Rational(0)});
    }

    std::vector<CoeffFormParams> tasks;
    for (const auto& damps : damping_points) {
        if (!(damps[0] + damps[1] + damps[2] < Rational(1))) continue;
        const CaseParameters params = case_parameters(damps);
        for (int step = 0; step < spec.lambda_steps; ++step) {
            CoeffFormParams p;
            p.weight_alpha = params.weights[0];
            p.weight_beta = params.weights[1];
            p.weight_gamma = params.weights[2];
            p.damp_alpha = damps[0];
            p.damp_beta = damps[1];
            p.damp_gamma = damps[2];
            p.bound_c = params.bound;
            p.lambda = Rational(step, spec.lambda_steps - 1);
            tasks.push_back(p);
        }
    }

    std::vector<double> margins(tasks.size());
    const int workers =
        static_cast<int>(std::min<size_t>(static_cast<size_t>(spec.threads), tasks.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) margins[i] = block_max_eigenvalue(tasks[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&margins, &tasks, t, workers] {
                for (size_t i = static_cast<size_t>(t); i < tasks.size();
                     i += static_cast<size_t>(workers))
                    margins[i] = block_max_eigenvalue(tasks[i]);
            });
        for (std::thread& worker : pool) worker.join();
    }

    GridReport report;
    report.points_checked = static_cast<long long>(tasks.size());
    for (size_t i = 0; i < tasks.size(); ++i) {
        report.worst_margin = std::max(report.worst_margin, margins[i]);
        if (!(margins[i] < kDefinitenessTolerance))
            report.violations.push_back({tasks[i], margins[i]});
    }
    return report;
}

SupportReport support_check(const Rational& alpha, const Rational& beta, const Rational& gamma,
                            int lambda_steps)
{
    const std::array<Rational, 3> damps{alpha, beta, gamma};
    for (const Rational& d : damps)
        if (d < Rational(0))
            throw std::invalid_argument("support_check: parameters must be nonnegative");
    if (!(alpha + beta + gamma < Rational(1)))
        throw std::invalid_argument("support_check: parameters must sum below one");
    if (lambda_steps < 2)
        throw std::invalid_argument("support_check: need at least two scaling steps");

    const CaseParameters params = case_parameters(damps);
    SupportReport report;
    report.weight_alpha = params.weights[0];
    report.weight_beta = params.weights[1];
    report.weight_gamma = params.weights[2];
    report.bound_c = params.bound;
    report.eta = params.bound;

    const std::array<Rational, 6> etas{report.eta, report.eta, report.eta,
                                       report.eta, report.eta, report.eta};
    const QuadForm combined =
        combined_quadratic(params.weights[0], params.weights[1], params.weights[2], etas);

    report.negative_definite = true;
    for (int step = 0; step < lambda_steps; ++step) {
        const Rational lambda(step, lambda_steps - 1);
        const detail::Mat<double> kernel =
            kernel_basis(reduced_charge_values(lambda * alpha, lambda * beta, lambda * gamma));
        const DefinitenessResult result = restricted_definiteness(combined, kernel);
        report.points.push_back({lambda, result.max_eigenvalue});
        report.worst_margin = std::max(report.worst_margin, result.max_eigenvalue);
        report.negative_definite = report.negative_definite && result.negative_definite;
    }
    return report;
}

bool vanishing_check(const LatticeVec& vec)
{
    if (vec.ambient != Ambient::E3)
        throw std::invalid_argument("vanishing_check: expected a triple-product vector");
    bool all_vanish = true;
    for (int transform = 1; transform <= kNumTransforms && all_vanish; ++transform) {
        const LatticeVec v1 = project_to_surface(apply(charge_transform(transform), vec)).v1;
        for (int i = 0; i < v1.size(); ++i)
            if (!v1[i].is_zero()) {
                all_vanish = false;
                break;
            }
    }
    if (all_vanish && !(vec == LatticeVec(Ambient::E3)))
        throw std::logic_error("vanishing_check: nonzero vector with vanishing projections");
    return all_vanish;
}

}  // namespace stab3
