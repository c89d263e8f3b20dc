#pragma once

#include <cassert>
#include <optional>
#include <utility>
#include <vector>

namespace stab3::detail {

// Dense matrix over an exact field scalar (Rational or CRat).
// Only the handful of operations the lattice-side code needs; all exact.
template <class K>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<K> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, K(0)) {}

    K& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const K& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = K(1);
        return m;
    }

    Mat transpose() const
    {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& x, const Mat& y)
    {
        assert(x.cols == y.rows);
        Mat z(x.rows, y.cols);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                const K& v = x(i, k);
                if (v == K(0)) continue;
                for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
            }
        return z;
    }

    friend Mat operator-(const Mat& x, const Mat& y)
    {
        assert(x.rows == y.rows && x.cols == y.cols);
        Mat z(x.rows, x.cols);
        for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
        return z;
    }

    friend bool operator==(const Mat& x, const Mat& y)
    {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

// Reduced row echelon form in place; returns pivot columns.
template <class K>
std::vector<int> rref(Mat<K>& m)
{
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int i = row; i < m.rows; ++i)
            if (!(m(i, col) == K(0))) { p = i; break; }
        if (p < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m(row, j), m(p, j));
        K inv = K(1) / m(row, col);
        for (int j = col; j < m.cols; ++j) m(row, j) = m(row, j) * inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || m(i, col) == K(0)) continue;
            K f = m(i, col);
            for (int j = col; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
int rank(Mat<K> m)
{
    return static_cast<int>(rref(m).size());
}

template <class K>
K det(Mat<K> m)
{
    assert(m.rows == m.cols);
    K d(1);
    for (int col = 0; col < m.cols; ++col) {
        int p = -1;
        for (int i = col; i < m.rows; ++i)
            if (!(m(i, col) == K(0))) { p = i; break; }
        if (p < 0) return K(0);
        if (p != col) {
            for (int j = 0; j < m.cols; ++j) std::swap(m(col, j), m(p, j));
            d = -d;
        }
        d = d * m(col, col);
        K inv = K(1) / m(col, col);
        for (int i = col + 1; i < m.rows; ++i) {
            if (m(i, col) == K(0)) continue;
            K f = m(i, col) * inv;
            for (int j = col; j < m.cols; ++j) m(i, j) = m(i, j) - f * m(col, j);
        }
    }
    return d;
}

// Solves A X = B exactly. Empty result if the system is inconsistent;
// for underdetermined consistent systems free variables are set to zero.
template <class K>
std::optional<Mat<K>> solve(const Mat<K>& A, const Mat<K>& B)
{
    assert(A.rows == B.rows);
    Mat<K> m(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) m(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) m(i, A.cols + j) = B(i, j);
    }
    std::vector<int> pivots = rref(m);
    for (int p : pivots)
        if (p >= A.cols) return std::nullopt;
    Mat<K> x(A.cols, B.cols);
    for (size_t r = 0; r < pivots.size(); ++r)
        for (int j = 0; j < B.cols; ++j) x(pivots[r], j) = m(static_cast<int>(r), A.cols + j);
    // Rows of zeros in A must pair with zeros in B.
    for (int i = static_cast<int>(pivots.size()); i < m.rows; ++i)
        for (int j = 0; j < B.cols; ++j)
            if (!(m(i, A.cols + j) == K(0))) return std::nullopt;
    return x;
}

template <class K>
std::optional<Mat<K>> inverse(const Mat<K>& A)
{
    assert(A.rows == A.cols);
    auto x = solve(A, Mat<K>::identity(A.rows));
    if (x && rank(A) == A.rows) return x;
    return std::nullopt;
}

// Basis of the right kernel, one column per free variable.
template <class K>
Mat<K> kernel(Mat<K> m)
{
    const int n = m.cols;
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(n, false);
    for (int p : pivots) is_pivot[p] = true;
    const int k = n - static_cast<int>(pivots.size());
    Mat<K> basis(n, k);
    int idx = 0;
    for (int j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        basis(j, idx) = K(1);
        for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], idx) = -m(static_cast<int>(r), j);
        ++idx;
    }
    return basis;
}

} // namespace stab3::detail
