#pragma once

#include "rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace superw {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

inline Matrix zero_matrix(std::size_t rows, std::size_t cols) {
    return Matrix(rows, Vector(cols, Rational(0)));
}

inline Matrix identity_matrix(std::size_t n) {
    Matrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline bool is_zero(const Vector& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (std::size_t k = c; k < cols; ++k) m[r][k] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(Matrix m) { return rref(m).size(); }

// Basis of {x : m x = 0}.
inline Matrix nullspace(Matrix m, std::size_t cols) {
    Matrix out;
    if (m.empty()) {
        for (std::size_t j = 0; j < cols; ++j) {
            Vector v(cols, Rational(0));
            v[j] = 1;
            out.push_back(v);
        }
        return out;
    }
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vector v(cols, Rational(0));
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
        out.push_back(v);
    }
    return out;
}

// Solves m x = b; nullopt if inconsistent. Free variables set to zero.
inline std::optional<Vector> solve(const Matrix& m, const Vector& b) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    Matrix aug(rows, Vector(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = m[i][j];
        aug[i][cols] = b[i];
    }
    auto pivots = rref(aug);
    Vector x(cols, Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == cols) return std::nullopt;
        x[pivots[r]] = aug[r][cols];
    }
    return x;
}

inline Rational determinant(Matrix m) {
    std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[i][k] -= f * m[c][k];
        }
    }
    return det;
}

inline Matrix transpose(const Matrix& m) {
    if (m.empty()) return {};
    Matrix t = zero_matrix(m[0].size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

inline Matrix inverse(const Matrix& m) {
    std::size_t n = m.size();
    Matrix aug(n, Vector(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
    Matrix inv = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// Bilinear form value u^T m v.
inline Rational pair(const Matrix& m, const Vector& u, const Vector& v) {
    Rational s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0 && m[i][j] != 0) s += u[i] * m[i][j] * v[j];
    }
    return s;
}

inline Vector axpy(const Vector& x, const Rational& a, const Vector& y) {
    Vector r = x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * y[i];
    return r;
}

inline Vector scaled(const Vector& x, const Rational& a) {
    Vector r = x;
    for (auto& v : r) v *= a;
    return r;
}

// True if v lies in the row span of rows.
inline bool in_span(const Matrix& rows, const Vector& v) {
    if (is_zero(v)) return true;
    if (rows.empty()) return false;
    return rank(rows) == [&] {
        Matrix m = rows;
        m.push_back(v);
        return rank(m);
    }();
}

}  // namespace superw
