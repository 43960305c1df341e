#pragma once

#include "trop/rational.hpp"

#include <optional>
#include <vector>

namespace trop {

using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;

template <class T>
struct Mat {
    std::size_t nr = 0, nc = 0;
    std::vector<T> a; // row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : nr(r), nc(c), a(r * c) {}
    Mat(std::size_t r, std::size_t c, std::vector<T> flat) : nr(r), nc(c), a(std::move(flat)) {
        if (a.size() != r * c) throw internal_error("Mat: flat data size mismatch");
    }

    T& at(std::size_t i, std::size_t j) { return a[i * nc + j]; }
    const T& at(std::size_t i, std::size_t j) const { return a[i * nc + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    std::vector<T> col(std::size_t j) const {
        std::vector<T> v(nr);
        for (std::size_t i = 0; i < nr; ++i) v[i] = at(i, j);
        return v;
    }
    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(a.begin() + i * nc, a.begin() + (i + 1) * nc);
    }

    bool operator==(const Mat&) const = default;
};

using QMat = Mat<Rat>;
using ZMat = Mat<Int>;

template <class T>
Mat<T> from_cols(std::size_t rows, const std::vector<std::vector<T>>& cols) {
    Mat<T> m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw internal_error("from_cols: ragged input");
        for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

template <class T>
Mat<T> from_rows(std::size_t cols, const std::vector<std::vector<T>>& rows) {
    Mat<T> m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw internal_error("from_rows: ragged input");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& x, const Mat<T>& y) {
    if (x.nc != y.nr) throw internal_error("mat_mul: shape mismatch");
    Mat<T> z(x.nr, y.nc);
    for (std::size_t i = 0; i < x.nr; ++i)
        for (std::size_t k = 0; k < x.nc; ++k) {
            if (x.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.nc; ++j)
                z.at(i, j) += x.at(i, k) * y.at(k, j);
        }
    return z;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& m, const std::vector<T>& v) {
    if (m.nc != v.size()) throw internal_error("mat_vec: shape mismatch");
    std::vector<T> r(m.nr);
    for (std::size_t i = 0; i < m.nr; ++i)
        for (std::size_t j = 0; j < m.nc; ++j) r[i] += m.at(i, j) * v[j];
    return r;
}

template <class T>
Mat<T> transpose(const Mat<T>& m) {
    Mat<T> t(m.nc, m.nr);
    for (std::size_t i = 0; i < m.nr; ++i)
        for (std::size_t j = 0; j < m.nc; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

template <class T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    if (x.size() != y.size()) throw internal_error("dot: length mismatch");
    T s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline Rat dot_zq(const ZVec& x, const QVec& y) {
    if (x.size() != y.size()) throw internal_error("dot_zq: length mismatch");
    Rat s(0);
    for (std::size_t i = 0; i < x.size(); ++i) s += Rat(x[i]) * y[i];
    return s;
}

template <class T>
bool is_zero_vec(const std::vector<T>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline QVec to_q(const ZVec& v) {
    QVec q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) q[i] = Rat(v[i]);
    return q;
}

inline QMat to_q(const ZMat& m) {
    QMat q(m.nr, m.nc);
    for (std::size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
    return q;
}

inline Int gcd_vec(const ZVec& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g; // 0 for the zero vector
}

// Scale a rational direction to the primitive integer vector on the same ray.
// Zero stays zero.
inline ZVec primitive(const QVec& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm(l, den(x));
    ZVec z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = num(v[i]) * (l / den(v[i]));
    Int g = gcd_vec(z);
    if (g > 1)
        for (auto& x : z) x /= g;
    return z;
}

inline ZVec primitive(const ZVec& v) {
    Int g = gcd_vec(v);
    if (g <= 1) return v;
    ZVec z = v;
    for (auto& x : z) x /= g;
    return z;
}

// Row echelon in place; returns pivot columns. Elimination only below is not
// enough for our uses, so this does full reduced form.
inline std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.nc && r < m.nr; ++c) {
        std::size_t p = r;
        while (p < m.nr && m.at(p, c) == 0) ++p;
        if (p == m.nr) continue;
        for (std::size_t j = 0; j < m.nc; ++j) std::swap(m.at(r, j), m.at(p, j));
        Rat inv = m.at(r, c);
        for (std::size_t j = c; j < m.nc; ++j) m.at(r, j) /= inv;
        for (std::size_t i = 0; i < m.nr; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            Rat f = m.at(i, c);
            for (std::size_t j = c; j < m.nc; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank(QMat m) { return rref(m).size(); }

inline std::size_t rank(const ZMat& m) { return rank(to_q(m)); }

// One solution of m x = b, or nullopt if inconsistent. Free variables are 0.
inline std::optional<QVec> solve(const QMat& m, const QVec& b) {
    if (m.nr != b.size()) throw internal_error("solve: shape mismatch");
    QMat aug(m.nr, m.nc + 1);
    for (std::size_t i = 0; i < m.nr; ++i) {
        for (std::size_t j = 0; j < m.nc; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.nc) = b[i];
    }
    auto piv = rref(aug);
    if (!piv.empty() && piv.back() == m.nc) return std::nullopt;
    QVec x(m.nc);
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug.at(k, m.nc);
    return x;
}

// Basis of {x : m x = 0}.
inline std::vector<QVec> kernel_basis(const QMat& m) {
    QMat r = m;
    auto piv = rref(r);
    std::vector<bool> is_piv(m.nc, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<QVec> basis;
    for (std::size_t free = 0; free < m.nc; ++free) {
        if (is_piv[free]) continue;
        QVec v(m.nc);
        v[free] = 1;
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r.at(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline bool in_span(const QMat& cols, const QVec& v) {
    return solve(cols, v).has_value();
}

template <class T>
T det(Mat<T> m) {
    if (m.nr != m.nc) throw internal_error("det: not square");
    if constexpr (std::is_same_v<T, Int>) {
        Rat d = det(to_q(m));
        if (!is_integer(d)) throw internal_error("det: integer matrix, fractional result");
        return num(d);
    } else {
        T d(1);
        for (std::size_t c = 0; c < m.nc; ++c) {
            std::size_t p = c;
            while (p < m.nr && m.at(p, c) == 0) ++p;
            if (p == m.nr) return T(0);
            if (p != c) {
                for (std::size_t j = 0; j < m.nc; ++j) std::swap(m.at(c, j), m.at(p, j));
                d = -d;
            }
            d *= m.at(c, c);
            for (std::size_t i = c + 1; i < m.nr; ++i) {
                if (m.at(i, c) == 0) continue;
                Rat f = m.at(i, c) / m.at(c, c);
                for (std::size_t j = c; j < m.nc; ++j) m.at(i, j) -= f * m.at(c, j);
            }
        }
        return d;
    }
}

inline std::optional<QMat> inverse(const QMat& m) {
    if (m.nr != m.nc) throw internal_error("inverse: not square");
    QMat aug(m.nr, 2 * m.nc);
    for (std::size_t i = 0; i < m.nr; ++i) {
        for (std::size_t j = 0; j < m.nc; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.nc + i) = 1;
    }
    auto piv = rref(aug);
    if (piv.size() != m.nr || piv.back() != m.nr - 1) return std::nullopt;
    QMat inv(m.nr, m.nc);
    for (std::size_t i = 0; i < m.nr; ++i)
        for (std::size_t j = 0; j < m.nc; ++j) inv.at(i, j) = aug.at(i, m.nc + j);
    return inv;
}

} // namespace trop
