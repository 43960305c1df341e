#pragma once

#include "trop/polynomial.hpp"

namespace trop {

// Index tuple for a wedge block, strictly increasing.
using Idx = std::vector<unsigned>;

// (p,q)-superform with polynomial coefficients on R^n:
//   sum over (I,J) of  alpha_IJ  d'x_I ^ d''x_J
// stored in normal order (all d' slots first, both tuples increasing).
struct LagerbergForm {
    std::size_t n = 0;
    int p = 0, q = 0;
    std::map<std::pair<Idx, Idx>, Poly> terms; // nonzero coefficients only

    bool is_zero() const { return terms.empty(); }

    bool operator==(const LagerbergForm&) const = default;
};

namespace detail {

inline bool strictly_increasing(const Idx& v, std::size_t n) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= n) return false;
        if (i && v[i - 1] >= v[i]) return false;
    }
    return true;
}

// Insert i into a sorted tuple; nullopt when i already occurs. The sign is
// (-1)^(number of entries smaller than i), from moving d'x_i in from the left.
inline std::optional<std::pair<Idx, int>> insert_index(const Idx& v, unsigned i) {
    Idx out;
    int before = 0;
    bool placed = false;
    for (auto x : v) {
        if (x == i) return std::nullopt;
        if (x < i) {
            ++before;
            out.push_back(x);
        } else {
            if (!placed) {
                out.push_back(i);
                placed = true;
            }
            out.push_back(x);
        }
    }
    if (!placed) out.push_back(i);
    return std::make_pair(std::move(out), before % 2 ? -1 : 1);
}

// Merge two sorted tuples, tracking the permutation sign of sorting the
// concatenation; nullopt when they share an index.
inline std::optional<std::pair<Idx, int>> merge_wedge(const Idx& a, const Idx& b) {
    Idx out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    long inversions = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            out.push_back(a[i]);
            ++i;
        } else if (i == a.size() || b[j] < a[i]) {
            // b[j] moves left past the remaining entries of a
            inversions += long(a.size() - i);
            out.push_back(b[j]);
            ++j;
        } else {
            return std::nullopt; // a[i] == b[j]
        }
    }
    return std::make_pair(std::move(out), inversions % 2 ? -1 : 1);
}

inline void add_to(LagerbergForm& f, Idx i, Idx j, const Poly& c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(std::move(i), std::move(j));
    auto it = f.terms.find(key);
    if (it == f.terms.end())
        f.terms.emplace(std::move(key), c);
    else {
        it->second = it->second + c;
        if (it->second.is_zero()) f.terms.erase(it);
    }
}

} // namespace detail

inline LagerbergForm form_zero(std::size_t n, int p, int q) {
    LagerbergForm f;
    f.n = n;
    f.p = p;
    f.q = q;
    return f;
}

inline LagerbergForm form_function(const Poly& c) {
    LagerbergForm f = form_zero(c.n, 0, 0);
    detail::add_to(f, {}, {}, c);
    return f;
}

inline LagerbergForm form_term(std::size_t n, Idx i, Idx j, const Poly& c) {
    if (!detail::strictly_increasing(i, n) || !detail::strictly_increasing(j, n))
        throw input_error("form term: index tuples must be strictly increasing");
    if (c.n != n) throw input_error("form term: coefficient arity mismatch");
    LagerbergForm f = form_zero(n, int(i.size()), int(j.size()));
    detail::add_to(f, std::move(i), std::move(j), c);
    return f;
}

inline LagerbergForm operator+(const LagerbergForm& a, const LagerbergForm& b) {
    if (a.n != b.n || a.p != b.p || a.q != b.q)
        throw input_error("form add: bidegree or ambient mismatch");
    LagerbergForm r = a;
    for (const auto& [k, c] : b.terms) detail::add_to(r, k.first, k.second, c);
    return r;
}

inline LagerbergForm operator*(const Rat& s, const LagerbergForm& a) {
    LagerbergForm r = form_zero(a.n, a.p, a.q);
    if (s == 0) return r;
    r = a;
    for (auto& [_, c] : r.terms) c = s * c;
    return r;
}

inline LagerbergForm operator-(const LagerbergForm& a) { return Rat(-1) * a; }

inline LagerbergForm operator-(const LagerbergForm& a, const LagerbergForm& b) {
    return a + (-b);
}

inline LagerbergForm wedge(const LagerbergForm& a, const LagerbergForm& b) {
    if (a.n != b.n) throw input_error("wedge: ambient mismatch");
    LagerbergForm r = form_zero(a.n, a.p + b.p, a.q + b.q);
    // cross sign: the d' block of b passes the d'' block of a
    int cross = (b.p * a.q) % 2 ? -1 : 1;
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            auto mi = detail::merge_wedge(ka.first, kb.first);
            if (!mi) continue;
            auto mj = detail::merge_wedge(ka.second, kb.second);
            if (!mj) continue;
            Rat s(cross * mi->second * mj->second);
            detail::add_to(r, mi->first, mj->first, s * (ca * cb));
        }
    return r;
}

inline LagerbergForm d_prime(const LagerbergForm& a) {
    LagerbergForm r = form_zero(a.n, a.p + 1, a.q);
    for (const auto& [k, c] : a.terms)
        for (std::size_t i = 0; i < a.n; ++i) {
            Poly dc = derivative(c, i);
            if (dc.is_zero()) continue;
            auto ins = detail::insert_index(k.first, unsigned(i));
            if (!ins) continue;
            detail::add_to(r, ins->first, k.second, Rat(ins->second) * dc);
        }
    return r;
}

inline LagerbergForm d_second(const LagerbergForm& a) {
    LagerbergForm r = form_zero(a.n, a.p, a.q + 1);
    int cross = a.p % 2 ? -1 : 1; // d''x_j passes the d' block
    for (const auto& [k, c] : a.terms)
        for (std::size_t j = 0; j < a.n; ++j) {
            Poly dc = derivative(c, j);
            if (dc.is_zero()) continue;
            auto ins = detail::insert_index(k.second, unsigned(j));
            if (!ins) continue;
            detail::add_to(r, k.first, ins->first, Rat(cross * ins->second) * dc);
        }
    return r;
}

inline LagerbergForm involution_j(const LagerbergForm& a) {
    LagerbergForm r = form_zero(a.n, a.q, a.p);
    int sign = (a.p * a.q) % 2 ? -1 : 1;
    for (const auto& [k, c] : a.terms) detail::add_to(r, k.second, k.first, Rat(sign) * c);
    return r;
}

// Jw == (-1)^p w for a (p,p)-form.
inline bool is_symmetric(const LagerbergForm& a) {
    if (a.p != a.q) return false;
    return involution_j(a) == (a.p % 2 ? -a : a);
}

namespace detail {

inline Rat minor_det(const QMat& u, const Idx& rows, const Idx& cols) {
    QMat m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m.at(i, j) = u.at(rows[i], cols[j]);
    return det(m);
}

inline bool next_combination(Idx& k, std::size_t m) {
    // next strictly increasing tuple in [0, m)
    std::size_t r = k.size();
    for (std::size_t i = r; i-- > 0;) {
        if (k[i] + (r - i) < m) {
            ++k[i];
            for (std::size_t j = i + 1; j < r; ++j) k[j] = k[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline std::vector<Idx> combinations(std::size_t m, std::size_t r) {
    std::vector<Idx> out;
    if (r > m) return out;
    Idx k(r);
    for (std::size_t i = 0; i < r; ++i) k[i] = unsigned(i);
    out.push_back(k);
    while (next_combination(k, m)) out.push_back(k);
    return out;
}

} // namespace detail

// Pull back along the affine map x = U t + b; both wedge slots transform by
// the minors of U, coefficients by substitution.
inline LagerbergForm pullback(const LagerbergForm& a, const QMat& u, const QVec& b) {
    if (u.nr != a.n || b.size() != a.n) throw input_error("pullback: shape mismatch");
    std::size_t m = u.nc;
    LagerbergForm r = form_zero(m, a.p, a.q);
    auto ks = detail::combinations(m, std::size_t(a.p));
    auto ls = detail::combinations(m, std::size_t(a.q));
    for (const auto& [key, c] : a.terms) {
        Poly sub = substitute_affine(c, u, b);
        if (sub.is_zero()) continue;
        for (const auto& k : ks) {
            Rat dk = detail::minor_det(u, key.first, k);
            if (dk == 0) continue;
            for (const auto& l : ls) {
                Rat dl = detail::minor_det(u, key.second, l);
                if (dl == 0) continue;
                detail::add_to(r, k, l, (dk * dl) * sub);
            }
        }
    }
    return r;
}

inline LagerbergForm pullback(const LagerbergForm& a, const ZMat& u, const QVec& b) {
    return pullback(a, to_q(u), b);
}

} // namespace trop
