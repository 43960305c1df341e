#pragma once

#include "trop/linalg.hpp"

#include <map>

namespace trop {

// Multivariate polynomial over Q in a fixed number of variables.
struct Poly {
    std::size_t n = 0;
    std::map<std::vector<unsigned>, Rat> c; // exponent vector -> nonzero coefficient

    bool is_zero() const { return c.empty(); }

    bool operator==(const Poly&) const = default;
};

inline Poly poly_const(std::size_t n, Rat v) {
    Poly p;
    p.n = n;
    if (v != 0) p.c.emplace(std::vector<unsigned>(n, 0), std::move(v));
    return p;
}

inline Poly poly_var(std::size_t n, std::size_t i) {
    Poly p;
    p.n = n;
    std::vector<unsigned> e(n, 0);
    e[i] = 1;
    p.c.emplace(std::move(e), Rat(1));
    return p;
}

inline Poly poly_monomial(std::size_t n, std::vector<unsigned> exps, Rat coeff) {
    Poly p;
    p.n = n;
    if (exps.size() != n) throw internal_error("poly_monomial: exponent arity");
    if (coeff != 0) p.c.emplace(std::move(exps), std::move(coeff));
    return p;
}

inline Poly operator+(const Poly& a, const Poly& b) {
    if (a.n != b.n) throw internal_error("poly add: arity mismatch");
    Poly r = a;
    for (const auto& [e, v] : b.c) {
        auto it = r.c.find(e);
        if (it == r.c.end())
            r.c.emplace(e, v);
        else {
            it->second += v;
            if (it->second == 0) r.c.erase(it);
        }
    }
    return r;
}

inline Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& [_, v] : r.c) v = -v;
    return r;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.n != b.n) throw internal_error("poly mul: arity mismatch");
    Poly r;
    r.n = a.n;
    for (const auto& [ea, va] : a.c)
        for (const auto& [eb, vb] : b.c) {
            std::vector<unsigned> e(a.n);
            for (std::size_t i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
            Rat v = va * vb;
            auto it = r.c.find(e);
            if (it == r.c.end())
                r.c.emplace(std::move(e), std::move(v));
            else {
                it->second += v;
                if (it->second == 0) r.c.erase(it);
            }
        }
    return r;
}

inline Poly operator*(const Rat& s, const Poly& a) {
    Poly r;
    r.n = a.n;
    if (s == 0) return r;
    r = a;
    for (auto& [_, v] : r.c) v *= s;
    return r;
}

inline Poly derivative(const Poly& a, std::size_t i) {
    Poly r;
    r.n = a.n;
    for (const auto& [e, v] : a.c) {
        if (e[i] == 0) continue;
        std::vector<unsigned> f = e;
        f[i] -= 1;
        r.c.emplace(std::move(f), v * Rat(e[i]));
    }
    return r;
}

inline Rat poly_eval(const Poly& a, const QVec& x) {
    if (x.size() != a.n) throw internal_error("poly_eval: arity mismatch");
    Rat total = 0;
    for (const auto& [e, v] : a.c) {
        Rat term = v;
        for (std::size_t i = 0; i < a.n; ++i)
            for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
        total += term;
    }
    return total;
}

inline unsigned total_degree(const Poly& a) {
    unsigned d = 0;
    for (const auto& [e, _] : a.c) {
        unsigned s = 0;
        for (auto k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

// p(U t + b): substitute each variable by an affine form in m new variables.
inline Poly substitute_affine(const Poly& p, const QMat& u, const QVec& b) {
    if (u.nr != p.n || b.size() != p.n) throw internal_error("substitute_affine: shape mismatch");
    std::size_t m = u.nc;
    std::vector<Poly> lin(p.n);
    for (std::size_t i = 0; i < p.n; ++i) {
        lin[i] = poly_const(m, b[i]);
        for (std::size_t j = 0; j < m; ++j)
            if (u.at(i, j) != 0) lin[i] = lin[i] + u.at(i, j) * poly_var(m, j);
    }
    // cache powers of each affine form up to its maximal exponent
    std::vector<std::vector<Poly>> pow(p.n);
    for (std::size_t i = 0; i < p.n; ++i) pow[i].push_back(poly_const(m, Rat(1)));
    Poly r;
    r.n = m;
    for (const auto& [e, v] : p.c) {
        Poly term = poly_const(m, v);
        for (std::size_t i = 0; i < p.n; ++i) {
            while (pow[i].size() <= e[i]) pow[i].push_back(pow[i].back() * lin[i]);
            if (e[i] > 0) term = term * pow[i][e[i]];
        }
        r = r + term;
    }
    return r;
}

} // namespace trop
