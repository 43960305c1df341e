#pragma once

#include "trop/linalg.hpp"

#include <algorithm>
#include <optional>

namespace trop {

// a = u * s * v with u, v unimodular and s diagonal, s[0] | s[1] | ...
struct SmithDecomposition {
    ZMat u, s, v;

    ZVec divisors() const { // nonzero diagonal
        ZVec d;
        for (std::size_t i = 0; i < std::min(s.nr, s.nc); ++i)
            if (s.at(i, i) != 0) d.push_back(s.at(i, i));
        return d;
    }
};

namespace detail {

// Row op on s is E*s; keep a = u*s*v by u <- u*E^{-1}.
inline void row_swap(ZMat& s, ZMat& u, std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < s.nc; ++c) std::swap(s.at(i, c), s.at(j, c));
    for (std::size_t r = 0; r < u.nr; ++r) std::swap(u.at(r, i), u.at(r, j));
}
inline void row_addmul(ZMat& s, ZMat& u, std::size_t i, std::size_t k, const Int& q) {
    // row_i -= q * row_k  =>  col_k(u) += q * col_i(u)
    for (std::size_t c = 0; c < s.nc; ++c) s.at(i, c) -= q * s.at(k, c);
    for (std::size_t r = 0; r < u.nr; ++r) u.at(r, k) += q * u.at(r, i);
}
inline void row_negate(ZMat& s, ZMat& u, std::size_t i) {
    for (std::size_t c = 0; c < s.nc; ++c) s.at(i, c) = -s.at(i, c);
    for (std::size_t r = 0; r < u.nr; ++r) u.at(r, i) = -u.at(r, i);
}
inline void col_swap(ZMat& s, ZMat& v, std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < s.nr; ++r) std::swap(s.at(r, i), s.at(r, j));
    for (std::size_t c = 0; c < v.nc; ++c) std::swap(v.at(i, c), v.at(j, c));
}
inline void col_addmul(ZMat& s, ZMat& v, std::size_t j, std::size_t k, const Int& q) {
    // col_j -= q * col_k  =>  row_k(v) += q * row_j(v)
    for (std::size_t r = 0; r < s.nr; ++r) s.at(r, j) -= q * s.at(r, k);
    for (std::size_t c = 0; c < v.nc; ++c) v.at(k, c) += q * v.at(j, c);
}

} // namespace detail

// Pivot rule: smallest absolute value among nonzero candidates, ties by lowest
// (row, col). Deterministic so downstream canonical forms are reproducible.
inline SmithDecomposition smith_normal_form(const ZMat& a) {
    SmithDecomposition r{ZMat::identity(a.nr), a, ZMat::identity(a.nc)};
    ZMat& s = r.s;
    std::size_t k = 0;
    const std::size_t kmax = std::min(a.nr, a.nc);
    while (k < kmax) {
        std::size_t pi = 0, pj = 0;
        bool found = false;
        Int best;
        for (std::size_t i = k; i < s.nr; ++i)
            for (std::size_t j = k; j < s.nc; ++j) {
                if (s.at(i, j) == 0) continue;
                Int v = abs(s.at(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        if (pi != k) detail::row_swap(s, r.u, k, pi);
        if (pj != k) detail::col_swap(s, r.v, k, pj);
        if (s.at(k, k) < 0) detail::row_negate(s, r.u, k);

        bool dirty = false;
        for (std::size_t i = k + 1; i < s.nr; ++i) {
            if (s.at(i, k) == 0) continue;
            Int q = s.at(i, k) / s.at(k, k);
            detail::row_addmul(s, r.u, i, k, q);
            if (s.at(i, k) != 0) dirty = true; // remainder left, re-pivot
        }
        for (std::size_t j = k + 1; j < s.nc; ++j) {
            if (s.at(k, j) == 0) continue;
            Int q = s.at(k, j) / s.at(k, k);
            detail::col_addmul(s, r.v, j, k, q);
            if (s.at(k, j) != 0) dirty = true;
        }
        if (dirty) continue; // smaller pivot now exists in the block

        // divisibility fix-up: fold a bad entry into row k and redo
        const Int& d = s.at(k, k);
        bool fixed = false;
        for (std::size_t i = k + 1; i < s.nr && !fixed; ++i)
            for (std::size_t j = k + 1; j < s.nc && !fixed; ++j)
                if (s.at(i, j) % d != 0) {
                    detail::row_addmul(s, r.u, k, i, Int(-1)); // row_k += row_i
                    fixed = true;
                }
        if (!fixed) ++k;
    }
    return r;
}

// Index of the column span of `gens` in Z^rows; nullopt means infinite
// (rank-deficient span).
inline std::optional<Int> lattice_index(const ZMat& gens) {
    auto snf = smith_normal_form(gens);
    ZVec d = snf.divisors();
    if (d.size() < gens.nr) return std::nullopt;
    Int idx = 1;
    for (const auto& x : d) idx *= x;
    return idx;
}

// Column-style Hermite form of the lattice spanned by the columns: pivot rows
// strictly increasing, pivots positive, entries left of a pivot reduced into
// [0, pivot). Unique per lattice, so it doubles as a canonical basis.
inline ZMat hnf_basis(const ZMat& gens) {
    ZMat h = gens;
    std::size_t r = 0;
    for (std::size_t row = 0; row < h.nr && r < h.nc; ++row) {
        for (;;) {
            std::size_t jbest = h.nc;
            for (std::size_t j = r; j < h.nc; ++j) {
                if (h.at(row, j) == 0) continue;
                if (jbest == h.nc || abs(h.at(row, j)) < abs(h.at(row, jbest))) jbest = j;
            }
            if (jbest == h.nc) break;
            if (jbest != r)
                for (std::size_t i = 0; i < h.nr; ++i) std::swap(h.at(i, r), h.at(i, jbest));
            bool clean = true;
            for (std::size_t j = r + 1; j < h.nc; ++j) {
                if (h.at(row, j) == 0) continue;
                Int q = h.at(row, j) / h.at(row, r);
                for (std::size_t i = 0; i < h.nr; ++i) h.at(i, j) -= q * h.at(i, r);
                if (h.at(row, j) != 0) clean = false;
            }
            if (clean) break;
        }
        if (h.at(row, r) == 0) continue;
        if (h.at(row, r) < 0)
            for (std::size_t i = 0; i < h.nr; ++i) h.at(i, r) = -h.at(i, r);
        for (std::size_t j = 0; j < r; ++j) {
            // keep earlier columns reduced at this pivot row
            Int q = h.at(row, j) / h.at(row, r);
            if (h.at(row, j) - q * h.at(row, r) < 0) q -= 1;
            for (std::size_t i = 0; i < h.nr; ++i) h.at(i, j) -= q * h.at(i, r);
        }
        ++r;
    }
    ZMat out(h.nr, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < h.nr; ++i) out.at(i, j) = h.at(i, j);
    return out;
}

// Canonical basis of (Q-span of the columns) intersected with Z^rows.
// From a = u s v: the span is generated over Q by the first rank columns of u,
// and those columns span a saturated sublattice.
inline ZMat saturate(const ZMat& gens) {
    auto snf = smith_normal_form(gens);
    std::size_t rk = snf.divisors().size();
    ZMat sat(gens.nr, rk);
    for (std::size_t j = 0; j < rk; ++j)
        for (std::size_t i = 0; i < gens.nr; ++i) sat.at(i, j) = snf.u.at(i, j);
    return hnf_basis(sat);
}

// Integer coordinates of v in the column basis `basis`; nullopt when v is not
// in the integer span.
inline std::optional<ZVec> int_coords(const ZMat& basis, const ZVec& v) {
    auto x = solve(to_q(basis), to_q(v));
    if (!x) return std::nullopt;
    ZVec z(x->size());
    for (std::size_t i = 0; i < x->size(); ++i) {
        if (!is_integer((*x)[i])) return std::nullopt;
        z[i] = num((*x)[i]);
    }
    return z;
}

// Index [span(sup) : span(sub)] for two full-rank-in-each-other lattices given
// by column generators; sub must lie inside span(sup).
inline std::optional<Int> relative_lattice_index(const ZMat& sup, const ZMat& sub) {
    ZMat coords(sup.nc, sub.nc);
    for (std::size_t j = 0; j < sub.nc; ++j) {
        auto c = int_coords(sup, sub.col(j));
        if (!c) throw internal_error("relative_lattice_index: sub not inside sup");
        for (std::size_t i = 0; i < sup.nc; ++i) coords.at(i, j) = (*c)[i];
    }
    return lattice_index(coords);
}

// The generator of N_sigma / N_tau = Z, signed so that it points from tau into
// sigma (positive coefficient on the witness direction). tau_basis and
// sigma_basis are saturated column bases with rank(sigma) = rank(tau) + 1; the
// witness is any vector pointing from tau into the relative interior of sigma.
inline ZVec primitive_generator(const ZMat& tau_basis, const ZMat& sigma_basis,
                                const QVec& witness) {
    const std::size_t rk = sigma_basis.nc;
    if (tau_basis.nc + 1 != rk)
        throw input_error("primitive_generator: rank(sigma) must be rank(tau) + 1");
    ZMat t(rk, tau_basis.nc);
    for (std::size_t j = 0; j < tau_basis.nc; ++j) {
        auto c = int_coords(sigma_basis, tau_basis.col(j));
        if (!c) throw input_error("primitive_generator: tau lattice not inside sigma lattice");
        for (std::size_t i = 0; i < rk; ++i) t.at(i, j) = (*c)[i];
    }
    auto snf = smith_normal_form(t);
    for (const auto& d : snf.divisors())
        if (d != 1) throw input_error("primitive_generator: tau not saturated in sigma");
    ZVec omega_c = snf.u.col(rk - 1);
    ZVec omega = mat_vec(sigma_basis, omega_c);

    // sign: write witness = alpha * omega + (tau part), need alpha > 0
    QMat ext(sigma_basis.nr, tau_basis.nc + 1);
    for (std::size_t j = 0; j < tau_basis.nc; ++j)
        for (std::size_t i = 0; i < ext.nr; ++i) ext.at(i, j) = Rat(tau_basis.at(i, j));
    for (std::size_t i = 0; i < ext.nr; ++i) ext.at(i, tau_basis.nc) = Rat(omega[i]);
    auto y = solve(ext, witness);
    if (!y) throw input_error("primitive_generator: witness not in span(sigma)");
    const Rat& alpha = (*y)[tau_basis.nc];
    if (alpha == 0) throw input_error("primitive_generator: witness lies in span(tau)");
    if (alpha < 0)
        for (auto& x : omega) x = -x;
    return omega;
}

// Deterministic enumeration of Z^n \ {0}: shells of increasing max-norm,
// within a shell an odometer over per-coordinate digits 0, 1, -1, 2, -2, ...
// with coordinate 0 fastest. Vectors of smaller norm were emitted in an
// earlier shell and get skipped.
struct ZVecEnumerator {
    std::size_t n;
    long shell = 1;
    std::vector<long> digit_idx; // 0..2*shell, maps to 0, 1, -1, 2, -2, ...
    explicit ZVecEnumerator(std::size_t n_) : n(n_), digit_idx(n_, 0) {}

    static long digit(long idx) {
        if (idx == 0) return 0;
        return idx % 2 == 1 ? (idx + 1) / 2 : -(idx / 2);
    }

    ZVec next() {
        for (;;) {
            const long cur_shell = shell;
            ZVec v(n);
            long maxabs = 0;
            for (std::size_t i = 0; i < n; ++i) {
                long dg = digit(digit_idx[i]);
                v[i] = dg;
                maxabs = std::max(maxabs, std::abs(dg));
            }
            const long top = 2 * shell;
            std::size_t i = 0;
            for (; i < n; ++i) {
                if (digit_idx[i] < top) {
                    ++digit_idx[i];
                    break;
                }
                digit_idx[i] = 0;
            }
            if (i == n) { // shell exhausted
                ++shell;
                std::fill(digit_idx.begin(), digit_idx.end(), 0);
            }
            if (maxabs == cur_shell) return v;
        }
    }
};

// Smallest (in the documented enumeration order) integer matrix q with d rows
// that keeps every span at full rank: rank(q * b) = rank(b) for each b, and q
// itself surjective. Greedy row by row; each new row must strictly increase
// rank on every still-deficient span and on q.
inline ZMat generic_projection(const std::vector<ZMat>& spans, std::size_t d) {
    if (spans.empty()) throw input_error("generic_projection: no spans given");
    const std::size_t n = spans.front().nr;
    std::vector<std::size_t> target(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (spans[i].nr != n) throw input_error("generic_projection: mixed ambient dims");
        target[i] = rank(spans[i]);
        if (target[i] > d)
            throw input_error("generic_projection: span of rank > d, no projection exists");
    }
    std::vector<ZVec> rows;
    std::vector<std::size_t> got(spans.size(), 0); // rank achieved so far per span
    auto span_rank_with = [&](const ZMat& b, const ZVec& extra) {
        QMat prod(rows.size() + 1, b.nc);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < b.nc; ++j)
                prod.at(i, j) = Rat(dot(rows[i], b.col(j)));
        for (std::size_t j = 0; j < b.nc; ++j)
            prod.at(rows.size(), j) = Rat(dot(extra, b.col(j)));
        return rank(prod);
    };
    ZVecEnumerator en(n);
    while (rows.size() < d) {
        ZVec u = en.next();
        bool ok = true;
        for (std::size_t i = 0; i < spans.size() && ok; ++i) {
            if (got[i] >= target[i]) continue;
            ok = span_rank_with(spans[i], u) == got[i] + 1;
        }
        if (ok) { // also require progress on q itself
            QMat qm(rows.size() + 1, n);
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < n; ++j) qm.at(i, j) = Rat(rows[i][j]);
            for (std::size_t j = 0; j < n; ++j) qm.at(rows.size(), j) = Rat(u[j]);
            ok = rank(qm) == rows.size() + 1;
        }
        if (!ok) continue;
        rows.push_back(u);
        for (std::size_t i = 0; i < spans.size(); ++i)
            if (got[i] < target[i]) ++got[i];
    }
    return from_rows(n, rows);
}

} // namespace trop
