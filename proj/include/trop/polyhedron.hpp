#pragma once

#include "trop/lattice.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>

namespace trop {

// ---------------------------------------------------------------- cone engine

namespace dd {

struct Cone {
    std::vector<ZVec> rays; // extreme modulo lin, primitive
    std::vector<ZVec> lin;  // basis of the lineality space
};

using Tight = std::vector<bool>; // over the processed constraints

inline bool subset(const Tight& a, const Tight& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

// Double description for {y : c . y >= 0 for all c}. Lineality is eliminated
// first as constraints arrive; afterwards the classic ray-splitting step with
// the combinatorial adjacency test keeps the ray list minimal.
inline Cone cone(std::size_t dim, const std::vector<ZVec>& cons) {
    std::vector<ZVec> lin;
    for (std::size_t i = 0; i < dim; ++i) {
        ZVec e(dim);
        e[i] = 1;
        lin.push_back(e);
    }
    std::vector<ZVec> rays;
    std::vector<Tight> tight;

    for (std::size_t ci = 0; ci < cons.size(); ++ci) {
        const ZVec& b = cons[ci];
        if (is_zero_vec(b)) continue;

        std::size_t l0 = lin.size();
        for (std::size_t i = 0; i < lin.size(); ++i)
            if (dot(b, lin[i]) != 0) {
                l0 = i;
                break;
            }
        if (l0 != lin.size()) {
            ZVec piv = lin[l0];
            if (dot(b, piv) < 0)
                for (auto& x : piv) x = -x;
            const Int bp = dot(b, piv);
            std::vector<ZVec> nl;
            for (std::size_t i = 0; i < lin.size(); ++i) {
                if (i == l0) continue;
                const Int bl = dot(b, lin[i]);
                ZVec v(dim);
                for (std::size_t k = 0; k < dim; ++k) v[k] = bp * lin[i][k] - bl * piv[k];
                nl.push_back(primitive(v));
            }
            lin = std::move(nl);
            for (auto& r : rays) {
                const Int br = dot(b, r);
                if (br == 0) continue;
                for (std::size_t k = 0; k < dim; ++k) r[k] = bp * r[k] - br * piv[k];
                r = primitive(r);
            }
            rays.push_back(piv);
        } else {
            std::vector<Int> val(rays.size());
            for (std::size_t i = 0; i < rays.size(); ++i) val[i] = dot(b, rays[i]);
            std::vector<ZVec> next;
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (val[i] >= 0) next.push_back(rays[i]);
            for (std::size_t p = 0; p < rays.size(); ++p) {
                if (val[p] <= 0) continue;
                for (std::size_t q = 0; q < rays.size(); ++q) {
                    if (val[q] >= 0) continue;
                    Tight common(ci);
                    for (std::size_t k = 0; k < ci; ++k)
                        common[k] = tight[p][k] && tight[q][k];
                    bool adjacent = true;
                    for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
                        if (r != p && r != q && subset(common, tight[r])) adjacent = false;
                    if (!adjacent) continue;
                    ZVec v(dim);
                    for (std::size_t k = 0; k < dim; ++k)
                        v[k] = val[p] * rays[q][k] - val[q] * rays[p][k];
                    next.push_back(primitive(v));
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            rays = std::move(next);
        }

        tight.assign(rays.size(), Tight(ci + 1));
        for (std::size_t i = 0; i < rays.size(); ++i)
            for (std::size_t k = 0; k <= ci; ++k) tight[i][k] = dot(cons[k], rays[i]) == 0;
    }
    return {rays, lin};
}

} // namespace dd

// ------------------------------------------------------------- canonical reps

namespace detail {

// (u | c) with u . x + c >= 0, scaled to a primitive integer row.
inline ZVec integerize_row(const QVec& u, const Rat& c) {
    QVec full = u;
    full.push_back(c);
    return primitive(full);
}

// HNF columns have their pivot as the first nonzero entry. Reducing a vector
// against them zeroes its pivot coordinates; that is the canonical
// representative modulo the spanned subspace.
inline std::vector<std::size_t> pivot_rows(const std::vector<ZVec>& hnf_cols) {
    std::vector<std::size_t> p;
    for (const auto& col : hnf_cols) {
        std::size_t i = 0;
        while (i < col.size() && col[i] == 0) ++i;
        p.push_back(i);
    }
    return p;
}

inline void reduce_mod(QVec& v, const std::vector<ZVec>& hnf_cols,
                       const std::vector<std::size_t>& pivots) {
    for (std::size_t j = 0; j < hnf_cols.size(); ++j) {
        Rat f = v[pivots[j]] / Rat(hnf_cols[j][pivots[j]]);
        if (f == 0) continue;
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= f * Rat(hnf_cols[j][k]);
    }
}

inline ZVec reduce_mod_primitive(const ZVec& v, const std::vector<ZVec>& hnf_cols,
                                 const std::vector<std::size_t>& pivots) {
    QVec q = to_q(v);
    reduce_mod(q, hnf_cols, pivots);
    return primitive(q);
}

inline std::vector<ZVec> mat_cols(const ZMat& m) {
    std::vector<ZVec> c;
    for (std::size_t j = 0; j < m.nc; ++j) c.push_back(m.col(j));
    return c;
}

} // namespace detail

// A closed rational polyhedron with both descriptions kept canonical, so two
// polyhedra are equal as point sets iff their keys coincide.
struct Polyhedron {
    std::size_t n = 0;
    bool is_empty = true;
    std::vector<ZVec> eqs;   // rows (u|c): u.x + c = 0; canonical basis
    std::vector<ZVec> ineqs; // rows (u|c): u.x + c >= 0; facets, canonical
    std::vector<QVec> vertices;
    std::vector<ZVec> rays;      // recession, primitive, reduced mod lineality
    std::vector<ZVec> lineality; // HNF basis columns of the lineality lattice
    ZMat span_cols;              // saturated basis of the difference lattice
    int dim = -1;

    const std::string& key() const { return key_; }

    bool contains(const QVec& x) const {
        if (is_empty) return false;
        for (const auto& e : eqs)
            if (eval_row(e, x) != 0) return false;
        for (const auto& i : ineqs)
            if (eval_row(i, x) < 0) return false;
        return true;
    }

    static Rat eval_row(const ZVec& row, const QVec& x) {
        Rat s(row.back());
        for (std::size_t i = 0; i < x.size(); ++i) s += Rat(row[i]) * x[i];
        return s;
    }

    // centroid of the vertices pushed along all recession rays
    QVec relint_point() const {
        if (is_empty) throw internal_error("relint_point of empty polyhedron");
        QVec p(n, Rat(0));
        for (const auto& v : vertices)
            for (std::size_t i = 0; i < n; ++i) p[i] += v[i];
        for (std::size_t i = 0; i < n; ++i) p[i] /= Rat(Int(vertices.size()));
        for (const auto& r : rays)
            for (std::size_t i = 0; i < n; ++i) p[i] += Rat(r[i]);
        return p;
    }

    QVec anchor() const {
        if (is_empty) throw internal_error("anchor of empty polyhedron");
        return vertices.front();
    }

    bool cone_form() const { // all defining constants zero
        for (const auto& e : eqs)
            if (e.back() != 0) return false;
        for (const auto& i : ineqs)
            if (i.back() != 0) return false;
        return true;
    }

    std::string key_;
};

namespace detail {

struct VData {
    std::vector<QVec> vertices;
    std::vector<ZVec> rays;
    std::vector<ZVec> lin;
};

struct HData {
    std::vector<ZVec> eqs;
    std::vector<ZVec> ineqs;
};

// H -> V through the homogenization cone {(x, t) : rows.(x,t) >= 0, t >= 0}.
// Returns canonical vertex/ray/lineality data, or nullopt for empty.
inline std::optional<VData> v_from_h(std::size_t n, const std::vector<ZVec>& ineq_rows,
                                     const std::vector<ZVec>& eq_rows) {
    std::vector<ZVec> cons;
    for (const auto& r : eq_rows) {
        cons.push_back(r);
        ZVec neg = r;
        for (auto& x : neg) x = -x;
        cons.push_back(neg);
    }
    for (const auto& r : ineq_rows) cons.push_back(r);
    ZVec tpos(n + 1);
    tpos[n] = 1;
    cons.push_back(tpos);

    auto cone = dd::cone(n + 1, cons);
    for (const auto& l : cone.lin)
        if (l[n] != 0) throw internal_error("homogenization lineality with t != 0");

    // canonical lineality lattice of the polyhedron
    std::vector<ZVec> lin_raw;
    for (const auto& l : cone.lin) lin_raw.push_back(ZVec(l.begin(), l.begin() + n));
    ZMat lin_sat = lin_raw.empty() ? ZMat(n, 0) : saturate(from_cols<Int>(n, lin_raw));
    auto lin_cols = mat_cols(lin_sat);
    auto lpiv = pivot_rows(lin_cols);

    VData out;
    out.lin = lin_cols;
    for (const auto& r : cone.rays) {
        if (r[n] == 0) {
            ZVec dir(r.begin(), r.begin() + n);
            out.rays.push_back(reduce_mod_primitive(dir, lin_cols, lpiv));
        } else {
            QVec v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = Rat(r[i]) / Rat(r[n]);
            reduce_mod(v, lin_cols, lpiv);
            out.vertices.push_back(std::move(v));
        }
    }
    if (out.vertices.empty()) return std::nullopt;
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()),
                       out.vertices.end());
    std::sort(out.rays.begin(), out.rays.end());
    out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
    return out;
}

// V -> H through the polar cone: constraints on (u, c) from generators.
inline HData h_from_v(std::size_t n, const VData& vd) {
    std::vector<ZVec> cons;
    for (const auto& v : vd.vertices) {
        QVec row = v;
        row.push_back(Rat(1));
        cons.push_back(primitive(row));
    }
    for (const auto& r : vd.rays) {
        ZVec row = r;
        row.push_back(0);
        cons.push_back(row);
    }
    for (const auto& l : vd.lin) {
        ZVec row = l;
        row.push_back(0);
        cons.push_back(row);
        ZVec neg = row;
        for (auto& x : neg) x = -x;
        cons.push_back(neg);
    }
    auto polar = dd::cone(n + 1, cons);

    HData out;
    ZMat eq_sat = polar.lin.empty() ? ZMat(n + 1, 0)
                                    : saturate(from_cols<Int>(n + 1, polar.lin));
    auto eq_cols = mat_cols(eq_sat);
    auto epiv = pivot_rows(eq_cols);
    for (const auto& c : eq_cols) out.eqs.push_back(c);

    for (const auto& f : polar.rays) {
        ZVec red = reduce_mod_primitive(f, eq_cols, epiv);
        bool trivial = true; // constant-only rows say nothing on the hull
        for (std::size_t i = 0; i < n; ++i)
            if (red[i] != 0) trivial = false;
        if (!trivial) out.ineqs.push_back(red);
    }
    std::sort(out.eqs.begin(), out.eqs.end());
    std::sort(out.ineqs.begin(), out.ineqs.end());
    out.ineqs.erase(std::unique(out.ineqs.begin(), out.ineqs.end()), out.ineqs.end());
    return out;
}

inline std::string make_key(std::size_t n, bool empty, const HData& h) {
    std::ostringstream os;
    os << "n" << n;
    if (empty) {
        os << "|empty";
        return os.str();
    }
    os << "|E";
    for (const auto& r : h.eqs) {
        os << "[";
        for (const auto& x : r) os << x << ",";
        os << "]";
    }
    os << "|I";
    for (const auto& r : h.ineqs) {
        os << "[";
        for (const auto& x : r) os << x << ",";
        os << "]";
    }
    return os.str();
}

inline Polyhedron assemble(std::size_t n, const VData& vd, const HData& hd) {
    Polyhedron p;
    p.n = n;
    p.is_empty = false;
    p.eqs = hd.eqs;
    p.ineqs = hd.ineqs;
    p.vertices = vd.vertices;
    p.rays = vd.rays;
    p.lineality = vd.lin;
    std::vector<ZVec> diffs;
    for (std::size_t i = 1; i < vd.vertices.size(); ++i) {
        QVec d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = vd.vertices[i][k] - vd.vertices[0][k];
        diffs.push_back(primitive(d));
    }
    for (const auto& r : vd.rays) diffs.push_back(r);
    for (const auto& l : vd.lin) diffs.push_back(l);
    p.span_cols = diffs.empty() ? ZMat(n, 0) : saturate(from_cols<Int>(n, diffs));
    p.dim = int(p.span_cols.nc);
    if (p.dim != int(n) - int(hd.eqs.size()))
        throw internal_error("polyhedron: dim disagrees with equality count");
    p.key_ = make_key(n, false, hd);
    return p;
}

inline Polyhedron empty_polyhedron(std::size_t n) {
    Polyhedron p;
    p.n = n;
    p.is_empty = true;
    p.dim = -1;
    p.span_cols = ZMat(n, 0);
    p.key_ = make_key(n, true, {});
    return p;
}

} // namespace detail

// rows are primitive integer (u | c) meaning u.x + c >= 0 resp. = 0
inline Polyhedron polyhedron_from_h_rows(std::size_t n, const std::vector<ZVec>& ineq_rows,
                                         const std::vector<ZVec>& eq_rows = {}) {
    auto vd = detail::v_from_h(n, ineq_rows, eq_rows);
    if (!vd) return detail::empty_polyhedron(n);
    auto hd = detail::h_from_v(n, *vd);
    return detail::assemble(n, *vd, hd);
}

inline Polyhedron polyhedron_from_h(std::size_t n,
                                    const std::vector<std::pair<QVec, Rat>>& ineqs,
                                    const std::vector<std::pair<QVec, Rat>>& eqs = {}) {
    std::vector<ZVec> irows, erows;
    for (const auto& [u, c] : ineqs) irows.push_back(detail::integerize_row(u, c));
    for (const auto& [u, c] : eqs) erows.push_back(detail::integerize_row(u, c));
    return polyhedron_from_h_rows(n, irows, erows);
}

inline Polyhedron polyhedron_from_v(std::size_t n, const std::vector<QVec>& vertices,
                                    const std::vector<QVec>& rays = {},
                                    const std::vector<QVec>& lineality = {}) {
    if (vertices.empty()) {
        if (!rays.empty() || !lineality.empty())
            throw input_error("v-representation without vertices");
        return detail::empty_polyhedron(n);
    }
    detail::VData vd;
    vd.vertices = vertices;
    for (const auto& r : rays) {
        ZVec p = primitive(r);
        if (is_zero_vec(p)) throw input_error("zero ray in v-representation");
        vd.rays.push_back(p);
    }
    for (const auto& l : lineality) {
        ZVec p = primitive(l);
        if (is_zero_vec(p)) throw input_error("zero lineality vector");
        vd.lin.push_back(p);
    }
    auto hd = detail::h_from_v(n, vd);
    auto vcan = detail::v_from_h(n, hd.ineqs, hd.eqs);
    if (!vcan) throw internal_error("nonempty v-rep became empty");
    return detail::assemble(n, *vcan, hd);
}

inline Polyhedron intersect(const Polyhedron& a, const Polyhedron& b) {
    if (a.n != b.n) throw internal_error("intersect: ambient mismatch");
    if (a.is_empty || b.is_empty) return detail::empty_polyhedron(a.n);
    std::vector<ZVec> ineq = a.ineqs, eq = a.eqs;
    ineq.insert(ineq.end(), b.ineqs.begin(), b.ineqs.end());
    eq.insert(eq.end(), b.eqs.begin(), b.eqs.end());
    return polyhedron_from_h_rows(a.n, ineq, eq);
}

// Codimension-one faces.
inline std::vector<Polyhedron> facets(const Polyhedron& p) {
    std::vector<Polyhedron> out;
    if (p.is_empty || p.dim == 0) return out;
    for (std::size_t i = 0; i < p.ineqs.size(); ++i) {
        std::vector<ZVec> eqs = p.eqs;
        eqs.push_back(p.ineqs[i]);
        Polyhedron f = polyhedron_from_h_rows(p.n, p.ineqs, eqs);
        if (!f.is_empty && f.dim == p.dim - 1) out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(),
              [](const Polyhedron& x, const Polyhedron& y) { return x.key() < y.key(); });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Polyhedron& x, const Polyhedron& y) {
                              return x.key() == y.key();
                          }),
              out.end());
    return out;
}

// All nonempty faces including p itself, sorted by key. The empty face is
// representable as a Polyhedron but is never listed.
inline std::vector<Polyhedron> faces(const Polyhedron& p) {
    std::map<std::string, Polyhedron> seen;
    std::vector<Polyhedron> work{p};
    if (p.is_empty) return {};
    seen.emplace(p.key(), p);
    while (!work.empty()) {
        Polyhedron cur = std::move(work.back());
        work.pop_back();
        for (auto& f : facets(cur))
            if (seen.emplace(f.key(), f).second) work.push_back(std::move(f));
    }
    std::vector<Polyhedron> out;
    for (auto& [k, f] : seen) out.push_back(std::move(f));
    return out;
}

} // namespace trop
