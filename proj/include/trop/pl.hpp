#pragma once

#include "trop/weighted.hpp"

namespace trop {

// One affine piece x -> u.x + c with integral slope.
struct AffPiece {
    ZVec u;
    Rat c;
};

inline Rat aff_eval(const AffPiece& a, const QVec& x) {
    Rat v = a.c;
    for (std::size_t i = 0; i < x.size(); ++i) v += Rat(a.u[i]) * x[i];
    return v;
}

// Piecewise linear function on the support of a complex. Every cell carries
// the affine form of some maximal cell containing it; construction checks the
// forms agree wherever cells meet.
struct PLFunction {
    PolyComplex dom;
    std::vector<AffPiece> aff; // indexed like dom.cells

    Rat eval(const QVec& x) const {
        auto c = dom.find_containing(x);
        if (!c) throw input_error("evaluation point outside the domain");
        return aff_eval(aff[*c], x);
    }
};

namespace detail {

// Do two affine forms agree on a cell? Equivalent to the difference vanishing
// at the anchor and along the linear span.
inline bool aff_agree_on(const AffPiece& f, const AffPiece& g, const Polyhedron& cell) {
    ZVec du(f.u.size());
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = f.u[i] - g.u[i];
    if (aff_eval(f, cell.anchor()) != aff_eval(g, cell.anchor())) return false;
    for (std::size_t j = 0; j < cell.span_cols.nc; ++j) {
        Int s = 0;
        for (std::size_t i = 0; i < du.size(); ++i) s += du[i] * cell.span_cols.at(i, j);
        if (s != 0) return false;
    }
    return true;
}

} // namespace detail

inline PLFunction make_pl(const PolyComplex& dom,
                          const std::vector<std::pair<std::size_t, AffPiece>>& top_data) {
    PLFunction f;
    f.dom = dom;
    std::map<std::size_t, AffPiece> given(top_data.begin(), top_data.end());
    for (const auto& [i, a] : given)
        if (a.u.size() != dom.n) throw input_error("affine piece of wrong dimension");
    f.aff.resize(dom.cells.size());
    for (std::size_t i = 0; i < dom.cells.size(); ++i) {
        auto it = given.find(i);
        if (it != given.end()) {
            f.aff[i] = it->second;
            continue;
        }
        // inherit from the first maximal cell having i as a face
        std::optional<std::size_t> owner;
        for (auto m : dom.maximal())
            if (dom.is_face(i, m) && given.count(m)) {
                owner = m;
                break;
            }
        if (!owner) throw input_error("no affine data covers cell " + std::to_string(i));
        f.aff[i] = given.at(*owner);
    }
    // continuity: a cell's form and each facet's form agree on the facet
    for (std::size_t i = 0; i < dom.cells.size(); ++i)
        for (auto fc : dom.faces_of[i])
            if (!detail::aff_agree_on(f.aff[i], f.aff[fc], dom.cells[fc]))
                throw input_error("affine pieces disagree along a face");
    return f;
}

// Globally affine function on all of R^n.
inline PLFunction pl_affine(std::size_t n, ZVec u, Rat c) {
    PolyComplex everything = build_complex(n, {polyhedron_from_h(n, {}, {})}, Check::off);
    return make_pl(everything, {{0, AffPiece{std::move(u), std::move(c)}}});
}

// max of finitely many affine forms; the domain is the arrangement of max-regions.
inline PLFunction max_pl(std::size_t n, const std::vector<AffPiece>& forms) {
    if (forms.empty()) throw input_error("max of no forms");
    for (const auto& a : forms)
        if (a.u.size() != n) throw input_error("affine piece of wrong dimension");
    std::vector<Polyhedron> regions;
    std::vector<std::size_t> which;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        std::vector<std::pair<QVec, Rat>> ineqs;
        for (std::size_t j = 0; j < forms.size(); ++j) {
            if (j == i) continue;
            QVec row(n);
            for (std::size_t k = 0; k < n; ++k) row[k] = Rat(forms[i].u[k] - forms[j].u[k]);
            ineqs.emplace_back(std::move(row), forms[i].c - forms[j].c);
        }
        Polyhedron p = polyhedron_from_h(n, ineqs);
        if (!p.is_empty && p.dim == int(n)) {
            regions.push_back(std::move(p));
            which.push_back(i);
        }
    }
    PolyComplex dom = build_complex(n, regions, Check::off);
    std::vector<std::pair<std::size_t, AffPiece>> data;
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < regions.size(); ++r) {
        std::size_t idx = dom.at(regions[r].key());
        if (seen.insert(idx).second) data.emplace_back(idx, forms[which[r]]);
    }
    return make_pl(dom, data);
}

// Integral affine map given cell by cell: x -> U.x + b.
struct AffMap {
    ZMat U; // n_out x n_in
    QVec b;
};

inline QVec aff_apply(const AffMap& m, const QVec& x) {
    QVec y(m.U.nr);
    for (std::size_t i = 0; i < m.U.nr; ++i) {
        y[i] = m.b[i];
        for (std::size_t j = 0; j < m.U.nc; ++j) y[i] += Rat(m.U.at(i, j)) * x[j];
    }
    return y;
}

// Piecewise integral affine map, stored componentwise.
struct PLMap {
    std::size_t n_in = 0, n_out = 0;
    std::vector<PLFunction> comps;

    QVec eval(const QVec& x) const {
        QVec y(n_out);
        for (std::size_t i = 0; i < n_out; ++i) y[i] = comps[i].eval(x);
        return y;
    }
};

inline PLMap make_plmap(std::size_t n_in, std::vector<PLFunction> comps) {
    PLMap m;
    m.n_in = n_in;
    m.n_out = comps.size();
    for (const auto& f : comps)
        if (f.dom.n != n_in) throw input_error("map component in wrong ambient space");
    m.comps = std::move(comps);
    return m;
}

inline PLMap affine_map(ZMat U, QVec b) {
    std::vector<PLFunction> comps;
    for (std::size_t i = 0; i < U.nr; ++i) {
        ZVec u(U.nc);
        for (std::size_t j = 0; j < U.nc; ++j) u[j] = U.at(i, j);
        comps.push_back(pl_affine(U.nc, std::move(u), b[i]));
    }
    return make_plmap(U.nc, std::move(comps));
}

// ------------------------------------------------------- refinement plumbing

// Weighted complex subdivided along a pool of hyperplanes. parent maps each
// weighted cell of the refinement to the weighted cell it came from.
struct SlicedComplex {
    WeightedComplex wc;
    std::map<std::size_t, std::size_t> parent;
};

inline SlicedComplex slice_weighted(const WeightedComplex& a, const std::vector<ZVec>& pool) {
    SlicedComplex out;
    std::vector<std::pair<Polyhedron, Int>> gens;
    std::map<std::string, std::size_t> origin;
    for (const auto& [idx, wt] : a.w)
        for (auto& piece : slice_cell(a.C.cells[idx], pool)) {
            origin.emplace(piece.key(), idx);
            gens.emplace_back(std::move(piece), wt);
        }
    out.wc = make_weighted(a.n, a.d, gens, Check::off);
    for (const auto& [key, idx] : origin) out.parent.emplace(out.wc.C.at(key), idx);
    return out;
}

// A on a refinement fine enough that f is affine on every weighted cell.
struct PLOnCells {
    WeightedComplex wc;
    std::map<std::size_t, AffPiece> aff;      // weighted cell -> form
    std::map<std::size_t, std::size_t> parent; // weighted cell -> cell of the input
};

// Same, for a piecewise affine map.
struct MapOnCells {
    std::size_t n_out = 0;
    WeightedComplex wc;
    std::map<std::size_t, AffMap> aff;
    std::map<std::size_t, std::size_t> parent;
};

namespace detail {

// The first cell of dom containing x; x in the relative interior of a sliced
// piece pins the piece inside that cell.
inline std::size_t covering_cell(const PolyComplex& dom, const QVec& x) {
    auto c = dom.find_containing(x);
    if (!c) throw input_error("support not contained in the function domain");
    return *c;
}

} // namespace detail

inline PLOnCells restrict_pl(const WeightedComplex& a, const PLFunction& f) {
    if (f.dom.n != a.n) throw input_error("restrict: ambient mismatch");
    PLOnCells out;
    auto sliced = slice_weighted(a, hyperplane_pool(f.dom));
    out.wc = std::move(sliced.wc);
    out.parent = std::move(sliced.parent);
    for (const auto& [idx, _] : out.wc.w) {
        std::size_t c = detail::covering_cell(f.dom, out.wc.C.cells[idx].relint_point());
        out.aff.emplace(idx, f.aff[c]);
    }
    return out;
}

inline MapOnCells restrict_map(const WeightedComplex& a, const PLMap& m) {
    if (m.n_in != a.n) throw input_error("restrict: ambient mismatch");
    MapOnCells out;
    out.n_out = m.n_out;
    std::vector<ZVec> pool;
    for (const auto& f : m.comps) {
        auto p = hyperplane_pool(f.dom);
        pool.insert(pool.end(), p.begin(), p.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    auto sliced = slice_weighted(a, pool);
    out.wc = std::move(sliced.wc);
    out.parent = std::move(sliced.parent);
    for (const auto& [idx, _] : out.wc.w) {
        QVec x = out.wc.C.cells[idx].relint_point();
        AffMap am;
        am.U = ZMat(m.n_out, a.n);
        am.b = QVec(m.n_out);
        for (std::size_t i = 0; i < m.n_out; ++i) {
            const PLFunction& f = m.comps[i];
            const AffPiece& piece = f.aff[detail::covering_cell(f.dom, x)];
            for (std::size_t j = 0; j < a.n; ++j) am.U.at(i, j) = piece.u[j];
            am.b[i] = piece.c;
        }
        out.aff.emplace(idx, std::move(am));
    }
    return out;
}

// Further subdivide a MapOnCells so that g becomes affine after composing
// with it, and record the composed forms. Used for pullbacks along maps.
inline PLOnCells compose_on_cells(const PLFunction& g, const MapOnCells& mc) {
    if (g.dom.n != mc.n_out) throw input_error("compose: ambient mismatch");
    // pull every hyperplane of g's domain back through each cell's affine map
    std::vector<ZVec> pool;
    auto gpool = hyperplane_pool(g.dom);
    for (const auto& [idx, am] : mc.aff)
        for (const auto& h : gpool) {
            // h is (w | c) meaning w.x + c  >=/== 0; pull back to w.(Ux+b)+c
            QVec row(mc.wc.n);
            for (std::size_t j = 0; j < mc.wc.n; ++j) {
                Rat s = 0;
                for (std::size_t i = 0; i < mc.n_out; ++i) s += Rat(h[i]) * Rat(am.U.at(i, j));
                row[j] = s;
            }
            Rat cst(h[mc.n_out]);
            for (std::size_t i = 0; i < mc.n_out; ++i) cst += Rat(h[i]) * am.b[i];
            bool linear_zero = true;
            for (const auto& v : row)
                if (v != 0) linear_zero = false;
            if (linear_zero) continue;
            QVec qfull(mc.wc.n + 1);
            for (std::size_t j = 0; j < mc.wc.n; ++j) qfull[j] = row[j];
            qfull[mc.wc.n] = cst;
            pool.push_back(detail::norm_hyperplane(primitive(qfull)));
        }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    auto sliced = slice_weighted(mc.wc, pool);
    PLOnCells out;
    out.wc = std::move(sliced.wc);
    for (const auto& [idx, _] : out.wc.w) {
        std::size_t mid = sliced.parent.at(idx);
        out.parent.emplace(idx, mc.parent.at(mid));
        const AffMap& am = mc.aff.at(mid);
        QVec y = aff_apply(am, out.wc.C.cells[idx].relint_point());
        const AffPiece& gp = g.aff[detail::covering_cell(g.dom, y)];
        AffPiece comp;
        comp.u = ZVec(out.wc.n, Int(0));
        for (std::size_t j = 0; j < out.wc.n; ++j)
            for (std::size_t i = 0; i < mc.n_out; ++i)
                comp.u[j] += gp.u[i] * am.U.at(i, j);
        comp.c = gp.c;
        for (std::size_t i = 0; i < mc.n_out; ++i) comp.c += Rat(gp.u[i]) * am.b[i];
        out.aff.emplace(idx, std::move(comp));
    }
    return out;
}

// Same subdivision logic, composing two maps instead.
inline MapOnCells compose_maps_on_cells(const PLMap& g, const MapOnCells& mc) {
    if (g.n_in != mc.n_out) throw input_error("compose: ambient mismatch");
    std::vector<ZVec> pool;
    std::vector<ZVec> gpool;
    for (const auto& f : g.comps) {
        auto p = hyperplane_pool(f.dom);
        gpool.insert(gpool.end(), p.begin(), p.end());
    }
    std::sort(gpool.begin(), gpool.end());
    gpool.erase(std::unique(gpool.begin(), gpool.end()), gpool.end());
    for (const auto& [idx, am] : mc.aff)
        for (const auto& h : gpool) {
            QVec row(mc.wc.n);
            for (std::size_t j = 0; j < mc.wc.n; ++j) {
                Rat s = 0;
                for (std::size_t i = 0; i < mc.n_out; ++i) s += Rat(h[i]) * Rat(am.U.at(i, j));
                row[j] = s;
            }
            Rat cst(h[mc.n_out]);
            for (std::size_t i = 0; i < mc.n_out; ++i) cst += Rat(h[i]) * am.b[i];
            bool linear_zero = true;
            for (const auto& v : row)
                if (v != 0) linear_zero = false;
            if (linear_zero) continue;
            QVec qfull(mc.wc.n + 1);
            for (std::size_t j = 0; j < mc.wc.n; ++j) qfull[j] = row[j];
            qfull[mc.wc.n] = cst;
            pool.push_back(detail::norm_hyperplane(primitive(qfull)));
        }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    auto sliced = slice_weighted(mc.wc, pool);
    MapOnCells out;
    out.n_out = g.n_out;
    out.wc = std::move(sliced.wc);
    for (const auto& [idx, _] : out.wc.w) {
        std::size_t mid = sliced.parent.at(idx);
        out.parent.emplace(idx, mc.parent.at(mid));
        const AffMap& am = mc.aff.at(mid);
        QVec y = aff_apply(am, out.wc.C.cells[idx].relint_point());
        AffMap comp;
        comp.U = ZMat(g.n_out, out.wc.n);
        comp.b = QVec(g.n_out);
        for (std::size_t i = 0; i < g.n_out; ++i) {
            const PLFunction& f = g.comps[i];
            const AffPiece& gp = f.aff[detail::covering_cell(f.dom, y)];
            for (std::size_t j = 0; j < out.wc.n; ++j) {
                Int s = 0;
                for (std::size_t k = 0; k < mc.n_out; ++k) s += gp.u[k] * am.U.at(k, j);
                comp.U.at(i, j) = s;
            }
            comp.b[i] = gp.c;
            for (std::size_t k = 0; k < mc.n_out; ++k) comp.b[i] += Rat(gp.u[k]) * am.b[k];
        }
        out.aff.emplace(idx, std::move(comp));
    }
    return out;
}

} // namespace trop
