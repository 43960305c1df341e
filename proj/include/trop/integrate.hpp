#pragma once

#include "trop/cycles.hpp"
#include "trop/superform.hpp"

namespace trop {

// ---------------------------------------------------- exact polytope volume

namespace detail {

// Triangulation by recursive coning from the first (canonically lowest)
// vertex over the facets not containing it.
inline void triangulate_rec(const Polyhedron& p, int dim,
                            std::vector<QVec>& chain, std::vector<std::vector<QVec>>& out) {
    if (dim == 0) {
        auto simplex = chain;
        simplex.push_back(p.vertices.front());
        out.push_back(std::move(simplex));
        return;
    }
    const QVec& apex = p.vertices.front();
    if (int(p.vertices.size()) == dim + 1) {
        auto simplex = chain;
        for (const auto& v : p.vertices) simplex.push_back(v);
        out.push_back(std::move(simplex));
        return;
    }
    chain.push_back(apex);
    for (const auto& f : facets(p))
        if (!f.contains(apex)) triangulate_rec(f, dim - 1, chain, out);
    chain.pop_back();
}

// Lebesgue integral of g over a bounded full-dimensional polytope in R^d.
inline Rat integrate_polytope(const Polyhedron& p, const Poly& g) {
    std::size_t d = p.n;
    if (g.n != d) throw internal_error("integrate_polytope: arity mismatch");
    if (!p.rays.empty() || !p.lineality.empty())
        throw input_error("non-compact support");
    if (g.is_zero() || p.is_empty) return Rat(0);
    if (d == 0) return poly_eval(g, QVec{});
    if (p.dim != int(d)) throw internal_error("integrate_polytope: not full-dimensional");
    std::vector<std::vector<QVec>> simplices;
    std::vector<QVec> chain;
    triangulate_rec(p, int(d), chain, simplices);
    // factorial table up to the largest |exponent| + d
    auto factorial = [](unsigned m) {
        Int f = 1;
        for (unsigned i = 2; i <= m; ++i) f *= i;
        return f;
    };
    Rat total = 0;
    for (const auto& s : simplices) {
        // x = s0 + M t over the standard simplex
        QMat m(d, d);
        for (std::size_t j = 0; j + 1 < s.size(); ++j)
            for (std::size_t i = 0; i < d; ++i) m.at(i, j) = s[j + 1][i] - s[0][i];
        Rat vol_factor = det(m);
        if (vol_factor < 0) vol_factor = -vol_factor;
        if (vol_factor == 0) continue;
        Poly h = substitute_affine(g, m, s[0]);
        Rat acc = 0;
        for (const auto& [e, c] : h.c) {
            unsigned tot = 0;
            Int numer = 1;
            for (auto k : e) {
                tot += k;
                numer *= factorial(k);
            }
            acc += c * Rat(numer, factorial(tot + unsigned(d)));
        }
        total += vol_factor * acc;
    }
    return total;
}

// A cell pulled into the coordinates of its own lattice basis.
struct CellChart {
    ZMat basis;  // span_cols of the cell: saturated lattice basis
    QVec anchor;
    Polyhedron shape; // the cell in basis coordinates, ambient R^dim
};

inline QVec chart_coords(const ZMat& basis, const QVec& anchor, const QVec& x) {
    QVec rhs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = x[i] - anchor[i];
    auto c = solve(to_q(basis), rhs);
    if (!c) throw internal_error("chart_coords: point outside the span");
    return *c;
}

inline CellChart make_chart(const Polyhedron& cell) {
    CellChart ch;
    ch.basis = cell.span_cols;
    ch.anchor = cell.anchor();
    std::size_t d = ch.basis.nc;
    std::vector<QVec> verts, rays, lin;
    for (const auto& v : cell.vertices) verts.push_back(chart_coords(ch.basis, ch.anchor, v));
    QVec zero(cell.n, Rat(0));
    for (const auto& r : cell.rays) rays.push_back(chart_coords(ch.basis, zero, to_q(r)));
    for (const auto& l : cell.lineality) lin.push_back(chart_coords(ch.basis, zero, to_q(l)));
    ch.shape = polyhedron_from_v(d, verts, rays, lin);
    return ch;
}

// Sub-polyhedron of the cell expressed in the cell's chart.
inline Polyhedron chart_image(const CellChart& ch, const Polyhedron& sub) {
    std::vector<QVec> verts, rays, lin;
    for (const auto& v : sub.vertices) verts.push_back(chart_coords(ch.basis, ch.anchor, v));
    QVec zero(ch.basis.nr, Rat(0));
    for (const auto& r : sub.rays) rays.push_back(chart_coords(ch.basis, zero, to_q(r)));
    for (const auto& l : sub.lineality) lin.push_back(chart_coords(ch.basis, zero, to_q(l)));
    return polyhedron_from_v(ch.basis.nc, verts, rays, lin);
}

} // namespace detail

// Integral of a (d,d)-form over one d-cell with the lattice-normalized
// measure. Normal ordering d's_1..d's_d ^ d''s_1..d''s_d differs from the
// interleaved Lebesgue normalization by (-1)^(d(d-1)/2).
inline Rat integrate_cell(const Polyhedron& cell, const LagerbergForm& w) {
    if (w.n != cell.n) throw input_error("integrate_cell: ambient mismatch");
    int d = cell.dim;
    if (w.p != d || w.q != d) throw input_error("integrate_cell: bidegree mismatch");
    if (w.is_zero()) return Rat(0);
    auto ch = detail::make_chart(cell);
    LagerbergForm pulled = pullback(w, ch.basis, ch.anchor);
    if (pulled.is_zero()) return Rat(0);
    if (!cell.rays.empty() || !cell.lineality.empty())
        throw input_error("non-compact support");
    if (d == 0) {
        // single term with empty index tuples, constant coefficient
        return poly_eval(pulled.terms.begin()->second, QVec{});
    }
    // one normal-ordered top term remains after the pullback
    const Poly& g = pulled.terms.begin()->second;
    Rat val = detail::integrate_polytope(ch.shape, g);
    return (d * (d - 1) / 2) % 2 ? -val : val;
}

// ------------------------------------------- forms attached to a complex

// Cellwise polynomial form: every maximal cell of dom carries a plain form.
// Continuity across faces is only required by the identities that need it.
struct FormField {
    PolyComplex dom;
    std::map<std::size_t, LagerbergForm> forms;
};

inline FormField uniform_field(std::size_t n, const LagerbergForm& w) {
    if (w.n != n) throw input_error("uniform_field: ambient mismatch");
    FormField f;
    f.dom = build_complex(n, {polyhedron_from_h(n, {})}, Check::off);
    f.forms.emplace(f.dom.maximal().front(), w);
    return f;
}

inline FormField make_field(PolyComplex dom,
                            const std::vector<std::pair<std::size_t, LagerbergForm>>& data) {
    FormField f;
    f.dom = std::move(dom);
    std::optional<std::pair<int, int>> bideg;
    for (const auto& [i, w] : data) {
        if (w.n != f.dom.n) throw input_error("make_field: ambient mismatch");
        if (bideg && (bideg->first != w.p || bideg->second != w.q))
            throw input_error("make_field: mixed bidegrees");
        bideg = {w.p, w.q};
        if (!f.forms.emplace(i, w).second) throw input_error("make_field: duplicate cell");
    }
    for (auto m : f.dom.maximal())
        if (!f.forms.count(m)) throw input_error("make_field: maximal cell without a form");
    return f;
}

namespace detail {

inline const LagerbergForm& field_at(const FormField& f, const QVec& x) {
    for (auto m : f.dom.maximal())
        if (f.dom.cells[m].contains(x)) return f.forms.at(m);
    throw input_error("support not contained in the form domain");
}

} // namespace detail

// A weighted complex refined so every weighted cell carries one plain form.
struct FormOnCells {
    WeightedComplex wc;
    std::map<std::size_t, LagerbergForm> forms;
};

inline FormOnCells resolve_field(const WeightedComplex& a, const FormField& f) {
    if (f.dom.n != a.n) throw input_error("resolve_field: ambient mismatch");
    auto sliced = slice_weighted(a, hyperplane_pool(f.dom));
    FormOnCells out;
    out.wc = std::move(sliced.wc);
    for (const auto& [idx, _] : out.wc.w)
        out.forms.emplace(idx, detail::field_at(f, out.wc.C.cells[idx].relint_point()));
    return out;
}

inline Rat integrate(const FormOnCells& fc) {
    Rat total = 0;
    for (const auto& [idx, wt] : fc.wc.w)
        total += Rat(wt) * integrate_cell(fc.wc.C.cells[idx], fc.forms.at(idx));
    return total;
}

inline Rat integrate(const WeightedComplex& a, const FormField& f) {
    return integrate(resolve_field(a, f));
}

inline Rat integrate(const WeightedComplex& a, const LagerbergForm& w) {
    return integrate(a, uniform_field(a.n, w));
}

// ------------------------------------------------------ boundary integrals

namespace detail {

// Interior product on the d' block: position sign (-1)^k for removing the
// k-th listed index.
inline LagerbergForm contract_prime(const LagerbergForm& a, const ZVec& w) {
    LagerbergForm r = form_zero(a.n, a.p - 1, a.q);
    for (const auto& [key, c] : a.terms)
        for (std::size_t k = 0; k < key.first.size(); ++k) {
            if (w[key.first[k]] == 0) continue;
            Idx rest = key.first;
            rest.erase(rest.begin() + std::ptrdiff_t(k));
            Rat s = Rat(w[key.first[k]]) * (k % 2 ? Rat(-1) : Rat(1));
            add_to(r, std::move(rest), key.second, s * c);
        }
    return r;
}

// Interior product on the d'' block; crossing the d' block costs (-1)^|I|.
inline LagerbergForm contract_second(const LagerbergForm& a, const ZVec& w) {
    LagerbergForm r = form_zero(a.n, a.p, a.q - 1);
    for (const auto& [key, c] : a.terms) {
        int cross = key.first.size() % 2 ? -1 : 1;
        for (std::size_t k = 0; k < key.second.size(); ++k) {
            if (w[key.second[k]] == 0) continue;
            Idx rest = key.second;
            rest.erase(rest.begin() + std::ptrdiff_t(k));
            Rat s = Rat(cross) * Rat(w[key.second[k]]) * (k % 2 ? Rat(-1) : Rat(1));
            add_to(r, key.first, std::move(rest), s * c);
        }
    }
    return r;
}

enum class Slot { prime, second };

// One cell's contribution across one of its codimension-one faces: pull the
// form into the cell chart, contract the requested slot with the inward
// primitive of the face, and integrate over the face. No global sign, no
// weight.
inline Rat face_contribution(const Polyhedron& sigma, const Polyhedron& tau,
                             const LagerbergForm& w, Slot slot) {
    if (w.is_zero()) return Rat(0);
    if (!sigma.rays.empty() || !sigma.lineality.empty())
        throw input_error("non-compact support");
    auto ch = make_chart(sigma);
    LagerbergForm pulled = pullback(w, ch.basis, ch.anchor);
    if (pulled.is_zero()) return Rat(0);
    Polyhedron tau_s = chart_image(ch, tau);
    ZVec inward = facet_primitive(tau_s, ch.shape);
    LagerbergForm c = slot == Slot::prime ? contract_prime(pulled, inward)
                                          : contract_second(pulled, inward);
    return integrate_cell(tau_s, c);
}

} // namespace detail

struct BoundaryReport {
    Rat total;
    std::map<std::size_t, Rat> per_face; // (d-1)-cell index -> contribution
};

// Boundary pairing of a (d,d-1)- or (d-1,d)-form over the weighted complex.
// The global signs are calibrated once on [0,1] so that stokes_check holds:
// +1 when contracting the d' slot, -1 when contracting the d'' slot.
inline BoundaryReport boundary_integrate(const FormOnCells& fc) {
    const WeightedComplex& a = fc.wc;
    int d = a.d;
    std::optional<detail::Slot> slot;
    for (const auto& [_, w] : fc.forms) {
        if (w.is_zero()) continue;
        if (w.p == d && w.q == d - 1)
            slot = detail::Slot::prime;
        else if (w.p == d - 1 && w.q == d)
            slot = detail::Slot::second;
        else
            throw input_error("boundary_integrate: bidegree must be (d,d-1) or (d-1,d)");
        break;
    }
    BoundaryReport rep;
    rep.total = 0;
    if (!slot) return rep; // all forms zero
    Rat global = *slot == detail::Slot::prime ? Rat(1) : Rat(-1);
    for (auto tau_idx : a.C.of_dim(d - 1)) {
        Rat here = 0;
        for (const auto& [sigma_idx, wt] : a.w) {
            if (!a.C.is_face(tau_idx, sigma_idx)) continue;
            here += Rat(wt) * detail::face_contribution(a.C.cells[sigma_idx],
                                                        a.C.cells[tau_idx],
                                                        fc.forms.at(sigma_idx), *slot);
        }
        here *= global;
        rep.per_face.emplace(tau_idx, here);
        rep.total += here;
    }
    return rep;
}

inline BoundaryReport boundary_integrate(const WeightedComplex& a, const FormField& f) {
    return boundary_integrate(resolve_field(a, f));
}

// --------------------------------------------------------- identity checks

struct CurrentPairingReport {
    Rat lhs;
    Rat rhs;
    Rat boundary_term;
    std::string identity_name;
    bool holds = false;
};

// d''-Stokes for (d,d-1)-forms, d'-Stokes for (d-1,d)-forms: the weighted
// integral of the derivative against the boundary pairing.
inline CurrentPairingReport stokes_check(const WeightedComplex& a, const FormField& f) {
    FormOnCells fc = resolve_field(a, f);
    int d = a.d;
    FormOnCells deriv;
    deriv.wc = fc.wc;
    std::optional<bool> second;
    for (const auto& [idx, w] : fc.forms) {
        // the declared bidegree decides the channel, zero or not; resolve
        // keeps it uniform across cells
        if (w.p == d && w.q == d - 1)
            second = true;
        else if (w.p == d - 1 && w.q == d)
            second = false;
        else if (!w.is_zero())
            throw input_error("stokes_check: bidegree must be (d,d-1) or (d-1,d)");
        if (second) break;
    }
    CurrentPairingReport rep;
    if (!second) { // nothing to integrate either way
        rep.identity_name = "stokes-d''";
        rep.holds = true;
        return rep;
    }
    for (const auto& [idx, w] : fc.forms)
        deriv.forms.emplace(idx, *second ? d_second(w) : d_prime(w));
    rep.identity_name = *second ? "stokes-d''" : "stokes-d'";
    rep.lhs = integrate(deriv);
    rep.rhs = boundary_integrate(fc).total;
    rep.boundary_term = 0;
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

// Symmetric Green identity: integrate (w ^ d'd''e - d'd''w ^ e) against the
// boundary pairing of (w ^ d''e - d''w ^ e).
inline CurrentPairingReport green_check(const WeightedComplex& a, const FormField& omega,
                                        const FormField& eta) {
    std::vector<ZVec> pool = hyperplane_pool(omega.dom);
    {
        auto pe = hyperplane_pool(eta.dom);
        pool.insert(pool.end(), pe.begin(), pe.end());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    auto sliced = slice_weighted(a, pool);
    FormOnCells volume, boundary;
    volume.wc = sliced.wc;
    boundary.wc = sliced.wc;
    for (const auto& [idx, _] : sliced.wc.w) {
        QVec x = sliced.wc.C.cells[idx].relint_point();
        const LagerbergForm& w = detail::field_at(omega, x);
        const LagerbergForm& e = detail::field_at(eta, x);
        if (!is_symmetric(w) || !is_symmetric(e))
            throw input_error("green_check: forms must be symmetric");
        if (w.p + e.p + 1 != a.d) throw input_error("green_check: bidegrees must sum to d-1");
        volume.forms.emplace(idx, wedge(w, d_prime(d_second(e))) - wedge(d_prime(d_second(w)), e));
        boundary.forms.emplace(idx, wedge(w, d_second(e)) - wedge(d_second(w), e));
    }
    CurrentPairingReport rep;
    rep.identity_name = "green";
    rep.lhs = integrate(volume);
    rep.rhs = boundary_integrate(boundary).total;
    rep.boundary_term = 0;
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

// Pairing of the corner current of f against a symmetric (d-1,d-1)-form:
//   integral of f d'd''eta  =  integral of eta over div(f)  +  boundary term,
// the boundary term collecting the unbalanced faces' residues.
inline CurrentPairingReport poincare_lelong_check(const WeightedComplex& a, const PLFunction& f,
                                                  const FormField& eta) {
    if (f.dom.n != a.n || eta.dom.n != a.n)
        throw input_error("poincare_lelong_check: ambient mismatch");
    if (a.d < 1) throw input_error("poincare_lelong_check: cycle dimension must be positive");
    std::vector<ZVec> pool = hyperplane_pool(f.dom);
    {
        auto pe = hyperplane_pool(eta.dom);
        pool.insert(pool.end(), pe.begin(), pe.end());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    auto sliced = slice_weighted(a, pool);
    PLOnCells pc;
    pc.wc = sliced.wc;
    pc.parent = sliced.parent;
    std::map<std::size_t, LagerbergForm> eta_at;
    for (const auto& [idx, _] : pc.wc.w) {
        QVec x = pc.wc.C.cells[idx].relint_point();
        pc.aff.emplace(idx, f.aff[detail::covering_cell(f.dom, x)]);
        const LagerbergForm& e = detail::field_at(eta, x);
        if (!is_symmetric(e)) throw input_error("poincare_lelong_check: form must be symmetric");
        if (e.p != a.d - 1) throw input_error("poincare_lelong_check: form must be (d-1,d-1)");
        eta_at.emplace(idx, e);
    }
    DivisorResult dr = weil_divisor(pc);
    const WeightedComplex& wc = dr.data.wc;

    CurrentPairingReport rep;
    rep.identity_name = "poincare-lelong";

    // lhs: weighted integral of f * d'd''eta, cell by cell
    rep.lhs = 0;
    for (const auto& [idx, wt] : wc.w) {
        const AffPiece& u = dr.data.aff.at(idx);
        Poly fp = poly_const(a.n, u.c);
        for (std::size_t i = 0; i < a.n; ++i)
            if (u.u[i] != 0) fp = fp + Rat(u.u[i]) * poly_var(a.n, i);
        LagerbergForm integrand = wedge(form_function(fp), d_prime(d_second(eta_at.at(idx))));
        rep.lhs += Rat(wt) * integrate_cell(wc.C.cells[idx], integrand);
    }

    // rhs: eta against the divisor
    rep.rhs = dr.divisor.supported() ? integrate(dr.divisor, eta) : Rat(0);

    // residues of the unbalanced faces
    rep.boundary_term = 0;
    for (const auto& face : dr.faces) {
        if (face.balanced) continue;
        const Polyhedron& tau = wc.C.cells[face.tau];
        Rat t = 0;
        for (const auto& [sigma_idx, wt] : wc.w) {
            if (!wc.C.is_face(face.tau, sigma_idx)) continue;
            const AffPiece& u = dr.data.aff.at(sigma_idx);
            const LagerbergForm& e = eta_at.at(sigma_idx);
            Poly fp = poly_const(a.n, u.c);
            LagerbergForm dpf = form_zero(a.n, 1, 0);
            for (std::size_t i = 0; i < a.n; ++i) {
                if (u.u[i] == 0) continue;
                fp = fp + Rat(u.u[i]) * poly_var(a.n, i);
                dpf = dpf + form_term(a.n, {unsigned(i)}, {}, poly_const(a.n, Rat(u.u[i])));
            }
            const Polyhedron& sigma = wc.C.cells[sigma_idx];
            // d''-channel of f d''eta plus d'-channel of d'f ^ eta, with the
            // calibrated global signs -1 and +1
            Rat c2 = detail::face_contribution(sigma, tau, wedge(form_function(fp), d_second(e)),
                                               detail::Slot::second);
            Rat c1 = detail::face_contribution(sigma, tau, wedge(dpf, e), detail::Slot::prime);
            t += Rat(wt) * (c1 - c2);
        }
        const LagerbergForm& e_tau = detail::field_at(eta, tau.relint_point());
        rep.boundary_term += t - Rat(face.mult) * integrate_cell(tau, e_tau);
    }

    rep.holds = rep.lhs == rep.rhs + rep.boundary_term;
    return rep;
}

} // namespace trop
