#pragma once

#include "trop/pl.hpp"

namespace trop {

// ----------------------------------------------------------- Weil divisors

struct DivisorFace {
    std::size_t tau = 0; // cell index in the refined complex
    Int mult;
    bool balanced = false;
};

struct DivisorResult {
    PLOnCells data;          // the input cycle, refined so f is cellwise affine
    WeightedComplex divisor; // codimension-one cycle carrying the multiplicities
    std::vector<DivisorFace> faces;
};

// Corner multiplicity at a codimension-one face: sum of weighted outgoing
// slopes, corrected by one adjacent cell's slope applied to the balancing
// certificate so the answer does not depend on lattice choices. The reference
// cell is the lowest-indexed adjacent one.
inline DivisorResult weil_divisor(PLOnCells data) {
    DivisorResult res;
    res.data = std::move(data);
    const WeightedComplex& a = res.data.wc;
    std::vector<std::pair<Polyhedron, Int>> gens;
    for (auto tau_idx : a.C.of_dim(a.d - 1)) {
        const Polyhedron& tau = a.C.cells[tau_idx];
        std::optional<std::size_t> ref;
        ZVec cert(a.n, Int(0));
        Int mult = 0;
        for (const auto& [sigma_idx, wt] : a.w) {
            if (!a.C.is_face(tau_idx, sigma_idx)) continue;
            if (!ref) ref = sigma_idx;
            ZVec omega = facet_primitive(tau, a.C.cells[sigma_idx]);
            const ZVec& u = res.data.aff.at(sigma_idx).u;
            Int du = 0;
            for (std::size_t i = 0; i < a.n; ++i) {
                cert[i] += wt * omega[i];
                du += u[i] * omega[i];
            }
            mult += wt * du;
        }
        if (!ref) continue;
        const ZVec& u0 = res.data.aff.at(*ref).u;
        for (std::size_t i = 0; i < a.n; ++i) mult -= u0[i] * cert[i];
        bool balanced = in_span(to_q(tau.span_cols), to_q(cert));
        res.faces.push_back({tau_idx, mult, balanced});
        if (mult != 0) gens.emplace_back(tau, mult);
    }
    res.divisor = make_weighted(a.n, a.d - 1, gens, Check::off);
    return res;
}

inline DivisorResult weil_divisor(const WeightedComplex& a, const PLFunction& f) {
    if (a.d < 1) throw input_error("divisor needs a cycle of positive dimension");
    return weil_divisor(restrict_pl(a, f));
}

// ------------------------------------------------------------- graph lifts

// Lift of a cycle along a piecewise affine map: each cell goes to its graph
// in R^{n+k}, weights unchanged.
inline WeightedComplex graph_lift(const MapOnCells& mc) {
    const WeightedComplex& a = mc.wc;
    std::size_t k = mc.n_out;
    std::vector<std::pair<Polyhedron, Int>> gens;
    for (const auto& [idx, wt] : a.w) {
        const Polyhedron& cell = a.C.cells[idx];
        const AffMap& am = mc.aff.at(idx);
        std::vector<QVec> verts, rays, lin;
        auto embed_point = [&](const QVec& x) {
            QVec y = aff_apply(am, x);
            QVec e(a.n + k);
            for (std::size_t i = 0; i < a.n; ++i) e[i] = x[i];
            for (std::size_t i = 0; i < k; ++i) e[a.n + i] = y[i];
            return e;
        };
        auto embed_dir = [&](const ZVec& v) {
            QVec e(a.n + k, Rat(0));
            for (std::size_t i = 0; i < a.n; ++i) e[i] = Rat(v[i]);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < a.n; ++j) e[a.n + i] += Rat(am.U.at(i, j)) * Rat(v[j]);
            return e;
        };
        for (const auto& v : cell.vertices) verts.push_back(embed_point(v));
        for (const auto& r : cell.rays) rays.push_back(embed_dir(r));
        for (const auto& l : cell.lineality) lin.push_back(embed_dir(l));
        gens.emplace_back(polyhedron_from_v(a.n + k, verts, rays, lin), wt);
    }
    return make_weighted(a.n + k, a.d, gens, Check::off);
}

inline WeightedComplex graph_lift(const WeightedComplex& a, const PLMap& m) {
    return graph_lift(restrict_map(a, m));
}

inline WeightedComplex graph_lift(const WeightedComplex& a, const PLFunction& f) {
    return graph_lift(a, make_plmap(a.n, {f}));
}

// Balancing the graph is the same as balancing the base plus vanishing of the
// divisor; report all three verdicts and whether the equivalence held.
struct GraphCriterion {
    bool base_balanced = false;
    bool divisor_zero = false;
    bool graph_balanced = false;
    bool equivalence_holds = false;
};

inline GraphCriterion graph_balancing_criterion(const WeightedComplex& a, const PLFunction& f) {
    GraphCriterion r;
    r.base_balanced = is_tropical_cycle(a);
    r.divisor_zero = !weil_divisor(a, f).divisor.supported();
    r.graph_balanced = is_tropical_cycle(graph_lift(a, f));
    r.equivalence_holds = (r.graph_balanced == (r.base_balanced && r.divisor_zero));
    return r;
}

// ------------------------------------------------------------ push-forward

// Push a cycle through a piecewise integral affine map. Cells whose image
// drops dimension are discarded; the rest contribute image cells weighted by
// the index of the image lattice inside the saturated lattice of the image
// span. Overlapping images are merged through the pooled arrangement.
inline WeightedComplex pushforward(const MapOnCells& mc) {
    const WeightedComplex& a = mc.wc;
    std::size_t k = mc.n_out;
    std::vector<std::pair<Polyhedron, Int>> gens;
    for (const auto& [idx, wt] : a.w) {
        const Polyhedron& cell = a.C.cells[idx];
        const AffMap& am = mc.aff.at(idx);
        ZMat pushed = mat_mul(am.U, cell.span_cols);
        if (rank(pushed) < std::size_t(a.d)) continue;
        std::vector<QVec> verts, rays, lin;
        for (const auto& v : cell.vertices) verts.push_back(aff_apply(am, v));
        auto push_dir = [&](const ZVec& v) {
            QVec e(k, Rat(0));
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < a.n; ++j) e[i] += Rat(am.U.at(i, j)) * Rat(v[j]);
            return e;
        };
        for (const auto& r : cell.rays) rays.push_back(push_dir(r));
        for (const auto& l : cell.lineality) lin.push_back(push_dir(l));
        Polyhedron img = polyhedron_from_v(k, verts, rays, lin);
        auto rel = relative_lattice_index(img.span_cols, pushed);
        if (!rel || *rel == 0) throw internal_error("pushforward: image lattice not finite index");
        gens.emplace_back(std::move(img), wt * *rel);
    }
    // merge overlapping images through the arrangement of all their walls
    std::set<ZVec> rows;
    for (const auto& [p, _] : gens) {
        for (const auto& e : p.eqs) rows.insert(detail::norm_hyperplane(e));
        for (const auto& i : p.ineqs) rows.insert(detail::norm_hyperplane(i));
    }
    std::vector<ZVec> pool(rows.begin(), rows.end());
    std::map<std::string, std::pair<Polyhedron, Int>> acc;
    for (const auto& [p, wt] : gens)
        for (auto& piece : slice_cell(p, pool)) {
            std::string k = piece.key();
            auto it = acc.find(k);
            if (it == acc.end())
                acc.emplace(std::move(k), std::make_pair(std::move(piece), wt));
            else
                it->second.second += wt;
        }
    std::vector<std::pair<Polyhedron, Int>> merged;
    for (auto& [key, pw] : acc)
        if (pw.second != 0) merged.emplace_back(std::move(pw.first), pw.second);
    return make_weighted(k, a.d, merged, Check::off);
}

inline WeightedComplex pushforward(const WeightedComplex& a, const PLMap& m) {
    return pushforward(restrict_map(a, m));
}

// ------------------------------------------------------- composition checks

// (g o f)_* A  versus  g_* (f_* A).
struct FunctorialityReport {
    WeightedComplex composed_then_pushed;
    WeightedComplex pushed_twice;
    bool agree = false;
};

inline FunctorialityReport pushforward_functoriality(const WeightedComplex& a, const PLMap& f,
                                                     const PLMap& g) {
    FunctorialityReport r;
    r.composed_then_pushed = pushforward(compose_maps_on_cells(g, restrict_map(a, f)));
    r.pushed_twice = pushforward(pushforward(a, f), g);
    r.agree = equivalent(r.composed_then_pushed, r.pushed_twice);
    return r;
}

// f_* div(phi o f) versus div(phi) . f_* A   (projection formula).
struct ProjectionFormulaReport {
    WeightedComplex lhs;
    WeightedComplex rhs;
    bool agree = false;
};

inline ProjectionFormulaReport projection_formula(const WeightedComplex& a, const PLMap& f,
                                                  const PLFunction& phi) {
    ProjectionFormulaReport r;
    auto pulled = compose_on_cells(phi, restrict_map(a, f));
    WeightedComplex div_pull = weil_divisor(std::move(pulled)).divisor;
    r.lhs = div_pull.supported() ? pushforward(div_pull, f) : make_weighted(f.n_out, a.d - 1, {});
    r.rhs = weil_divisor(pushforward(a, f), phi).divisor;
    r.agree = equivalent(r.lhs, r.rhs);
    return r;
}

} // namespace trop
