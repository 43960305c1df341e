#pragma once

#include "trop/cycles.hpp"
#include "trop/graph.hpp"
#include "trop/integrate.hpp"

#include "json.hpp" // vendored single-header nlohmann/json

#include <cstdint>
#include <limits>

namespace trop {

// Insertion-ordered documents keep emitted reports byte-stable.
using Json = nlohmann::ordered_json;

// ------------------------------------------------------------ scalar codecs

// Rationals travel as "p/q" strings (integer literals are accepted too);
// floats are rejected so nothing silently rounds.
inline Rat rat_from_json(const Json& v) {
    if (v.is_string()) return parse_rat(v.get<std::string>());
    if (v.is_number_integer()) return Rat(Int(v.get<std::int64_t>()));
    throw input_error("expected a rational \"p/q\" or integer, got " + v.dump());
}

inline Int int_from_json(const Json& v) {
    Rat r = rat_from_json(v);
    if (!is_integer(r)) throw input_error("expected an integer, got " + v.dump());
    return num(r);
}

inline std::size_t index_from_json(const Json& v) {
    if (!v.is_number_unsigned()) throw input_error("expected an index, got " + v.dump());
    return v.get<std::size_t>();
}

// Object keys like the ones in "weights" are decimal cell indices.
inline std::size_t index_from_key(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw input_error("not a cell index: '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw input_error("not a cell index: '" + s + "'");
    }
}

inline Json rat_to_json(const Rat& r) { return rat_str(r); }

// Small integers stay JSON numbers for readability, big ones become strings.
inline Json int_to_json(const Int& x) {
    static const Int lo = Int(std::numeric_limits<std::int64_t>::min());
    static const Int hi = Int(std::numeric_limits<std::int64_t>::max());
    if (x < lo || x > hi) return x.str();
    return x.convert_to<std::int64_t>();
}

inline QVec qvec_from_json(const Json& v, std::size_t n) {
    if (!v.is_array() || v.size() != n)
        throw input_error("expected a vector of length " + std::to_string(n) + ", got " + v.dump());
    QVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = rat_from_json(v[i]);
    return out;
}

inline ZVec zvec_from_json(const Json& v, std::size_t n) {
    if (!v.is_array() || v.size() != n)
        throw input_error("expected a vector of length " + std::to_string(n) + ", got " + v.dump());
    ZVec out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = int_from_json(v[i]);
    return out;
}

inline Json qvec_to_json(const QVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rat_to_json(x));
    return a;
}

inline Json zvec_to_json(const ZVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(int_to_json(x));
    return a;
}

inline Json qmat_to_json(const QMat& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.nr; ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.nc; ++j) r.push_back(rat_to_json(m.at(i, j)));
        rows.push_back(std::move(r));
    }
    return rows;
}

// ---------------------------------------------------------------- polyhedra

// Either half-space data {"ineqs": [[u...,c]], "eqs": [...]} with u.x + c >= 0
// resp. = 0, or vertex data {"vertices", "rays", "lineality"}. When both are
// present (round-tripped output) the half-space description wins.
inline Polyhedron polyhedron_from_json(std::size_t n, const Json& j) {
    if (!j.is_object()) throw input_error("polyhedron must be an object, got " + j.dump());
    auto h_rows = [&](const char* key) {
        std::vector<std::pair<QVec, Rat>> out;
        if (!j.contains(key)) return out;
        const Json& arr = j.at(key);
        if (!arr.is_array()) throw input_error(std::string(key) + " must be an array");
        for (const Json& r : arr) {
            if (!r.is_array() || r.size() != n + 1)
                throw input_error(std::string(key) + " rows need " + std::to_string(n + 1) +
                                  " entries");
            QVec u(n);
            for (std::size_t i = 0; i < n; ++i) u[i] = rat_from_json(r[i]);
            out.emplace_back(std::move(u), rat_from_json(r[n]));
        }
        return out;
    };
    if (j.contains("ineqs") || j.contains("eqs"))
        return polyhedron_from_h(n, h_rows("ineqs"), h_rows("eqs"));
    auto v_rows = [&](const char* key) {
        std::vector<QVec> out;
        if (!j.contains(key)) return out;
        const Json& arr = j.at(key);
        if (!arr.is_array()) throw input_error(std::string(key) + " must be an array");
        for (const Json& r : arr) out.push_back(qvec_from_json(r, n));
        return out;
    };
    if (j.contains("vertices") || j.contains("rays") || j.contains("lineality"))
        return polyhedron_from_v(n, v_rows("vertices"), v_rows("rays"), v_rows("lineality"));
    throw input_error("polyhedron needs ineqs/eqs or vertices/rays/lineality");
}

// Both canonical descriptions; parsing back prefers the half-space one.
inline Json polyhedron_to_json(const Polyhedron& p) {
    Json j = Json::object();
    j["dim"] = p.dim;
    Json eqs = Json::array(), ineqs = Json::array();
    for (const auto& r : p.eqs) eqs.push_back(zvec_to_json(r));
    for (const auto& r : p.ineqs) ineqs.push_back(zvec_to_json(r));
    j["eqs"] = std::move(eqs);
    j["ineqs"] = std::move(ineqs);
    Json verts = Json::array(), rays = Json::array(), lin = Json::array();
    for (const auto& v : p.vertices) verts.push_back(qvec_to_json(v));
    for (const auto& r : p.rays) rays.push_back(zvec_to_json(r));
    for (const auto& l : p.lineality) lin.push_back(zvec_to_json(l));
    j["vertices"] = std::move(verts);
    j["rays"] = std::move(rays);
    j["lineality"] = std::move(lin);
    return j;
}

// ---------------------------------------------------------------- complexes

// The listed cells of a complex file, before face completion. Weights and
// affine data refer to cells by their position in this list.
struct ListedCells {
    std::size_t n = 0;
    std::vector<Polyhedron> cells;
};

inline ListedCells listed_cells_from_json(const Json& j,
                                          std::optional<std::size_t> ambient = {}) {
    if (!j.is_object()) throw input_error("complex must be an object");
    ListedCells out;
    if (j.contains("ambient_dim")) {
        out.n = index_from_json(j.at("ambient_dim"));
    } else if (ambient) {
        out.n = *ambient;
    } else {
        throw input_error("complex needs an ambient_dim");
    }
    if (!j.contains("cells") || !j.at("cells").is_array())
        throw input_error("complex needs a cells array");
    for (const Json& c : j.at("cells")) {
        Polyhedron p = polyhedron_from_json(out.n, c);
        if (p.is_empty) throw input_error("complex lists an empty cell");
        out.cells.push_back(std::move(p));
    }
    return out;
}

// Faces are completed on load; pairwise face-to-face position is verified.
inline PolyComplex complex_from_json(const Json& j) {
    ListedCells lc = listed_cells_from_json(j);
    return build_complex(lc.n, lc.cells, Check::on);
}

// Complex JSON plus {"weights": {"<cell index>": m}}. The cycle dimension is
// read off the weighted cells; a complex with no support needs "dim".
inline WeightedComplex weighted_from_json(const Json& j) {
    ListedCells lc = listed_cells_from_json(j);
    if (!j.contains("weights") || !j.at("weights").is_object())
        throw input_error("weighted complex needs a weights object");
    std::vector<std::pair<Polyhedron, Int>> gens;
    for (const auto& [key, val] : j.at("weights").items()) {
        std::size_t idx = index_from_key(key);
        if (idx >= lc.cells.size())
            throw input_error("weight given for unlisted cell " + key);
        gens.emplace_back(lc.cells[idx], int_from_json(val));
    }
    int d = -1;
    bool supported = false;
    for (const auto& [p, w] : gens)
        if (w != 0) {
            d = p.dim;
            supported = true;
            break;
        }
    if (!supported) {
        if (!j.contains("dim")) throw input_error("weighted complex with no support needs dim");
        d = static_cast<int>(index_from_json(j.at("dim")));
    }
    return make_weighted(lc.n, d, gens, Check::on);
}

inline Json weighted_to_json(const WeightedComplex& a) {
    Json j = Json::object();
    j["ambient_dim"] = a.n;
    j["dim"] = a.d;
    Json cells = Json::array();
    Json weights = Json::object();
    std::size_t out_idx = 0;
    for (const auto& [idx, wt] : a.w) {
        cells.push_back(polyhedron_to_json(a.C.cells[idx]));
        weights[std::to_string(out_idx++)] = int_to_json(wt);
    }
    j["cells"] = std::move(cells);
    j["weights"] = std::move(weights);
    return j;
}

// ------------------------------------------------------------- PL functions

// {"cells": [...], "affine": [[u..., c]]} with one integral-slope affine row
// per listed cell; continuity across shared faces is checked on load.
inline PLFunction pl_from_json(const Json& j, std::optional<std::size_t> ambient = {}) {
    ListedCells lc = listed_cells_from_json(j, ambient);
    if (!j.contains("affine") || !j.at("affine").is_array())
        throw input_error("function needs an affine array");
    const Json& aff = j.at("affine");
    if (aff.size() != lc.cells.size())
        throw input_error("function needs one affine row per cell");
    PolyComplex dom = build_complex(lc.n, lc.cells, Check::on);
    std::vector<std::pair<std::size_t, AffPiece>> data;
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < lc.cells.size(); ++i) {
        const Json& row = aff[i];
        if (!row.is_array() || row.size() != lc.n + 1)
            throw input_error("affine rows need " + std::to_string(lc.n + 1) + " entries");
        AffPiece piece;
        piece.u = ZVec(lc.n);
        for (std::size_t k = 0; k < lc.n; ++k) piece.u[k] = int_from_json(row[k]);
        piece.c = rat_from_json(row[lc.n]);
        std::size_t idx = dom.at(lc.cells[i].key());
        if (!seen.insert(idx).second) throw input_error("function lists a cell twice");
        data.emplace_back(idx, std::move(piece));
    }
    return make_pl(dom, data);
}

// {"ambient_dim": n, "components": [function, ...]}; components may omit
// their own ambient_dim.
inline PLMap plmap_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("ambient_dim"))
        throw input_error("map needs an ambient_dim");
    std::size_t n_in = index_from_json(j.at("ambient_dim"));
    if (!j.contains("components") || !j.at("components").is_array())
        throw input_error("map needs a components array");
    std::vector<PLFunction> comps;
    for (const Json& c : j.at("components")) comps.push_back(pl_from_json(c, n_in));
    return make_plmap(n_in, std::move(comps));
}

// -------------------------------------------------------------------- forms

// {"terms": [{"coeff": "p/q", "exps": [e...]}]}; a bare scalar is a constant.
inline Poly poly_from_json(std::size_t n, const Json& j) {
    if (j.is_string() || j.is_number()) return poly_const(n, rat_from_json(j));
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
        throw input_error("polynomial needs a terms array");
    Poly out = poly_const(n, Rat(0));
    for (const Json& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
            throw input_error("polynomial terms need coeff and exps");
        const Json& ex = t.at("exps");
        if (!ex.is_array() || ex.size() != n)
            throw input_error("exps needs " + std::to_string(n) + " entries");
        std::vector<unsigned> exps(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!ex[i].is_number_unsigned()) throw input_error("exponents must be nonnegative");
            exps[i] = ex[i].get<unsigned>();
        }
        out = out + poly_monomial(n, std::move(exps), rat_from_json(t.at("coeff")));
    }
    return out;
}

// {"n", "p", "q", "terms": [{"I", "J", "poly"}]} in normal order; repeated
// (I,J) pairs accumulate.
inline LagerbergForm form_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("p") || !j.contains("q"))
        throw input_error("form needs n, p, q");
    std::size_t n = index_from_json(j.at("n"));
    int p = static_cast<int>(index_from_json(j.at("p")));
    int q = static_cast<int>(index_from_json(j.at("q")));
    LagerbergForm f = form_zero(n, p, q);
    if (!j.contains("terms")) return f;
    if (!j.at("terms").is_array()) throw input_error("form terms must be an array");
    auto tuple = [&](const Json& v, std::size_t len, const char* name) {
        if (!v.is_array() || v.size() != len)
            throw input_error(std::string(name) + " needs " + std::to_string(len) + " indices");
        Idx out(len);
        for (std::size_t i = 0; i < len; ++i) {
            if (!v[i].is_number_unsigned()) throw input_error("wedge indices must be nonnegative");
            out[i] = v[i].get<unsigned>();
        }
        if (!detail::strictly_increasing(out, n))
            throw input_error(std::string(name) + " must be strictly increasing below n");
        return out;
    };
    for (const Json& t : j.at("terms")) {
        if (!t.is_object() || !t.contains("I") || !t.contains("J") || !t.contains("poly"))
            throw input_error("form terms need I, J, poly");
        Idx I = tuple(t.at("I"), std::size_t(p), "I");
        Idx J = tuple(t.at("J"), std::size_t(q), "J");
        Poly g = poly_from_json(n, t.at("poly"));
        auto key = std::make_pair(std::move(I), std::move(J));
        auto it = f.terms.find(key);
        if (it == f.terms.end()) {
            if (!g.is_zero()) f.terms.emplace(std::move(key), std::move(g));
        } else {
            it->second = it->second + g;
            if (it->second.is_zero()) f.terms.erase(it);
        }
    }
    return f;
}

// Either a bare form (constant coefficients across all of R^n) or a piecewise
// field {"domain": complex, "forms": {"<cell index>": form}}.
inline FormField field_from_json(const Json& j) {
    if (j.is_object() && j.contains("domain")) {
        ListedCells lc = listed_cells_from_json(j.at("domain"));
        if (!j.contains("forms") || !j.at("forms").is_object())
            throw input_error("form field needs a forms object");
        PolyComplex dom = build_complex(lc.n, lc.cells, Check::on);
        std::vector<std::pair<std::size_t, LagerbergForm>> data;
        for (const auto& [key, val] : j.at("forms").items()) {
            std::size_t listed = index_from_key(key);
            if (listed >= lc.cells.size())
                throw input_error("form given for unlisted cell " + key);
            data.emplace_back(dom.at(lc.cells[listed].key()), form_from_json(val));
        }
        return make_field(std::move(dom), data);
    }
    LagerbergForm w = form_from_json(j);
    return uniform_field(w.n, w);
}

// ------------------------------------------------------------------- graphs

// {"vertices": count or label array, "edges": [{"tail","head","length",
// "weight"}], "boundary": [v...]}; weight defaults to 1, labels are ignored.
inline MetricGraph graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices"))
        throw input_error("graph needs vertices");
    std::size_t nv = 0;
    const Json& vs = j.at("vertices");
    if (vs.is_number_unsigned())
        nv = vs.get<std::size_t>();
    else if (vs.is_array())
        nv = vs.size();
    else
        throw input_error("vertices must be a count or an array");
    std::vector<GraphEdge> edges;
    if (j.contains("edges")) {
        if (!j.at("edges").is_array()) throw input_error("edges must be an array");
        for (const Json& e : j.at("edges")) {
            if (!e.is_object() || !e.contains("tail") || !e.contains("head") ||
                !e.contains("length"))
                throw input_error("edges need tail, head, length");
            GraphEdge ge;
            ge.tail = index_from_json(e.at("tail"));
            ge.head = index_from_json(e.at("head"));
            ge.length = rat_from_json(e.at("length"));
            if (e.contains("weight")) ge.weight = int_from_json(e.at("weight"));
            edges.push_back(std::move(ge));
        }
    }
    std::set<std::size_t> boundary;
    if (j.contains("boundary")) {
        if (!j.at("boundary").is_array()) throw input_error("boundary must be an array");
        for (const Json& v : j.at("boundary")) boundary.insert(index_from_json(v));
    }
    return make_graph(nv, std::move(edges), std::move(boundary));
}

// {"vertex_values": [...], "breaks": [per-edge interior breakpoint arrays]},
// each breakpoint {"pos": "p/q", "value": "p/q"} measured from the tail.
inline GraphPL graph_pl_from_json(const MetricGraph& g, const Json& j) {
    if (!j.is_object() || !j.contains("vertex_values") || !j.at("vertex_values").is_array())
        throw input_error("graph function needs a vertex_values array");
    const Json& vv = j.at("vertex_values");
    if (vv.size() != g.nv) throw input_error("graph function: one value per vertex required");
    std::vector<Rat> vals;
    for (const Json& v : vv) vals.push_back(rat_from_json(v));
    std::map<std::size_t, std::vector<EdgeBreak>> interior;
    if (j.contains("breaks")) {
        const Json& br = j.at("breaks");
        if (!br.is_array() || br.size() != g.edges.size())
            throw input_error("breaks needs one array per edge");
        for (std::size_t e = 0; e < br.size(); ++e) {
            if (!br[e].is_array()) throw input_error("breaks entries must be arrays");
            std::vector<EdgeBreak> list;
            for (const Json& b : br[e]) {
                if (!b.is_object() || !b.contains("pos") || !b.contains("value"))
                    throw input_error("breakpoints need pos and value");
                list.push_back({rat_from_json(b.at("pos")), rat_from_json(b.at("value"))});
            }
            if (!list.empty()) interior.emplace(e, std::move(list));
        }
    }
    return make_graph_pl(g, std::move(vals), interior);
}

// {"values": {"<vertex>": "p/q"}}, or the bare object itself.
inline std::map<std::size_t, Rat> vertex_values_from_json(const Json& j) {
    const Json& v = j.is_object() && j.contains("values") ? j.at("values") : j;
    if (!v.is_object()) throw input_error("boundary values must be an object");
    std::map<std::size_t, Rat> out;
    for (const auto& [key, val] : v.items()) out.emplace(index_from_key(key), rat_from_json(val));
    return out;
}

} // namespace trop
