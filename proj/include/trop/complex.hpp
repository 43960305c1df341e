#pragma once

#include "trop/polyhedron.hpp"

#include <set>

namespace trop {

enum class Check { on, off };

// Face-closed cell collection. Cells are stored in key order, so every
// construction from the same point-set data yields the same indexing.
struct PolyComplex {
    std::size_t n = 0;
    std::vector<Polyhedron> cells;
    std::map<std::string, std::size_t> index;
    std::vector<std::vector<std::size_t>> faces_of; // sorted, includes self

    bool has(const std::string& k) const { return index.count(k) != 0; }
    std::size_t at(const std::string& k) const {
        auto it = index.find(k);
        if (it == index.end()) throw internal_error("complex: unknown cell key");
        return it->second;
    }

    bool is_face(std::size_t f, std::size_t c) const {
        const auto& fs = faces_of[c];
        return std::binary_search(fs.begin(), fs.end(), f);
    }

    std::vector<std::size_t> of_dim(int d) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].dim == d) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> maximal() const {
        std::vector<bool> proper_face(cells.size(), false);
        for (std::size_t c = 0; c < cells.size(); ++c)
            for (auto f : faces_of[c])
                if (f != c) proper_face[f] = true;
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (!proper_face[i]) out.push_back(i);
        return out;
    }

    int dim() const {
        int d = -1;
        for (const auto& c : cells) d = std::max(d, c.dim);
        return d;
    }

    std::optional<std::size_t> find_containing(const QVec& x) const {
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].contains(x)) return i;
        return std::nullopt;
    }
};

inline PolyComplex build_complex(std::size_t n, const std::vector<Polyhedron>& gens,
                                 Check check = Check::on) {
    std::map<std::string, Polyhedron> pool;
    std::map<std::string, std::vector<std::string>> kids;
    std::vector<std::string> work;
    for (const auto& g : gens) {
        if (g.is_empty) continue; // the empty face is a marker, never a cell
        if (g.n != n) throw input_error("complex: mixed ambient dimensions");
        if (pool.emplace(g.key(), g).second) work.push_back(g.key());
    }
    while (!work.empty()) {
        std::string k = std::move(work.back());
        work.pop_back();
        auto fs = facets(pool.at(k));
        auto& ks = kids[k];
        for (auto& f : fs) {
            ks.push_back(f.key());
            if (pool.emplace(f.key(), f).second) work.push_back(f.key());
        }
    }

    PolyComplex C;
    C.n = n;
    for (auto& [k, p] : pool) {
        C.index.emplace(k, C.cells.size());
        C.cells.push_back(std::move(p));
    }

    C.faces_of.assign(C.cells.size(), {});
    std::vector<std::size_t> order(C.cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return C.cells[a].dim < C.cells[b].dim;
    });
    for (auto c : order) {
        std::set<std::size_t> fs{c};
        for (const auto& kk : kids[C.cells[c].key()]) {
            std::size_t f = C.at(kk);
            fs.insert(C.faces_of[f].begin(), C.faces_of[f].end());
        }
        C.faces_of[c].assign(fs.begin(), fs.end());
    }

    if (check == Check::on) {
        for (std::size_t i = 0; i < C.cells.size(); ++i)
            for (std::size_t j = i + 1; j < C.cells.size(); ++j) {
                Polyhedron I = intersect(C.cells[i], C.cells[j]);
                if (I.is_empty) continue;
                if (!C.has(I.key()) || !C.is_face(C.at(I.key()), i) ||
                    !C.is_face(C.at(I.key()), j))
                    throw input_error("not a polyhedral complex: cells " +
                                      std::to_string(i) + " and " + std::to_string(j) +
                                      " intersect in a non-face");
            }
    }
    return C;
}

// ------------------------------------------------------------------ slicing

namespace detail {

inline ZVec norm_hyperplane(ZVec row) {
    for (const auto& x : row) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : row) y = -y;
        break;
    }
    return row;
}

} // namespace detail

inline std::vector<ZVec> hyperplane_pool(const PolyComplex& C) {
    std::set<ZVec> rows;
    for (const auto& c : C.cells) {
        for (const auto& e : c.eqs) rows.insert(detail::norm_hyperplane(e));
        for (const auto& i : c.ineqs) rows.insert(detail::norm_hyperplane(i));
    }
    return {rows.begin(), rows.end()};
}

enum class Side { on, plus, minus, both };

inline Side side_of(const Polyhedron& p, const ZVec& h) {
    bool pos = false, neg = false;
    for (const auto& v : p.vertices) {
        Rat s = Polyhedron::eval_row(h, v);
        if (s > 0) pos = true;
        if (s < 0) neg = true;
    }
    auto lin_part = [&](const ZVec& d) {
        Int s(0);
        for (std::size_t i = 0; i < p.n; ++i) s += h[i] * d[i];
        return s;
    };
    for (const auto& r : p.rays) {
        Int s = lin_part(r);
        if (s > 0) pos = true;
        if (s < 0) neg = true;
    }
    for (const auto& l : p.lineality)
        if (lin_part(l) != 0) pos = neg = true;
    if (pos && neg) return Side::both;
    if (pos) return Side::plus;
    if (neg) return Side::minus;
    return Side::on;
}

// Cut a cell along every hyperplane in the pool. Pieces keep the cell's
// dimension; after rebuilding a complex from the pieces of several sources,
// overlapping regions produce identical cells (all pieces are faces of the
// pooled arrangement).
inline std::vector<Polyhedron> slice_cell(const Polyhedron& cell,
                                          const std::vector<ZVec>& pool) {
    std::vector<Polyhedron> pieces{cell};
    for (const auto& h : pool) {
        std::vector<Polyhedron> next;
        for (const auto& pc : pieces) {
            if (side_of(pc, h) != Side::both) {
                next.push_back(pc);
                continue;
            }
            ZVec hneg = h;
            for (auto& x : hneg) x = -x;
            std::vector<ZVec> rows = pc.ineqs;
            rows.push_back(h);
            next.push_back(polyhedron_from_h_rows(pc.n, rows, pc.eqs));
            rows.back() = hneg;
            next.push_back(polyhedron_from_h_rows(pc.n, rows, pc.eqs));
        }
        pieces = std::move(next);
    }
    return pieces;
}

// Refinement on the overlap: all pairwise intersections plus faces.
inline PolyComplex common_refinement(const PolyComplex& a, const PolyComplex& b,
                                     Check check = Check::on) {
    if (a.n != b.n) throw input_error("common_refinement: ambient mismatch");
    std::vector<Polyhedron> gens;
    for (const auto& s : a.cells)
        for (const auto& r : b.cells) {
            Polyhedron I = intersect(s, r);
            if (!I.is_empty) gens.push_back(std::move(I));
        }
    return build_complex(a.n, gens, check);
}

// Fan of cones spanned by the cells through x, shifted to the origin.
inline PolyComplex star(const PolyComplex& C, const QVec& x, Check check = Check::on) {
    std::vector<Polyhedron> cones;
    for (const auto& cell : C.cells) {
        if (!cell.contains(x)) continue;
        std::vector<QVec> rays;
        for (const auto& v : cell.vertices) {
            QVec d(C.n);
            bool zero = true;
            for (std::size_t i = 0; i < C.n; ++i) {
                d[i] = v[i] - x[i];
                if (d[i] != 0) zero = false;
            }
            if (!zero) rays.push_back(std::move(d));
        }
        for (const auto& r : cell.rays) rays.push_back(to_q(r));
        std::vector<QVec> lin;
        for (const auto& l : cell.lineality) lin.push_back(to_q(l));
        cones.push_back(polyhedron_from_v(C.n, {QVec(C.n, Rat(0))}, rays, lin));
    }
    if (cones.empty()) throw input_error("star: point not in the support");
    return build_complex(C.n, cones, check);
}

inline bool is_fan(const PolyComplex& C) {
    for (const auto& c : C.cells)
        if (!c.cone_form()) return false;
    return true;
}

} // namespace trop
