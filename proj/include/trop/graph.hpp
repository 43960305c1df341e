#pragma once

#include <array>
#include <deque>
#include <set>

#include "trop/linalg.hpp"

namespace trop {

// ------------------------------------------------- weighted metric graphs

struct GraphEdge {
    std::size_t tail = 0;
    std::size_t head = 0;
    Rat length;
    Int weight = 1;
};

// Multigraph with positive rational edge lengths, integer weights >= 1, and a
// marked boundary vertex set. Loop edges are excluded.
struct MetricGraph {
    std::size_t nv = 0;
    std::vector<GraphEdge> edges;
    std::set<std::size_t> boundary;

    bool is_boundary(std::size_t v) const { return boundary.count(v) != 0; }
};

inline MetricGraph make_graph(std::size_t nv, std::vector<GraphEdge> edges,
                              std::set<std::size_t> boundary = {}) {
    for (const auto& e : edges) {
        require(e.tail < nv && e.head < nv, "graph: edge endpoint out of range");
        require(e.tail != e.head, "graph: loop edges are not allowed");
        require(e.length > 0, "graph: edge lengths must be positive");
        require(e.weight >= 1, "graph: edge weights must be at least 1");
    }
    for (auto v : boundary) require(v < nv, "graph: boundary vertex out of range");
    MetricGraph g;
    g.nv = nv;
    g.edges = std::move(edges);
    g.boundary = std::move(boundary);
    return g;
}

// Vertex labels of the connected components, lowest-index-first.
inline std::vector<std::size_t> components(const MetricGraph& g) {
    std::vector<std::size_t> comp(g.nv, g.nv);
    std::size_t next = 0;
    for (std::size_t s = 0; s < g.nv; ++s) {
        if (comp[s] != g.nv) continue;
        comp[s] = next;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (const auto& e : g.edges) {
                std::size_t o;
                if (e.tail == v)
                    o = e.head;
                else if (e.head == v)
                    o = e.tail;
                else
                    continue;
                if (comp[o] == g.nv) {
                    comp[o] = next;
                    queue.push_back(o);
                }
            }
        }
        ++next;
    }
    return comp;
}

inline bool is_connected(const MetricGraph& g) {
    if (g.nv == 0) return true;
    auto c = components(g);
    return *std::max_element(c.begin(), c.end()) == 0;
}

// ------------------------------------------------ piecewise linear functions

struct EdgeBreak {
    Rat pos;
    Rat value;
};

// Continuous piecewise affine function: vertex values plus the full breakpoint
// list of every edge, endpoints included, positions measured from the tail.
struct GraphPL {
    std::vector<Rat> at_vertex;
    std::vector<std::vector<EdgeBreak>> on_edge;
};

inline GraphPL make_graph_pl(const MetricGraph& g, std::vector<Rat> vertex_vals,
                             const std::map<std::size_t, std::vector<EdgeBreak>>& interior = {}) {
    require(vertex_vals.size() == g.nv, "graph function: one value per vertex required");
    GraphPL h;
    h.at_vertex = std::move(vertex_vals);
    h.on_edge.resize(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        auto& list = h.on_edge[e];
        list.push_back({Rat(0), h.at_vertex[g.edges[e].tail]});
        auto it = interior.find(e);
        if (it != interior.end())
            for (const auto& b : it->second) {
                require(b.pos > list.back().pos, "graph function: breakpoints must increase");
                require(b.pos < g.edges[e].length, "graph function: breakpoint beyond the edge");
                list.push_back(b);
            }
        list.push_back({g.edges[e].length, h.at_vertex[g.edges[e].head]});
    }
    return h;
}

inline GraphPL constant_pl(const MetricGraph& g, const Rat& c) {
    return make_graph_pl(g, std::vector<Rat>(g.nv, c));
}

namespace detail {

inline Rat segment_slope(const EdgeBreak& a, const EdgeBreak& b) {
    return (b.value - a.value) / (b.pos - a.pos);
}

// slope leaving the tail endpoint along the edge
inline Rat slope_from_tail(const GraphPL& h, std::size_t e) {
    const auto& l = h.on_edge[e];
    return segment_slope(l[0], l[1]);
}

// slope leaving the head endpoint back into the edge
inline Rat slope_from_head(const GraphPL& h, std::size_t e) {
    const auto& l = h.on_edge[e];
    return -segment_slope(l[l.size() - 2], l[l.size() - 1]);
}

// weighted outgoing slope sum at a vertex
inline Rat vertex_mass(const MetricGraph& g, const GraphPL& h, std::size_t v) {
    Rat s = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (g.edges[e].tail == v) s += Rat(g.edges[e].weight) * slope_from_tail(h, e);
        if (g.edges[e].head == v) s += Rat(g.edges[e].weight) * slope_from_head(h, e);
    }
    return s;
}

} // namespace detail

// -------------------------------------------------------------- harmonicity

struct HarmonicReport {
    bool harmonic = false;
    bool edge_affine = false;
    std::vector<std::pair<std::size_t, Rat>> defects; // interior vertex, mass
};

// Harmonic means edge-affine with vanishing weighted outgoing-slope sums at
// the interior vertices. Boundary vertices are unconstrained.
inline HarmonicReport is_harmonic(const MetricGraph& g, const GraphPL& h) {
    HarmonicReport rep;
    rep.edge_affine = true;
    for (const auto& l : h.on_edge)
        if (l.size() > 2) rep.edge_affine = false;
    for (std::size_t v = 0; v < g.nv; ++v) {
        if (g.is_boundary(v)) continue;
        Rat m = detail::vertex_mass(g, h, v);
        if (m != 0) rep.defects.emplace_back(v, m);
    }
    rep.harmonic = rep.edge_affine && rep.defects.empty();
    return rep;
}

// Subharmonic: the weighted outgoing slope sum is nonnegative at every
// interior vertex and at every interior breakpoint, the latter counted as a
// degree-two vertex carrying the edge weight on both sides.
inline bool is_subharmonic(const MetricGraph& g, const GraphPL& h) {
    for (std::size_t v = 0; v < g.nv; ++v) {
        if (g.is_boundary(v)) continue;
        if (detail::vertex_mass(g, h, v) < 0) return false;
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& l = h.on_edge[e];
        for (std::size_t i = 1; i + 1 < l.size(); ++i) {
            Rat left = -detail::segment_slope(l[i - 1], l[i]);
            Rat right = detail::segment_slope(l[i], l[i + 1]);
            if (Rat(g.edges[e].weight) * (left + right) < 0) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------- dirichlet solve

// Unique edge-affine harmonic extension of the boundary values, via the
// conductance w(e)/l(e) Laplacian.
inline GraphPL solve_dirichlet(const MetricGraph& g, const std::map<std::size_t, Rat>& values) {
    for (const auto& [v, _] : values)
        require(g.is_boundary(v), "dirichlet: value given for a non-boundary vertex");
    for (auto v : g.boundary)
        require(values.count(v) != 0, "dirichlet: boundary vertex without a value");
    auto comp = components(g);
    std::vector<bool> touched(g.nv == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1,
                              false);
    for (auto v : g.boundary) touched[comp[v]] = true;
    for (std::size_t v = 0; v < g.nv; ++v)
        if (!touched[comp[v]])
            throw input_error("dirichlet: component of vertex " + std::to_string(v) +
                              " has no boundary vertex");

    std::vector<std::size_t> unknown, slot(g.nv, g.nv);
    for (std::size_t v = 0; v < g.nv; ++v)
        if (!g.is_boundary(v)) {
            slot[v] = unknown.size();
            unknown.push_back(v);
        }
    QMat m(unknown.size(), unknown.size());
    QVec rhs(unknown.size(), Rat(0));
    for (const auto& e : g.edges) {
        Rat c = Rat(e.weight) / e.length;
        for (auto [x, o] : {std::pair{e.tail, e.head}, std::pair{e.head, e.tail}}) {
            if (g.is_boundary(x)) continue;
            m.at(slot[x], slot[x]) += c;
            if (g.is_boundary(o))
                rhs[slot[x]] += c * values.at(o);
            else
                m.at(slot[x], slot[o]) -= c;
        }
    }
    auto sol = solve(m, rhs);
    if (!sol) throw internal_error("dirichlet: conductance system is singular");
    std::vector<Rat> vals(g.nv);
    for (std::size_t v = 0; v < g.nv; ++v)
        vals[v] = g.is_boundary(v) ? values.at(v) : (*sol)[slot[v]];
    return make_graph_pl(g, std::move(vals));
}

// --------------------------------------------------------- graph divisors

// Discrete Laplacian measure of a piecewise linear function: weighted
// outgoing slope sums at vertices and interior breakpoints.
struct GraphDivisor {
    std::map<std::size_t, Rat> at_vertex;
    std::map<std::pair<std::size_t, Rat>, Rat> at_break; // (edge, position)

    Rat total() const {
        Rat s = 0;
        for (const auto& [_, c] : at_vertex) s += c;
        for (const auto& [_, c] : at_break) s += c;
        return s;
    }

    bool supported_on(const std::set<std::size_t>& verts) const {
        if (!at_break.empty()) return false;
        for (const auto& [v, _] : at_vertex)
            if (!verts.count(v)) return false;
        return true;
    }
};

inline GraphDivisor laplacian_divisor(const MetricGraph& g, const GraphPL& h) {
    GraphDivisor d;
    for (std::size_t v = 0; v < g.nv; ++v) {
        Rat m = detail::vertex_mass(g, h, v);
        if (m != 0) d.at_vertex.emplace(v, m);
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const auto& l = h.on_edge[e];
        for (std::size_t i = 1; i + 1 < l.size(); ++i) {
            Rat m = Rat(g.edges[e].weight) * (detail::segment_slope(l[i], l[i + 1]) -
                                              detail::segment_slope(l[i - 1], l[i]));
            if (m != 0) d.at_break.emplace(std::make_pair(e, l[i].pos), m);
        }
    }
    return d;
}

// ------------------------------------------------------------- cycle space

// Cycles are signed rational edge chains; basis cycles use only -1, 0, 1.
struct CycleBasis {
    std::size_t betti = 0;
    std::vector<QVec> cycles; // one chain per chord, oriented by the chord
};

namespace detail {

// BFS forest from the lowest-index roots, edges scanned in input order.
// Returns for each vertex the edge reaching it and the sign of traversal,
// or nv-markers for roots.
struct SpanningForest {
    std::vector<std::size_t> parent_edge; // edges.size() marks a root
    std::vector<bool> tree_edge;
};

inline SpanningForest bfs_forest(const MetricGraph& g) {
    SpanningForest f;
    f.parent_edge.assign(g.nv, g.edges.size());
    f.tree_edge.assign(g.edges.size(), false);
    std::vector<bool> seen(g.nv, false);
    for (std::size_t s = 0; s < g.nv; ++s) {
        if (seen[s]) continue;
        seen[s] = true;
        std::deque<std::size_t> queue{s};
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            for (std::size_t e = 0; e < g.edges.size(); ++e) {
                std::size_t o;
                if (g.edges[e].tail == v)
                    o = g.edges[e].head;
                else if (g.edges[e].head == v)
                    o = g.edges[e].tail;
                else
                    continue;
                if (seen[o]) continue;
                seen[o] = true;
                f.parent_edge[o] = e;
                f.tree_edge[e] = true;
                queue.push_back(o);
            }
        }
    }
    return f;
}

// Chain of the walk from v up to its root; returns the root. Coefficients
// count tail-to-head traversals positively.
inline std::pair<QVec, std::size_t> walk_to_root(const MetricGraph& g, const SpanningForest& f,
                                                 std::size_t v) {
    QVec chain(g.edges.size(), Rat(0));
    while (f.parent_edge[v] != g.edges.size()) {
        std::size_t e = f.parent_edge[v];
        // the parent edge reaches v from its other endpoint
        if (g.edges[e].head == v) {
            chain[e] -= 1; // walking up means head-to-tail here
            v = g.edges[e].tail;
        } else {
            chain[e] += 1;
            v = g.edges[e].head;
        }
    }
    return {std::move(chain), v};
}

inline QVec tree_path(const MetricGraph& g, const SpanningForest& f, std::size_t a,
                      std::size_t b) {
    auto [ca, ra] = walk_to_root(g, f, a);
    auto [cb, rb] = walk_to_root(g, f, b);
    if (ra != rb) throw input_error("graph: vertices lie in different components");
    // a to b is (a to root) minus (b to root)
    for (std::size_t e = 0; e < g.edges.size(); ++e) ca[e] -= cb[e];
    return ca;
}

} // namespace detail

inline CycleBasis cycle_basis(const MetricGraph& g) {
    auto f = detail::bfs_forest(g);
    CycleBasis cb;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (f.tree_edge[e]) continue;
        QVec cyc = detail::tree_path(g, f, g.edges[e].head, g.edges[e].tail);
        cyc[e] += 1; // the chord orients its cycle
        cb.cycles.push_back(std::move(cyc));
    }
    cb.betti = cb.cycles.size();
    return cb;
}

// Gram matrix of chains under the edge length pairing: the edges are
// orthogonal with <e,e> = l(e).
inline QMat edge_length_pairing(const MetricGraph& g, const std::vector<QVec>& cycles) {
    for (const auto& c : cycles)
        require(c.size() == g.edges.size(), "pairing: chain has the wrong length");
    QMat gram(cycles.size(), cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i)
        for (std::size_t j = 0; j < cycles.size(); ++j) {
            Rat s = 0;
            for (std::size_t e = 0; e < g.edges.size(); ++e)
                s += g.edges[e].length * cycles[i][e] * cycles[j][e];
            gram.at(i, j) = s;
        }
    return gram;
}

// ---------------------------------------------------------------- jacobian

// The lattice iota(H_1) inside H^1 = R^b, written in the basis dual to the
// chosen cycles: row i of iota is (<g_i,g_1>, ..., <g_i,g_b>).
struct JacobianDesc {
    std::size_t rank = 0;
    std::vector<QVec> cycles;
    QMat iota{0, 0};
    Rat covolume = 1;
};

inline JacobianDesc jacobian(const MetricGraph& g, const std::vector<QVec>& cycles) {
    JacobianDesc j;
    j.rank = cycles.size();
    j.cycles = cycles;
    j.iota = edge_length_pairing(g, cycles);
    j.covolume = j.rank == 0 ? Rat(1) : det(j.iota);
    if (j.covolume <= 0) throw input_error("jacobian: cycles are linearly dependent");
    return j;
}

inline JacobianDesc jacobian(const MetricGraph& g) {
    require(is_connected(g), "jacobian: graph must be connected");
    return jacobian(g, cycle_basis(g).cycles);
}

// ------------------------------------------------------------- abel-jacobi

// A point of the graph: a vertex, or an interior position along an edge
// measured from the tail.
struct GraphPoint {
    bool at_vertex = true;
    std::size_t vertex = 0;
    std::size_t edge = 0;
    Rat pos;
};

inline GraphPoint vertex_point(std::size_t v) {
    GraphPoint p;
    p.vertex = v;
    return p;
}

inline GraphPoint edge_point(std::size_t e, Rat pos) {
    GraphPoint p;
    p.at_vertex = false;
    p.edge = e;
    p.pos = std::move(pos);
    return p;
}

struct AbelJacobiValue {
    QVec raw;     // pairing of one chosen path with the basis cycles
    QVec reduced; // canonical representative, coordinates in [0,1) over the lattice basis
};

namespace detail {

inline QVec reduce_mod_lattice(const JacobianDesc& j, const QVec& v) {
    if (j.rank == 0) return v;
    // coefficients of v over the iota rows
    auto coeff = solve(transpose(j.iota), v);
    if (!coeff) throw internal_error("abel-jacobi: value outside the lattice span");
    QVec red(j.rank, Rat(0));
    for (std::size_t i = 0; i < j.rank; ++i) {
        Rat frac = (*coeff)[i] - Rat(floor_rat((*coeff)[i]));
        for (std::size_t k = 0; k < j.rank; ++k) red[k] += frac * j.iota.at(i, k);
    }
    return red;
}

} // namespace detail

inline AbelJacobiValue abel_jacobi(const MetricGraph& g, const JacobianDesc& j,
                                   std::size_t base, const GraphPoint& x) {
    require(base < g.nv, "abel-jacobi: base vertex out of range");
    auto f = detail::bfs_forest(g);
    QVec chain;
    if (x.at_vertex) {
        require(x.vertex < g.nv, "abel-jacobi: vertex out of range");
        chain = detail::tree_path(g, f, base, x.vertex);
    } else {
        require(x.edge < g.edges.size(), "abel-jacobi: edge out of range");
        const auto& e = g.edges[x.edge];
        require(x.pos >= 0 && x.pos <= e.length, "abel-jacobi: position beyond the edge");
        chain = detail::tree_path(g, f, base, e.tail);
        chain[x.edge] += x.pos / e.length;
    }
    AbelJacobiValue val;
    val.raw.assign(j.rank, Rat(0));
    for (std::size_t i = 0; i < j.rank; ++i)
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            val.raw[i] += g.edges[e].length * chain[e] * j.cycles[i][e];
    val.reduced = detail::reduce_mod_lattice(j, val.raw);
    return val;
}

inline AbelJacobiValue abel_jacobi(const MetricGraph& g, std::size_t base, const GraphPoint& x) {
    require(is_connected(g), "abel-jacobi: graph must be connected");
    return abel_jacobi(g, jacobian(g), base, x);
}

// ------------------------------------------------------- dolbeault numbers

// Dimension table (h^{0,0}, h^{1,0}, h^{0,1}, h^{1,1}) = (1, b, b, 1) for a
// connected boundaryless graph.
inline std::array<std::size_t, 4> dolbeault_dims(const MetricGraph& g) {
    require(g.boundary.empty(), "dolbeault: boundary must be empty");
    require(is_connected(g), "dolbeault: graph must be connected");
    std::size_t b = cycle_basis(g).betti;
    return {1, b, b, 1};
}

// ------------------------------------------------------------- theta graph

// Two vertices P, Q joined by three parallel edges a, b, c oriented P to Q,
// unit weights, no boundary.
inline MetricGraph theta_graph(const Rat& la, const Rat& lb, const Rat& lc) {
    require(la > 0 && lb > 0 && lc > 0, "theta: edge lengths must be positive");
    return make_graph(2, {{0, 1, la, Int(1)}, {0, 1, lb, Int(1)}, {0, 1, lc, Int(1)}});
}

// Affine description of the Abel-Jacobi image of one open edge.
struct EdgeImage {
    std::size_t edge = 0;
    QVec offset; // value at parameter 0
    QVec slope;  // derivative in the edge parameter
};

struct ThetaReport {
    MetricGraph graph;
    JacobianDesc jac;       // in the coordinate basis below
    std::array<EdgeImage, 3> images;
};

// The classical coordinate description: basis cycles through c against a and
// c against b make the lattice rows (l(a)+l(c), l(c)) and (l(c), l(b)+l(c)),
// and the three edge parametrizations of the Abel-Jacobi map come out as the
// standard affine formulas. Base point P.
inline ThetaReport theta_coordinates(const Rat& la, const Rat& lb, const Rat& lc) {
    ThetaReport rep;
    rep.graph = theta_graph(la, lb, lc);
    QVec g1(3, Rat(0)), g2(3, Rat(0));
    g1[2] = 1;
    g1[0] = -1; // c - a
    g2[2] = 1;
    g2[1] = -1; // c - b
    rep.jac = jacobian(rep.graph, {g1, g2});
    for (std::size_t e = 0; e < 3; ++e) {
        const Rat len = rep.graph.edges[e].length;
        auto at = [&](const Rat& t) {
            return abel_jacobi(rep.graph, rep.jac, 0, edge_point(e, t)).reduced;
        };
        QVec v1 = at(len / 3), v2 = at(2 * len / 3);
        EdgeImage img;
        img.edge = e;
        img.slope.assign(2, Rat(0));
        img.offset.assign(2, Rat(0));
        for (std::size_t k = 0; k < 2; ++k) {
            img.slope[k] = (v2[k] - v1[k]) / (len / 3);
            img.offset[k] = v1[k] - img.slope[k] * (len / 3);
        }
        // the reduction shift is constant along the open edge; make sure
        QVec probe = at(len / 2);
        for (std::size_t k = 0; k < 2; ++k)
            if (probe[k] != img.offset[k] + img.slope[k] * (len / 2))
                throw internal_error("theta: edge image is not affine");
        rep.images[e] = std::move(img);
    }
    return rep;
}

} // namespace trop
