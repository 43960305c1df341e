#pragma once

#include "trop/complex.hpp"

namespace trop {

// Pure-dimensional weighted complex. Zero-weight cells are purged on
// construction, so the underlying complex is always the closure of the
// positively supported d-cells; an all-zero sum leaves an empty complex.
struct WeightedComplex {
    std::size_t n = 0;
    int d = 0;
    PolyComplex C;
    std::map<std::size_t, Int> w; // d-cell index -> nonzero weight

    bool supported() const { return !w.empty(); }

    Int weight(std::size_t cell) const {
        auto it = w.find(cell);
        return it == w.end() ? Int(0) : it->second;
    }

    std::vector<std::size_t> weighted_cells() const {
        std::vector<std::size_t> out;
        for (const auto& [i, _] : w) out.push_back(i);
        return out;
    }
};

inline WeightedComplex make_weighted(std::size_t n, int d,
                                     const std::vector<std::pair<Polyhedron, Int>>& gens,
                                     Check check = Check::on) {
    WeightedComplex out;
    out.n = n;
    out.d = d;
    std::map<std::string, Int> by_key;
    std::vector<Polyhedron> cells;
    for (const auto& [p, wt] : gens) {
        if (wt == 0) continue;
        if (p.is_empty) throw input_error("weighted cell is empty");
        if (p.dim != d)
            throw input_error("weighted cell of dimension " + std::to_string(p.dim) +
                              " in a " + std::to_string(d) + "-cycle");
        if (!by_key.emplace(p.key(), wt).second)
            throw input_error("duplicate weighted cell");
        cells.push_back(p);
    }
    out.C = build_complex(n, cells, check);
    for (const auto& [k, wt] : by_key) out.w.emplace(out.C.at(k), wt);
    return out;
}

inline WeightedComplex scale_weights(const WeightedComplex& a, const Int& s) {
    if (s == 0) return make_weighted(a.n, a.d, {});
    WeightedComplex out = a;
    for (auto& [_, wt] : out.w) wt *= s;
    return out;
}

inline WeightedComplex negate(const WeightedComplex& a) { return scale_weights(a, -1); }

// Weighted sum after passing both sides through the pooled hyperplane
// arrangement: overlapping regions land in identical pieces, so weights add
// cell by cell.
inline WeightedComplex add(const WeightedComplex& a, const WeightedComplex& b) {
    if (a.n != b.n) throw input_error("add: ambient mismatch");
    if (a.supported() && b.supported() && a.d != b.d)
        throw input_error("add: dimension mismatch");
    std::vector<ZVec> pool = hyperplane_pool(a.C);
    {
        auto pb = hyperplane_pool(b.C);
        pool.insert(pool.end(), pb.begin(), pb.end());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }
    std::map<std::string, std::pair<Polyhedron, Int>> acc;
    auto feed = [&](const WeightedComplex& wc) {
        for (const auto& [idx, wt] : wc.w)
            for (auto& piece : slice_cell(wc.C.cells[idx], pool)) {
                std::string k = piece.key();
                auto it = acc.find(k);
                if (it == acc.end())
                    acc.emplace(std::move(k), std::make_pair(std::move(piece), wt));
                else
                    it->second.second += wt;
            }
    };
    feed(a);
    feed(b);
    std::vector<std::pair<Polyhedron, Int>> gens;
    for (auto& [k, pw] : acc)
        if (pw.second != 0) gens.emplace_back(std::move(pw.first), pw.second);
    int d = a.supported() ? a.d : b.d;
    return make_weighted(a.n, d, gens, Check::off);
}

// Equality up to common subdivision: the difference must cancel identically.
inline bool equivalent(const WeightedComplex& a, const WeightedComplex& b) {
    if (a.n != b.n) return false;
    if (a.supported() != b.supported()) return false;
    if (!a.supported()) return true;
    if (a.d != b.d) return false;
    return !add(a, negate(b)).supported();
}

// ---------------------------------------------------------------- balancing

struct BalanceCertificate {
    std::size_t tau = 0;
    bool balanced = false;
    ZVec certificate; // sum of weight * primitive generator
    std::vector<std::pair<std::size_t, ZVec>> contributions; // (sigma, omega)
};

// Inward primitive generator of N_sigma / N_tau for a facet tau of sigma.
inline ZVec facet_primitive(const Polyhedron& tau, const Polyhedron& sigma) {
    QVec ps = sigma.relint_point(), pt = tau.relint_point();
    QVec witness(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) witness[i] = ps[i] - pt[i];
    return primitive_generator(tau.span_cols, sigma.span_cols, witness);
}

inline BalanceCertificate balance_at(const WeightedComplex& a, std::size_t tau_idx) {
    const Polyhedron& tau = a.C.cells[tau_idx];
    if (tau.dim != a.d - 1) throw input_error("balance_at: not a codimension-one cell");
    BalanceCertificate cert;
    cert.tau = tau_idx;
    cert.certificate = ZVec(a.n, Int(0));
    for (const auto& [sigma_idx, wt] : a.w) {
        if (!a.C.is_face(tau_idx, sigma_idx)) continue;
        ZVec omega = facet_primitive(tau, a.C.cells[sigma_idx]);
        for (std::size_t i = 0; i < a.n; ++i) cert.certificate[i] += wt * omega[i];
        cert.contributions.emplace_back(sigma_idx, std::move(omega));
    }
    cert.balanced = in_span(to_q(tau.span_cols), to_q(cert.certificate));
    return cert;
}

inline bool is_balanced_at(const WeightedComplex& a, std::size_t tau_idx) {
    return balance_at(a, tau_idx).balanced;
}

inline std::vector<std::size_t> boundary_faces(const WeightedComplex& a) {
    std::vector<std::size_t> out;
    for (auto tau : a.C.of_dim(a.d - 1))
        if (!is_balanced_at(a, tau)) out.push_back(tau);
    return out;
}

inline bool is_tropical_cycle(const WeightedComplex& a) {
    return boundary_faces(a).empty();
}

} // namespace trop
