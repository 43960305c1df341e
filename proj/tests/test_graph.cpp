#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "trop/graph.hpp"

using namespace trop;

namespace {

// path 0 -- 1 -- 2 with the ends marked as boundary
MetricGraph path3() {
    return make_graph(3, {{0, 1, Rat(1), Int(1)}, {1, 2, Rat(1), Int(1)}}, {0, 2});
}

// one edge of length 1 with both ends boundary
MetricGraph segment() { return make_graph(2, {{0, 1, Rat(1), Int(1)}}, {0, 1}); }

// two vertices joined by two parallel edges
MetricGraph circle(Rat l0 = Rat(1), Rat l1 = Rat(1)) {
    return make_graph(2, {{0, 1, l0, Int(1)}, {0, 1, l1, Int(1)}});
}

QVec qv(std::initializer_list<long long> xs) {
    QVec v;
    for (auto x : xs) v.emplace_back(Int(x));
    return v;
}

} // namespace

TEST_CASE("graph construction rejects bad data") {
    CHECK_THROWS_AS(make_graph(2, {{0, 0, Rat(1), Int(1)}}), input_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 1, Rat(0), Int(1)}}), input_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 1, Rat(1), Int(0)}}), input_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 3, Rat(1), Int(1)}}), input_error);
    CHECK_THROWS_AS(make_graph(2, {{0, 1, Rat(1), Int(1)}}, {5}), input_error);
    CHECK_THROWS_AS(theta_graph(Rat(1), Rat(-1), Rat(1)), input_error);
}

TEST_CASE("piecewise linear functions validate breakpoints") {
    MetricGraph g = segment();
    CHECK_THROWS_AS(make_graph_pl(g, {Rat(0)}), input_error);
    CHECK_THROWS_AS(make_graph_pl(g, {Rat(0), Rat(1)}, {{0, {{Rat(2), Rat(0)}}}}), input_error);
    CHECK_THROWS_AS(
        make_graph_pl(g, {Rat(0), Rat(1)}, {{0, {{Rat(1, 2), Rat(0)}, {Rat(1, 4), Rat(0)}}}}),
        input_error);
}

TEST_CASE("harmonicity on the three-vertex path") {
    MetricGraph g = path3();
    CHECK(is_harmonic(g, constant_pl(g, Rat(7))).harmonic);

    auto lin = make_graph_pl(g, {Rat(0), Rat(1), Rat(2)});
    CHECK(is_harmonic(g, lin).harmonic);

    auto bent = make_graph_pl(g, {Rat(0), Rat(1), Rat(1)});
    auto rep = is_harmonic(g, bent);
    CHECK_FALSE(rep.harmonic);
    REQUIRE(rep.defects.size() == 1);
    CHECK(rep.defects[0].first == 1);
    CHECK(rep.defects[0].second == Rat(-1));

    // interior breakpoints disqualify even when the vertex sums vanish
    MetricGraph s = segment();
    auto kinked = make_graph_pl(s, {Rat(0), Rat(0)}, {{0, {{Rat(1, 2), Rat(1)}}}});
    CHECK_FALSE(is_harmonic(s, kinked).harmonic);
    CHECK_FALSE(is_harmonic(s, kinked).edge_affine);
}

TEST_CASE("dirichlet solve on small graphs") {
    MetricGraph g = path3();
    GraphPL h = solve_dirichlet(g, {{0, Rat(0)}, {2, Rat(1)}});
    CHECK(h.at_vertex[1] == Rat(1, 2));
    CHECK(is_harmonic(g, h).harmonic);

    GraphPL c = solve_dirichlet(g, {{0, Rat(3)}, {2, Rat(3)}});
    CHECK(c.at_vertex == std::vector<Rat>{Rat(3), Rat(3), Rat(3)});

    // theta with both vertices on the boundary: every edge runs 0 to 1
    MetricGraph th = make_graph(2, theta_graph(Rat(1), Rat(1), Rat(1)).edges, {0, 1});
    GraphPL ht = solve_dirichlet(th, {{0, Rat(0)}, {1, Rat(1)}});
    for (std::size_t e = 0; e < 3; ++e) {
        CHECK(ht.on_edge[e].front().value == Rat(0));
        CHECK(ht.on_edge[e].back().value == Rat(1));
        CHECK(ht.on_edge[e].size() == 2);
    }

    // unequal conductances move the middle value
    MetricGraph gw = make_graph(
        3, {{0, 1, Rat(1), Int(3)}, {1, 2, Rat(1), Int(1)}}, {0, 2});
    GraphPL hw = solve_dirichlet(gw, {{0, Rat(0)}, {2, Rat(1)}});
    CHECK(hw.at_vertex[1] == Rat(1, 4));
}

TEST_CASE("dirichlet solve validates its input") {
    MetricGraph g = path3();
    CHECK_THROWS_AS(solve_dirichlet(g, {{0, Rat(0)}}), input_error);
    CHECK_THROWS_AS(solve_dirichlet(g, {{0, Rat(0)}, {1, Rat(0)}, {2, Rat(0)}}), input_error);

    // second component has no boundary vertex
    MetricGraph two = make_graph(
        4, {{0, 1, Rat(1), Int(1)}, {2, 3, Rat(1), Int(1)}}, {0});
    CHECK_THROWS_AS(solve_dirichlet(two, {{0, Rat(0)}}), input_error);
}

TEST_CASE("subharmonicity distinguishes tents from wells") {
    MetricGraph s = segment();
    auto vee = make_graph_pl(s, {Rat(1, 2), Rat(1, 2)}, {{0, {{Rat(1, 2), Rat(0)}}}});
    auto tent = make_graph_pl(s, {Rat(0), Rat(0)}, {{0, {{Rat(1, 2), Rat(1, 2)}}}});
    CHECK(is_subharmonic(s, vee));
    CHECK_FALSE(is_subharmonic(s, tent));
    CHECK(is_subharmonic(s, make_graph_pl(s, {Rat(0), Rat(5)})));
}

TEST_CASE("laplacian divisor of a kinked function") {
    MetricGraph s = segment();
    // max(0, x - 1/2): flat then slope one
    auto h = make_graph_pl(s, {Rat(0), Rat(1, 2)}, {{0, {{Rat(1, 2), Rat(0)}}}});
    GraphDivisor d = laplacian_divisor(s, h);
    REQUIRE(d.at_break.size() == 1);
    CHECK(d.at_break.at({0, Rat(1, 2)}) == Rat(1));
    CHECK(d.at_vertex.count(0) == 0);
    CHECK(d.at_vertex.at(1) == Rat(-1));
    CHECK(d.total() == Rat(0));

    // two antipodal kinks on a circle
    MetricGraph c = circle();
    auto tents = make_graph_pl(c, {Rat(0), Rat(0)},
                               {{0, {{Rat(1, 2), Rat(1, 2)}}}, {1, {{Rat(1, 2), Rat(-1, 2)}}}});
    GraphDivisor dc = laplacian_divisor(c, tents);
    CHECK(dc.at_vertex.empty());
    CHECK(dc.at_break.at({0, Rat(1, 2)}) == Rat(-2));
    CHECK(dc.at_break.at({1, Rat(1, 2)}) == Rat(2));
    CHECK(dc.total() == Rat(0));
}

TEST_CASE("total laplacian mass vanishes without boundary") {
    gen::Rng rng(901);
    for (int it = 0; it < 30; ++it) {
        MetricGraph g = gen::random_graph(rng, 8, false);
        g.boundary.clear();
        GraphPL h = gen::random_graph_pl(rng, g, true);
        CHECK(laplacian_divisor(g, h).total() == Rat(0));
    }
}

TEST_CASE("cycle space dimensions") {
    CHECK(cycle_basis(theta_graph(Rat(1), Rat(1), Rat(1))).betti == 2);
    CHECK(cycle_basis(path3()).betti == 0);
    CHECK(cycle_basis(circle()).betti == 1);
    // disconnected: two circles
    MetricGraph two = make_graph(4, {{0, 1, Rat(1), Int(1)},
                                     {0, 1, Rat(2), Int(1)},
                                     {2, 3, Rat(3), Int(1)},
                                     {2, 3, Rat(4), Int(1)}});
    CHECK(cycle_basis(two).betti == 2);
}

TEST_CASE("edge length pairing") {
    MetricGraph th = theta_graph(Rat(1), Rat(1), Rat(1));
    auto cb = cycle_basis(th);
    QMat gram = edge_length_pairing(th, cb.cycles);
    CHECK(gram.at(0, 0) == Rat(2));
    CHECK(gram.at(1, 1) == Rat(2));
    CHECK(gram.at(0, 1) == Rat(1));
    CHECK(gram.at(1, 0) == Rat(1));

    MetricGraph c = circle(Rat(3, 2), Rat(5, 2));
    QMat gc = edge_length_pairing(c, cycle_basis(c).cycles);
    CHECK(gc.at(0, 0) == Rat(4));

    MetricGraph two = make_graph(4, {{0, 1, Rat(2), Int(1)},
                                     {0, 1, Rat(3), Int(1)},
                                     {2, 3, Rat(1), Int(1)},
                                     {2, 3, Rat(4), Int(1)}});
    QMat gt = edge_length_pairing(two, cycle_basis(two).cycles);
    CHECK(gt.at(0, 1) == Rat(0));
    CHECK(gt.at(1, 0) == Rat(0));
    CHECK(gt.at(0, 0) == Rat(5));
    CHECK(gt.at(1, 1) == Rat(5));

    // positive definite: leading minors of the gram matrix
    gen::Rng rng(902);
    for (int it = 0; it < 20; ++it) {
        MetricGraph g = gen::random_graph(rng, 8, false);
        auto cycles = cycle_basis(g).cycles;
        QMat gm = edge_length_pairing(g, cycles);
        for (std::size_t k = 1; k <= cycles.size(); ++k) {
            QMat minor(k, k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t jj = 0; jj < k; ++jj) minor.at(i, jj) = gm.at(i, jj);
            CHECK(det(minor) > 0);
        }
    }
}

TEST_CASE("jacobian lattices") {
    // covolume matches the determinant in the classical coordinates
    CHECK(jacobian(theta_graph(Rat(1), Rat(2), Rat(3))).covolume == Rat(11));
    CHECK(jacobian(circle(Rat(2), Rat(3))).covolume == Rat(5));
    CHECK(jacobian(path3()).rank == 0);
    CHECK(jacobian(path3()).covolume == Rat(1));
    MetricGraph two = make_graph(4, {{0, 1, Rat(1), Int(1)}, {2, 3, Rat(1), Int(1)}});
    CHECK_THROWS_AS(jacobian(two), input_error);
}

TEST_CASE("theta coordinates reproduce the classical description") {
    ThetaReport rep = theta_coordinates(Rat(2), Rat(3), Rat(5));
    REQUIRE(rep.jac.rank == 2);
    CHECK(rep.jac.iota.row(0) == qv({7, 5}));
    CHECK(rep.jac.iota.row(1) == qv({5, 8}));
    CHECK(rep.jac.covolume == Rat(31));

    // edge a: t -> (-t + la + lc, lc)
    CHECK(rep.images[0].offset == qv({7, 5}));
    CHECK(rep.images[0].slope == qv({-1, 0}));
    // edge b: t -> (lc, -t + lb + lc)
    CHECK(rep.images[1].offset == qv({5, 8}));
    CHECK(rep.images[1].slope == qv({0, -1}));
    // edge c: t -> (t, t)
    CHECK(rep.images[2].offset == qv({0, 0}));
    CHECK(rep.images[2].slope == qv({1, 1}));

    // base point maps to zero
    auto aj = abel_jacobi(rep.graph, rep.jac, 0, vertex_point(0));
    CHECK(aj.raw == qv({0, 0}));
    CHECK(aj.reduced == qv({0, 0}));
}

TEST_CASE("abel-jacobi is path independent modulo the lattice") {
    gen::Rng rng(903);
    int done = 0;
    while (done < 25) {
        MetricGraph g = gen::random_graph(rng, 7, false);
        if (!is_connected(g)) continue;
        JacobianDesc j = jacobian(g);
        std::size_t base = std::size_t(gen::pick(rng, 0, (long long)g.nv - 1));
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            // the full-edge point and the head vertex are the same point of
            // the graph reached along different paths
            auto via_edge = abel_jacobi(g, j, base, edge_point(e, g.edges[e].length));
            auto via_vertex = abel_jacobi(g, j, base, vertex_point(g.edges[e].head));
            CHECK(via_edge.reduced == via_vertex.reduced);
            auto from_tail = abel_jacobi(g, j, base, edge_point(e, Rat(0)));
            auto at_tail = abel_jacobi(g, j, base, vertex_point(g.edges[e].tail));
            CHECK(from_tail.reduced == at_tail.reduced);
        }
        ++done;
    }
}

TEST_CASE("dolbeault dimension table") {
    auto th = dolbeault_dims(theta_graph(Rat(1), Rat(1), Rat(1)));
    CHECK(th == std::array<std::size_t, 4>{1, 2, 2, 1});
    auto ci = dolbeault_dims(circle());
    CHECK(ci == std::array<std::size_t, 4>{1, 1, 1, 1});
    auto pt = dolbeault_dims(make_graph(1, {}));
    CHECK(pt == std::array<std::size_t, 4>{1, 0, 0, 1});
    CHECK_THROWS_AS(dolbeault_dims(path3()), input_error);
    MetricGraph two = make_graph(4, {{0, 1, Rat(1), Int(1)}, {2, 3, Rat(1), Int(1)}});
    CHECK_THROWS_AS(dolbeault_dims(two), input_error);
}

TEST_CASE("dirichlet solutions obey the maximum principle") {
    gen::Rng rng(904);
    int done = 0;
    while (done < 40) {
        MetricGraph g = gen::random_graph(rng, 10, true);
        std::map<std::size_t, Rat> bv;
        for (auto v : g.boundary) bv[v] = Rat(Int(gen::pick(rng, -5, 5)), Int(gen::pick(rng, 1, 2)));
        GraphPL h;
        try {
            h = solve_dirichlet(g, bv);
        } catch (const input_error&) {
            continue; // some component missed the boundary
        }
        CHECK(is_harmonic(g, h).harmonic);
        CHECK(laplacian_divisor(g, h).supported_on(g.boundary));
        Rat bmax = bv.begin()->second, bmin = bv.begin()->second;
        for (const auto& [_, x] : bv) {
            bmax = std::max(bmax, x);
            bmin = std::min(bmin, x);
        }
        for (const auto& x : h.at_vertex) {
            CHECK(x <= bmax);
            CHECK(x >= bmin);
        }
        ++done;
    }
}

TEST_CASE("harmonic functions on a boundaryless graph are constant") {
    gen::Rng rng(905);
    int done = 0;
    while (done < 20) {
        MetricGraph g = gen::random_graph(rng, 8, false);
        if (!is_connected(g)) continue;
        // pin one vertex; uniqueness forces the constant extension
        g.boundary = {0};
        GraphPL h = solve_dirichlet(g, {{0, Rat(2)}});
        for (const auto& x : h.at_vertex) CHECK(x == Rat(2));
        ++done;
    }
}
