#include <catch2/catch_amalgamated.hpp>

#include "gen.hpp"
#include "trop/cycles.hpp"

using namespace trop;

namespace {

QVec qv(std::initializer_list<long long> xs) {
    QVec v;
    for (auto x : xs) v.emplace_back(Int(x));
    return v;
}

ZVec zv(std::initializer_list<long long> xs) {
    ZVec v;
    for (auto x : xs) v.emplace_back(x);
    return v;
}

// rays (-1,0), (0,-1), (1,1) from the origin, all weight 1
WeightedComplex tropical_line(Int wt = 1) {
    QVec o = qv({0, 0});
    auto ray = [&](long long a, long long b) {
        return polyhedron_from_v(2, {o}, {qv({a, b})});
    };
    return make_weighted(2, 1,
                         {{ray(-1, 0), wt}, {ray(0, -1), wt}, {ray(1, 1), wt}});
}

WeightedComplex half_line() {
    return make_weighted(2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {qv({1, 0})}), Int(1)}});
}

WeightedComplex real_line_wt(Int wt) {
    return make_weighted(1, 1, {{polyhedron_from_h(1, {}), wt}});
}

} // namespace

TEST_CASE("tropical line is balanced with zero certificates") {
    WeightedComplex a = tropical_line();
    REQUIRE(is_tropical_cycle(a));
    auto zero_cells = a.C.of_dim(0);
    REQUIRE(zero_cells.size() == 1);
    auto cert = balance_at(a, zero_cells[0]);
    REQUIRE(cert.balanced);
    REQUIRE(cert.contributions.size() == 3);
    REQUIRE(cert.certificate == zv({0, 0}));
    std::set<ZVec> omegas;
    for (const auto& [_, w] : cert.contributions) omegas.insert(w);
    REQUIRE(omegas == std::set<ZVec>{zv({-1, 0}), zv({0, -1}), zv({1, 1})});
}

TEST_CASE("half-line fails balancing at the origin with certificate (1,0)") {
    WeightedComplex a = half_line();
    auto bad = boundary_faces(a);
    REQUIRE(bad.size() == 1);
    auto cert = balance_at(a, bad[0]);
    REQUIRE_FALSE(cert.balanced);
    REQUIRE(cert.certificate == zv({1, 0}));
}

TEST_CASE("segment endpoints are the boundary, interior subdivision points are not") {
    auto seg = [&](long long a, long long b) {
        return polyhedron_from_v(1, {qv({a}), qv({b})});
    };
    WeightedComplex chain =
        make_weighted(1, 1, {{seg(0, 1), Int(2)}, {seg(1, 3), Int(2)}});
    auto bad = boundary_faces(chain);
    REQUIRE(bad.size() == 2);
    std::set<std::string> keys;
    for (auto t : bad) keys.insert(chain.C.cells[t].key());
    REQUIRE(keys == std::set<std::string>{polyhedron_from_v(1, {qv({0})}).key(),
                                          polyhedron_from_v(1, {qv({3})}).key()});

    WeightedComplex mismatched =
        make_weighted(1, 1, {{seg(0, 1), Int(2)}, {seg(1, 3), Int(1)}});
    REQUIRE(boundary_faces(mismatched).size() == 3);
}

TEST_CASE("square boundary cycle is unbalanced exactly at the corners") {
    auto seg = [&](QVec a, QVec b) { return polyhedron_from_v(2, {a, b}); };
    QVec c00 = qv({0, 0}), c10 = qv({1, 0}), c01 = qv({0, 1}), c11 = qv({1, 1});
    WeightedComplex sq = make_weighted(
        2, 1,
        {{seg(c00, c10), Int(1)}, {seg(c10, c11), Int(1)}, {seg(c01, c11), Int(1)}, {seg(c00, c01), Int(1)}});
    auto bad = boundary_faces(sq);
    REQUIRE(bad.size() == 4);
    auto corner = balance_at(sq, bad[0]);
    REQUIRE_FALSE(corner.balanced);
    // two inward primitives from a corner sum to (+-1, +-1)
    REQUIRE((abs(corner.certificate[0]) == 1 && abs(corner.certificate[1]) == 1));
}

TEST_CASE("weighted sums respect subdivision") {
    WeightedComplex whole = real_line_wt(1);
    WeightedComplex split = make_weighted(
        1, 1,
        {{polyhedron_from_h(1, {{qv({1}), Rat(0)}}), Int(1)},
         {polyhedron_from_h(1, {{qv({-1}), Rat(0)}}), Int(1)}});
    REQUIRE(equivalent(whole, split));
    REQUIRE(equivalent(add(whole, whole), scale_weights(split, 2)));
    REQUIRE_FALSE(add(whole, negate(split)).supported());
    REQUIRE_FALSE(equivalent(whole, real_line_wt(2)));

    WeightedComplex line = tropical_line();
    REQUIRE(equivalent(add(line, negate(line)), make_weighted(2, 1, {})));
    REQUIRE(is_tropical_cycle(add(line, line)));
}

TEST_CASE("divisor of max(0,x) on R is the origin with weight 1") {
    WeightedComplex a = real_line_wt(1);
    PLFunction f = max_pl(1, {AffPiece{zv({0}), Rat(0)}, AffPiece{zv({1}), Rat(0)}});
    REQUIRE(f.eval(qv({-5})) == 0);
    REQUIRE(f.eval(qv({4})) == 4);
    auto res = weil_divisor(a, f);
    REQUIRE(res.divisor.supported());
    REQUIRE(res.divisor.d == 0);
    REQUIRE(res.divisor.w.size() == 1);
    auto [idx, wt] = *res.divisor.w.begin();
    REQUIRE(wt == 1);
    REQUIRE(res.divisor.C.cells[idx].key() == polyhedron_from_v(1, {qv({0})}).key());
    for (const auto& face : res.faces) REQUIRE(face.balanced);
}

TEST_CASE("divisor of an affine function vanishes") {
    REQUIRE_FALSE(weil_divisor(tropical_line(), pl_affine(2, zv({2, -3}), Rat(5))).divisor.supported());
    REQUIRE_FALSE(weil_divisor(real_line_wt(3), pl_affine(1, zv({7}), Rat(1, 2))).divisor.supported());
}

TEST_CASE("divisor of max(0,x,y) on the plane is the tropical line") {
    WeightedComplex plane = make_weighted(2, 2, {{polyhedron_from_h(2, {}), Int(1)}});
    PLFunction f = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)},
                              AffPiece{zv({0, 1}), Rat(0)}});
    auto div = weil_divisor(plane, f).divisor;
    REQUIRE(equivalent(div, tropical_line()));
    REQUIRE(is_tropical_cycle(div));
}

TEST_CASE("divisor of max(0,x) restricted to the tropical line") {
    WeightedComplex line = tropical_line();
    PLFunction f = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)}});
    auto res = weil_divisor(line, f);
    REQUIRE(res.divisor.supported());
    REQUIRE(res.divisor.w.size() == 1);
    auto [idx, wt] = *res.divisor.w.begin();
    REQUIRE(wt == 1);
    REQUIRE(res.divisor.C.cells[idx].key() == polyhedron_from_v(2, {qv({0, 0})}).key());
}

TEST_CASE("divisor is linear in the function where both sides are defined") {
    WeightedComplex line = tropical_line();
    PLFunction f = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)}});
    PLFunction g = pl_affine(2, zv({1, 1}), Rat(-2));
    // f + g piece by piece over f's domain
    std::vector<std::pair<std::size_t, AffPiece>> sum_data;
    for (auto m : f.dom.maximal()) {
        AffPiece a = f.aff[m];
        for (std::size_t i = 0; i < 2; ++i) a.u[i] += g.aff[0].u[i];
        a.c += g.aff[0].c;
        sum_data.emplace_back(m, a);
    }
    PLFunction fg = make_pl(f.dom, sum_data);
    auto d_fg = weil_divisor(line, fg).divisor;
    auto d_f = weil_divisor(line, f).divisor;
    auto d_g = weil_divisor(line, g).divisor;
    REQUIRE(equivalent(d_fg, add(d_f, d_g)));
}

TEST_CASE("graph lifts of simple functions over the real line") {
    WeightedComplex a = real_line_wt(1);
    // identity lift: the diagonal
    WeightedComplex diag = graph_lift(a, pl_affine(1, zv({1}), Rat(0)));
    REQUIRE(diag.d == 1);
    REQUIRE(diag.n == 2);
    WeightedComplex expect_diag = make_weighted(
        2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {qv({1, 1})}, {qv({1, 1})}), Int(1)}});
    REQUIRE(equivalent(diag, expect_diag));
    REQUIRE(is_tropical_cycle(diag));

    // |x| lift: rays (1,1) and (-1,1), unbalanced at the kink
    PLFunction absx = max_pl(1, {AffPiece{zv({1}), Rat(0)}, AffPiece{zv({-1}), Rat(0)}});
    WeightedComplex vee = graph_lift(a, absx);
    QVec o = qv({0, 0});
    WeightedComplex expect_vee = make_weighted(
        2, 1,
        {{polyhedron_from_v(2, {o}, {qv({1, 1})}), Int(1)},
         {polyhedron_from_v(2, {o}, {qv({-1, 1})}), Int(1)}});
    REQUIRE(equivalent(vee, expect_vee));
    REQUIRE_FALSE(is_tropical_cycle(vee));

    // a point lifts to a point
    WeightedComplex pt = make_weighted(1, 0, {{polyhedron_from_v(1, {qv({3})}), Int(1)}});
    WeightedComplex lifted_pt = graph_lift(pt, absx);
    REQUIRE(lifted_pt.d == 0);
    REQUIRE(lifted_pt.C.cells.at(*lifted_pt.weighted_cells().begin()).key() ==
            polyhedron_from_v(2, {qv({3, 3})}).key());
}

TEST_CASE("graph balancing criterion on hand instances") {
    WeightedComplex line = tropical_line();
    PLFunction maxx = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)}});

    auto r1 = graph_balancing_criterion(line, maxx);
    REQUIRE(r1.base_balanced);
    REQUIRE_FALSE(r1.divisor_zero);
    REQUIRE_FALSE(r1.graph_balanced);
    REQUIRE(r1.equivalence_holds);

    auto r2 = graph_balancing_criterion(line, pl_affine(2, zv({4, 1}), Rat(3)));
    REQUIRE(r2.base_balanced);
    REQUIRE(r2.divisor_zero);
    REQUIRE(r2.graph_balanced);
    REQUIRE(r2.equivalence_holds);

    auto r3 = graph_balancing_criterion(half_line(), pl_affine(2, zv({0, 0}), Rat(0)));
    REQUIRE_FALSE(r3.base_balanced);
    REQUIRE(r3.divisor_zero);
    REQUIRE_FALSE(r3.graph_balanced);
    REQUIRE(r3.equivalence_holds);
}

TEST_CASE("pushforward of the line R(1,3) to the second coordinate has weight 3") {
    WeightedComplex a = make_weighted(
        2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {}, {qv({1, 3})}), Int(1)}});
    PLMap proj_y = affine_map(ZMat(std::size_t(1), std::size_t(2), {Int(0), Int(1)}), qv({0}));
    WeightedComplex push = pushforward(a, proj_y);
    REQUIRE(equivalent(push, real_line_wt(3)));
}

TEST_CASE("pushforward drops collapsed cells and respects identity") {
    // vertical line collapses under x-projection
    WeightedComplex vert = make_weighted(
        2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {}, {qv({0, 1})}), Int(1)}});
    PLMap proj_x = affine_map(ZMat(std::size_t(1), std::size_t(2), {Int(1), Int(0)}), qv({0}));
    REQUIRE_FALSE(pushforward(vert, proj_x).supported());

    // diagonal line maps to the axis with index 1
    WeightedComplex diag = make_weighted(
        2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {}, {qv({1, 1})}), Int(1)}});
    REQUIRE(equivalent(pushforward(diag, proj_x), real_line_wt(1)));

    // identity on the tropical line
    WeightedComplex line = tropical_line();
    PLMap ident = affine_map(ZMat::identity(2), qv({0, 0}));
    REQUIRE(equivalent(pushforward(line, ident), line));

    // additivity in the cycle
    WeightedComplex two = add(diag, diag);
    REQUIRE(equivalent(pushforward(two, proj_x),
                       add(pushforward(diag, proj_x), pushforward(diag, proj_x))));
}

TEST_CASE("pushforward functoriality on hand and random instances") {
    WeightedComplex line = tropical_line();
    // embed the line as the graph of max(0,x,y), then project back
    PLFunction mx = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)},
                               AffPiece{zv({0, 1}), Rat(0)}});
    PLMap embed = make_plmap(2, {pl_affine(2, zv({1, 0}), Rat(0)),
                                 pl_affine(2, zv({0, 1}), Rat(0)), mx});
    ZMat back(std::size_t(2), std::size_t(3), {Int(1), Int(0), Int(0), Int(0), Int(1), Int(0)});
    PLMap project = affine_map(back, qv({0, 0}));

    // the lift is not balanced (the function has nonzero divisor on the line),
    // but projecting back still recovers the cycle
    WeightedComplex lifted = pushforward(line, embed);
    REQUIRE(equivalent(pushforward(lifted, project), line));

    auto rep = pushforward_functoriality(line, embed, project);
    REQUIRE(rep.agree);
    REQUIRE(equivalent(rep.composed_then_pushed, line));

    gen::Rng rng(314159);
    for (int t = 0; t < 25; ++t) {
        std::size_t n = std::size_t(gen::pick(rng, 1, 3));
        WeightedComplex c = gen::random_cycle(rng, n);
        if (!c.supported()) continue;
        std::size_t m = std::size_t(gen::pick(rng, 1, 3));
        std::size_t k = std::size_t(gen::pick(rng, 1, 3));
        PLMap f = gen::random_linear_map(rng, n, m, 2);
        PLMap g = gen::random_linear_map(rng, m, k, 2);
        REQUIRE(pushforward_functoriality(c, f, g).agree);
    }
}

TEST_CASE("projection formula on hand instances") {
    WeightedComplex line = tropical_line();
    PLFunction mx = max_pl(2, {AffPiece{zv({0, 0}), Rat(0)}, AffPiece{zv({1, 0}), Rat(0)},
                               AffPiece{zv({0, 1}), Rat(0)}});
    PLMap ident = affine_map(ZMat::identity(2), qv({0, 0}));
    auto r1 = projection_formula(line, ident, mx);
    REQUIRE(r1.agree);
    REQUIRE(r1.rhs.supported());

    // diagonal line, x-projection, max(0,x): both sides a point of weight 1
    WeightedComplex diag = make_weighted(
        2, 1, {{polyhedron_from_v(2, {qv({0, 0})}, {}, {qv({1, 1})}), Int(1)}});
    PLMap proj_x = affine_map(ZMat(std::size_t(1), std::size_t(2), {Int(1), Int(0)}), qv({0}));
    PLFunction maxx = max_pl(1, {AffPiece{zv({0}), Rat(0)}, AffPiece{zv({1}), Rat(0)}});
    auto r2 = projection_formula(diag, proj_x, maxx);
    REQUIRE(r2.agree);
    REQUIRE(r2.lhs.supported());
    REQUIRE(equivalent(r2.lhs, make_weighted(1, 0, {{polyhedron_from_v(1, {qv({0})}), Int(1)}})));

    // affine phi: both sides vanish
    auto r3 = projection_formula(line, ident, pl_affine(2, zv({1, 2}), Rat(0)));
    REQUIRE(r3.agree);
    REQUIRE_FALSE(r3.lhs.supported());

    // tropical line in the x3 = 0 plane of R^3, projected away
    WeightedComplex line3 = graph_lift(line, pl_affine(2, zv({0, 0}), Rat(0)));
    ZMat drop(std::size_t(2), std::size_t(3),
              {Int(1), Int(0), Int(0), Int(0), Int(1), Int(0)});
    auto r4 = projection_formula(line3, affine_map(drop, qv({0, 0})), mx);
    REQUIRE(r4.agree);
    REQUIRE(r4.rhs.supported());
}

TEST_CASE("graph balancing criterion holds on random instances") {
    gen::Rng rng(20260825);
    int done = 0;
    for (int t = 0; t < 60; ++t) {
        std::size_t n = std::size_t(gen::pick(rng, 1, 3));
        WeightedComplex c = gen::random_cycle(rng, n);
        if (!c.supported() || c.d < 1) continue;
        PLFunction f = gen::pick(rng, 0, 2) == 0
                           ? pl_affine(n, gen::zvec(rng, n, -2, 2), Rat(Int(gen::pick(rng, -2, 2))))
                           : gen::random_max_pl(rng, n, std::size_t(gen::pick(rng, 2, 3)), 2);
        auto rep = graph_balancing_criterion(c, f);
        REQUIRE(rep.equivalence_holds);
        ++done;
    }
    REQUIRE(done >= 40);
}

TEST_CASE("divisor-zero maps lift balanced cycles to balanced graphs") {
    gen::Rng rng(777);
    int done = 0;
    for (int t = 0; t < 40 && done < 20; ++t) {
        std::size_t n = std::size_t(gen::pick(rng, 1, 3));
        WeightedComplex c = gen::random_fan(rng, n, true);
        if (!c.supported()) continue;
        REQUIRE(is_tropical_cycle(c));
        std::size_t k = std::size_t(gen::pick(rng, 1, 2));
        std::vector<PLFunction> comps;
        for (std::size_t i = 0; i < k; ++i)
            comps.push_back(pl_affine(n, gen::zvec(rng, n, -2, 2), Rat(Int(gen::pick(rng, -1, 1)))));
        PLMap L = make_plmap(n, comps);
        for (const auto& comp : L.comps)
            REQUIRE_FALSE(weil_divisor(c, comp).divisor.supported());
        REQUIRE(is_tropical_cycle(graph_lift(c, L)));
        ++done;
    }
    REQUIRE(done >= 20);
}

TEST_CASE("restriction machinery validates inputs") {
    WeightedComplex line = tropical_line();
    // function defined only on the right half-plane cannot restrict to the line
    PolyComplex half = build_complex(
        2, {polyhedron_from_h(2, {{qv({1, 0}), Rat(0)}})}, Check::off);
    PLFunction f = make_pl(half, {{half.maximal().front(), AffPiece{zv({1, 0}), Rat(0)}}});
    REQUIRE_THROWS_AS(weil_divisor(line, f), input_error);

    // mismatched ambient dimension
    REQUIRE_THROWS_AS(weil_divisor(line, pl_affine(3, zv({1, 0, 0}), Rat(0))), input_error);

    // discontinuous data refused
    PolyComplex segs = build_complex(
        1, {polyhedron_from_h(1, {{qv({1}), Rat(0)}}), polyhedron_from_h(1, {{qv({-1}), Rat(0)}})},
        Check::off);
    std::vector<std::pair<std::size_t, AffPiece>> bad;
    for (auto m : segs.maximal())
        bad.emplace_back(m, segs.cells[m].contains(qv({1}))
                                ? AffPiece{zv({1}), Rat(1)}
                                : AffPiece{zv({0}), Rat(0)});
    REQUIRE_THROWS_AS(make_pl(segs, bad), input_error);
}
