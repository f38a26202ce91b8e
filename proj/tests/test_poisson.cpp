#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace superw;
using namespace test_support;

TEST_CASE("lie_poisson_structure_constants") {
    auto u = sl2_vars();
    auto P = table_algebra(u, sl2_entries());
    auto e = var(u, "e", 4), h = var(u, "h", 4), f = var(u, "f", 4);
    CHECK(P.bracket(h, e).poly() == (e * Rational(2)).poly());
    auto ad_h = ad_op(P, h);
    CHECK(ad_h(e).poly() == (e * Rational(2)).poly());
    CHECK(ad_h(f).poly() == (f * Rational(-2)).poly());
}

TEST_CASE("symplectic_plane_leibniz") {
    auto u = make_vars({"p", "q"}, {});
    auto P = table_algebra(u, {{0, 1, {{-1, 1}}}});
    auto p = var(u, "p", 6), q = var(u, "q", 6);
    CHECK(P.bracket(p, mul(q, q)).poly() == (q * Rational(2)).poly());
    auto ad_p = ad_op(P, p);
    CHECK(ad_p(q).poly() == cst(u, 1, 6).poly());
    CHECK(ad_p(ad_p(mul(q, q))).poly() == cst(u, 2, 6).poly());
}

TEST_CASE("osp12_odd_self_bracket") {
    auto u = osp12_vars();
    auto P = table_algebra(u, osp12_entries());
    auto x = var(u, "x", 4), e = var(u, "e", 4);
    CHECK(P.bracket(x, x).poly() == (e * Rational(2)).poly());
}

TEST_CASE("bivector_at_trace_form_chi") {
    auto u = sl2_vars();
    auto P = table_algebra(u, sl2_entries());
    // chi = (e, .) under the trace form: chi(f) = 1.
    auto pi = bivector_at(P, {0, 0, 1});
    CHECK(pi.matrix[2][1] == 2);
    CHECK(pi.matrix[0][2] == 0);
    auto w = make_vars({"p", "q"}, {});
    auto S = table_algebra(w, {{0, 1, {{-1, 1}}}});
    auto piw = bivector_at(S, {0, 0});
    CHECK(piw.matrix == Matrix{{0, 1}, {-1, 0}});
}

TEST_CASE("jacobi_checks") {
    CHECK(check_jacobi(table_algebra(sl2_vars(), sl2_entries()), 6).empty());
    CHECK(check_jacobi(table_algebra(osp12_vars(), osp12_entries()), 6).empty());
    auto u = make_vars({"x", "y"}, {});
    CHECK(check_jacobi(table_algebra(u, {{0, 1, {{-1, 1}, {0, 1}}}}), 6).empty());
    auto bad = osp12_entries();
    for (auto& en : bad)
        if (en.i == 3 && en.j == 3) en.value = {{0, 3}};
    auto viol = check_jacobi(table_algebra(osp12_vars(), bad), 6);
    REQUIRE(!viol.empty());
    bool located = false;
    for (const auto& v : viol) located |= (v.i == 3 && v.j == 3 && v.k == 4);
    CHECK(located);
}

TEST_CASE("symplectic_subspace_dimensions") {
    PoissonBivector zero{zero_matrix(3, 3), {Parity::even, Parity::even, Parity::even}};
    auto z = find_symplectic_subspace(zero);
    CHECK(z.blocks.empty());
    CHECK(z.complement.size() == 3);

    auto P = table_algebra(sl2_vars(), sl2_entries());
    auto V = find_symplectic_subspace(bivector_at(P, {0, 0, 1}));
    CHECK(V.even_dim() == 2);
    CHECK(V.odd_dim() == 0);
    CHECK(pair(bivector_at(P, {0, 0, 1}).matrix, V.blocks[0].first, V.blocks[0].second) == 1);

    auto O = table_algebra(osp12_vars(), osp12_entries());
    auto pi = bivector_at(O, {0, 0, 1, 0, 0});
    auto W = find_symplectic_subspace(pi);
    CHECK(W.even_dim() == 2);
    CHECK(W.odd_dim() == 1);
    REQUIRE(W.complement.size() == 2);
    for (const auto& c : W.complement)
        for (const auto& b : W.blocks) {
            CHECK(pair(pi.matrix, c, b.first) == 0);
            if (!b.second.empty()) CHECK(pair(pi.matrix, c, b.second) == 0);
        }
}

TEST_CASE("biderivation_antisymmetry_jacobi_random") {
    std::mt19937_64 rng(5);
    auto u = osp12_vars();
    auto P = table_algebra(u, osp12_entries());
    for (int trial = 0; trial < 30; ++trial) {
        int pf = trial % 2, pg = (trial / 2) % 2, ph = (trial / 4) % 2;
        Series f = random_series(rng, u, 1, 3, 6, 4, pf);
        Series g = random_series(rng, u, 1, 3, 6, 4, pg);
        Series h = random_series(rng, u, 1, 3, 6, 4, ph);
        Series lhs = P.bracket(f, mul(g, h));
        Series rhs = mul(P.bracket(f, g), h) + mul(g, P.bracket(f, h)) * Rational((pf && pg) ? -1 : 1);
        int o = std::min(lhs.order(), rhs.order());
        CHECK(lhs.truncated(o) == rhs.truncated(o));
        Series fg = P.bracket(f, g), gf = P.bracket(g, f);
        CHECK(fg == gf * Rational((pf && pg) ? 1 : -1));
        Series j1 = P.bracket(f, P.bracket(g, h));
        Series j2 = P.bracket(P.bracket(f, g), h);
        Series j3 = P.bracket(g, P.bracket(f, h)) * Rational((pf && pg) ? -1 : 1);
        Series jr = j1 - j2 - j3;
        CHECK(jr.is_zero());
    }
}

TEST_CASE("lie_poisson_equivariance_shift") {
    auto u = make_vars({"e", "h", "f"}, {}, {4, 2, 0});
    auto P = table_algebra(u, sl2_entries(), -2);
    CHECK(check_equivariance(P).empty());
    auto Q = table_algebra(u, sl2_entries(), 0);
    CHECK(!check_equivariance(Q).empty());
}
