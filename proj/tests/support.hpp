#pragma once

#include <superw/supercore.hpp>

#include <random>
#include <string>
#include <vector>

namespace test_support {

using namespace superw;

inline UniversePtr make_vars(const std::vector<std::string>& even, const std::vector<std::string>& odd,
                             std::vector<int> weights = {}) {
    std::vector<GradedVariable> vs;
    int id = 0;
    for (const auto& n : even) vs.push_back({id++, n, Parity::even, 0, true});
    for (const auto& n : odd) vs.push_back({id++, n, Parity::odd, 0, true});
    for (std::size_t i = 0; i < weights.size() && i < vs.size(); ++i) vs[i].weight = weights[i];
    return make_universe(vs);
}

inline Series var(const UniversePtr& u, const std::string& name, int order) {
    return Series::variable(u, *u->find(name), order);
}

inline Series cst(const UniversePtr& u, const Rational& c, int order) { return Series::constant(u, c, order); }

// Random polynomial of adic order between lo and hi with small integer coefficients.
inline Series random_series(std::mt19937_64& rng, const UniversePtr& u, int lo, int hi, int order, int terms,
                            int parity = -1) {
    SuperPoly p(u);
    std::uniform_int_distribution<int> coef(-3, 3), var(0, u->size() - 1), len(lo, hi);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        int n = len(rng);
        for (int k = 0; k < n; ++k) {
            int v = var(rng);
            int e = m.exponent(v) + 1;
            if ((*u)[v].parity == Parity::odd && e > 1) continue;
            m = m.with_exponent(v, e);
        }
        if (parity >= 0 && bit(superw::parity(*u, m)) != parity) continue;
        p.add_term(m, coef(rng));
    }
    return {p, order};
}

}  // namespace test_support

#include <superw/poisson.hpp>

#include <tuple>

namespace test_support {

struct BracketEntry {
    int i, j;
    std::vector<std::pair<int, Rational>> value;  // (variable, coefficient); variable -1 is the constant
};

inline PoissonAlgebra table_algebra(const UniversePtr& u, const std::vector<BracketEntry>& entries, int k = 0) {
    BracketTable t;
    for (const auto& e : entries) {
        SuperPoly p(u);
        for (auto [v, c] : e.value) p.add_term(v < 0 ? Monomial() : Monomial::var(v), c);
        t[{e.i, e.j}] = p;
    }
    return PoissonAlgebra(u, t, k);
}

// sl2 with basis e, h, f.
inline std::vector<BracketEntry> sl2_entries() {
    return {{0, 1, {{0, -2}}}, {0, 2, {{1, 1}}}, {1, 2, {{2, -2}}}};
}

// osp(1|2) with basis e, h, f | x, y.
inline std::vector<BracketEntry> osp12_entries() {
    return {{0, 1, {{0, -2}}}, {0, 2, {{1, 1}}},  {0, 4, {{3, -1}}}, {1, 2, {{2, -2}}},
            {1, 3, {{3, 1}}},  {1, 4, {{4, -1}}}, {2, 3, {{4, -1}}}, {3, 3, {{0, 2}}},
            {3, 4, {{1, 1}}},  {4, 4, {{2, -2}}}};
}

inline UniversePtr sl2_vars() { return make_vars({"e", "h", "f"}, {}); }
inline UniversePtr osp12_vars() { return make_vars({"e", "h", "f"}, {"x", "y"}); }

}  // namespace test_support

namespace test_support {

// Lie-Poisson table shifted so the chi-value lands in the constant terms.
inline std::vector<BracketEntry> shifted(std::vector<BracketEntry> entries, const std::vector<Rational>& chi) {
    for (auto& e : entries) {
        Rational c = 0;
        for (auto [v, k] : e.value)
            if (v >= 0) c += k * chi[v];
        if (c != 0) e.value.push_back({-1, c});
    }
    return entries;
}

inline UniversePtr sl2_kazhdan() { return make_vars({"e", "h", "f"}, {}, {4, 2, 0}); }
inline UniversePtr osp12_kazhdan() { return make_vars({"e", "h", "f"}, {"x", "y"}, {4, 2, 0, 3, 1}); }

}  // namespace test_support

#include <superw/starprod.hpp>

namespace test_support {

inline StarAlgebra star_from(const UniversePtr& classical, const std::vector<BracketEntry>& entries, int max_order,
                             UniversePtr* out = nullptr) {
    auto u = with_hbar(*classical);
    StarAlgebra::Relations rel;
    for (const auto& e : entries) {
        SuperPoly p(u);
        for (auto [v, c] : e.value) p.add_term(v < 0 ? Monomial() : Monomial::var(v), c);
        rel[{e.i, e.j}] = p;
    }
    if (out) *out = u;
    return StarAlgebra(u, rel, u->size() - 1, max_order);
}

}  // namespace test_support
