#pragma once

#include "lie.hpp"
#include "poisson.hpp"
#include "supercore.hpp"
#include "wslice.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace superw {

struct PropertyFailure {
    std::string property;
    std::string where;
    std::string detail;
};

// Random polynomial of the given parity with degree <= max_degree and small integer coefficients.
inline SuperPoly random_poly(std::mt19937_64& rng, const UniversePtr& u, int max_degree, int terms, Parity p) {
    SuperPoly out(u);
    std::uniform_int_distribution<int> coef(-3, 3), pick(0, u->size() - 1), len(0, max_degree);
    for (int attempts = 0; attempts < 8 * terms && static_cast<int>(out.terms().size()) < terms; ++attempts) {
        Monomial m;
        int n = len(rng);
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            int v = pick(rng);
            int e = m.exponent(v) + 1;
            if ((*u)[v].parity == Parity::odd && e > 1) ok = false;
            else m = m.with_exponent(v, e);
        }
        if (ok && parity(*u, m) == p) out.add_term(m, coef(rng));
    }
    return out;
}

// Super-antisymmetry, graded Jacobi and Leibniz on seeded random triples, modulo adic order > order.
inline std::vector<PropertyFailure> poisson_axioms(const PoissonAlgebra& P, int order, std::uint64_t seed,
                                                   int triples) {
    std::vector<PropertyFailure> out;
    const UniversePtr& u = P.universe();
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution odd(0.5);
    auto br = [&](const SuperPoly& a, const SuperPoly& b) { return P.bracket_poly(a, b); };
    auto report = [&](const char* prop, int t, const SuperPoly& r) {
        SuperPoly x = r.truncated(order);
        if (!x.is_zero()) out.push_back({prop, "triple " + std::to_string(t), x.str()});
    };
    for (int t = 0; t < triples; ++t) {
        Parity pa = odd(rng) ? Parity::odd : Parity::even;
        Parity pb = odd(rng) ? Parity::odd : Parity::even;
        Parity pc = odd(rng) ? Parity::odd : Parity::even;
        SuperPoly a = random_poly(rng, u, 2, 3, pa);
        SuperPoly b = random_poly(rng, u, 2, 3, pb);
        SuperPoly c = random_poly(rng, u, 2, 3, pc);
        Rational sab = bit(pa) && bit(pb) ? -1 : 1;
        report("antisymmetry", t, br(a, b) + sab * br(b, a));
        report("jacobi", t, br(a, br(b, c)) - br(br(a, b), c) - sab * br(b, br(a, c)));
        report("leibniz", t, br(a, mul(b, c)) - mul(br(a, b), c) - sab * mul(b, br(a, c)));
    }
    for (const auto& v : check_jacobi(P, order))
        out.push_back({"jacobi", "generators " + std::to_string(v.i) + "," + std::to_string(v.j) + "," +
                                     std::to_string(v.k),
                       v.residual});
    return out;
}

// Structural invariants of the W-algebra pipeline on one algebra at order N.
inline std::vector<PropertyFailure> walgebra_properties(const WSetup& s, int N, int guard) {
    std::vector<PropertyFailure> out;
    const auto& g = s.g;
    for (int i = 0; i < g.dim(); ++i)
        if (g.parities[i] == Parity::odd && s.chi.chi[i] != 0)
            out.push_back({"chi_parity", g.names[i], "chi is nonzero on an odd vector"});
    if (!s.chi.pairing.empty() && determinant(s.chi.pairing) == 0)
        out.push_back({"pairing", "g(-1)", "pairing is degenerate"});
    for (int i = 0; i < g.dim(); ++i)
        if ((*s.u)[i].weight != s.grading.grade[i] + 2)
            out.push_back({"grading", g.names[i], "weight differs from grade + 2"});

    auto wh = whittaker_walgebra(s, N);
    std::vector<int> ew;
    std::vector<Parity> ep;
    for (const auto& r : extended_centralizer(s)) {
        ew.push_back(detail::vector_weight(s.weights, r));
        ep.push_back(g.parity_of(r));
    }
    auto mons = ordered_monomials(ew, ep, N);
    for (int n = 0; n <= N; ++n) {
        std::size_t cnt = 0;
        for (const auto& om : mons) cnt += om.weight <= n;
        if (wh.table[n] != cnt)
            out.push_back({"pbw", "n=" + std::to_string(n),
                           std::to_string(wh.table[n]) + " != " + std::to_string(cnt)});
    }
    for (const auto& gen : wh.generators) {
        if (gen.weight <= 0) out.push_back({"weight", gen.label, "nonpositive weight"});
        if (!is_invariant(s, gen.lift)) out.push_back({"invariance", gen.label, gen.lift.str()});
    }
    auto cmp = compare_presentations(s, wh, slice_walgebra(s, N, guard));
    if (!cmp.match()) out.push_back({"realization", g.name, "whittaker and slice presentations differ"});
    return out;
}

}  // namespace superw
