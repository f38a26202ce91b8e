#include <superw/superw.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace superw;

namespace {

using Clock = std::chrono::steady_clock;

LieSuperalgebraData algebra(const std::string& name) {
    std::ifstream in(std::string(SUPERW_DEFAULT_CATALOG) + "/" + name + ".json");
    return load_algebra(nlohmann::json::parse(in));
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back(what);
        }
    }
};

int failures = 0;

void criterion(int k, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double dt = seconds_since(t0);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << title << " (" << dt << " s)\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    if (!o.pass) ++failures;
}

// Ordered monomials of weight <= n in the given generators, counted by plain enumeration.
std::size_t count_monomials(const std::vector<int>& weights, const std::vector<bool>& odd, int n) {
    std::function<std::size_t(std::size_t, int)> rec = [&](std::size_t k, int budget) -> std::size_t {
        if (k == weights.size()) return 1;
        std::size_t total = 0;
        for (int x = 0; x * weights[k] <= budget && (!odd[k] || x <= 1); ++x) total += rec(k + 1, budget - x * weights[k]);
        return total;
    };
    return rec(0, n);
}

std::vector<std::size_t> count_table(const std::vector<int>& weights, const std::vector<bool>& odd, int N) {
    std::vector<std::size_t> t;
    for (int n = 0; n <= N; ++n) t.push_back(count_monomials(weights, odd, n));
    return t;
}

// U(sl2) words over e < h < f, rewritten to PBW order, then every trailing f replaced by chi(f) = 1.
std::map<std::string, Rational> reduce_sl2_word(const std::map<std::string, Rational>& input) {
    auto rank = [](char c) { return c == 'e' ? 0 : c == 'h' ? 1 : 2; };
    // [a, b] for a > b in the order above.
    auto commutator = [](char a, char b) -> std::pair<Rational, std::string> {
        if (a == 'h' && b == 'e') return {2, "e"};
        if (a == 'f' && b == 'e') return {-1, "h"};
        return {2, "f"};  // [f, h] = 2f
    };
    std::map<std::string, Rational> todo = input, done;
    while (!todo.empty()) {
        auto [w, c] = *todo.begin();
        todo.erase(todo.begin());
        if (c == 0) continue;
        std::size_t i = 0;
        while (i + 1 < w.size() && rank(w[i]) <= rank(w[i + 1])) ++i;
        if (i + 1 >= w.size()) {
            std::string v = w;
            while (!v.empty() && v.back() == 'f') v.pop_back();
            done[v] += c;
            continue;
        }
        std::string swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        todo[swapped] += c;
        auto [k, x] = commutator(w[i], w[i + 1]);
        todo[w.substr(0, i) + x + w.substr(i + 2)] += c * k;
    }
    std::erase_if(done, [](const auto& kv) { return kv.second == 0; });
    return done;
}

std::string dump_chart(const WSetup& s, const Chart& c, int N, bool quantum, const StarAlgebra* S) {
    if (quantum) return report::dump(report::chart_json(*S, c, N, s.g.name, "quantum"));
    return report::dump(report::chart_json(shifted_lie_poisson(s), c, N, s.g.name, "classical"));
}

}  // namespace

int main() {
    const std::vector<std::string> lie = {"sl2", "osp12", "sl21"};

    criterion(1, "Poisson axioms at order 6, 200 seeded triples", [&](Outcome& o) {
        auto t0 = Clock::now();
        for (const char* name : {"sl2", "gl11", "osp12", "sl21"}) {
            auto g = algebra(name);
            auto s = prepare(g);
            PoissonAlgebra plain = linear_poisson(g.universe(), g.structure, zero_matrix(g.dim(), g.dim()), 0);
            auto a = poisson_axioms(plain, 6, 20240611, 200);
            auto b = poisson_axioms(shifted_lie_poisson(s), 6, 20240612, 200);
            o.require(a.empty(), std::string(name) + ": " + std::to_string(a.size()) + " failures at zero");
            o.require(b.empty(), std::string(name) + ": " + std::to_string(b.size()) + " failures at chi");
        }
        std::ifstream in(std::string(SUPERW_DEFAULT_CATALOG) + "/osp12.json");
        auto doc = nlohmann::json::parse(in);
        for (auto& b : doc["brackets"])
            if (b["i"] == 3 && b["j"] == 3) b["coeffs"][0] = "3";
        auto bad = parse_algebra(doc);
        PoissonAlgebra broken = linear_poisson(bad.universe(), bad.structure, zero_matrix(bad.dim(), bad.dim()), 0);
        o.require(!poisson_axioms(broken, 6, 20240611, 200).empty(), "corrupted constants not detected");
        o.require(seconds_since(t0) < 30, "runtime above 30 s");
    });

    criterion(2, "classical Darboux charts at N=6", [&](Outcome& o) {
        auto t0 = Clock::now();
        for (const auto& name : lie) {
            auto s = prepare(algebra(name));
            auto chart = classical_chart(s, 6);
            auto res = verify_chart(shifted_lie_poisson(s), chart);
            o.require(res.empty(), name + ": " + std::to_string(res.size()) + " residuals");
            o.require(chart.order == 6, name + ": chart order");
        }
        o.require(seconds_since(t0) < 120, "runtime above 2 min");
    });

    criterion(3, "quantum Darboux charts at N=5 and their classical limit", [&](Outcome& o) {
        for (const auto& name : lie) {
            auto s = prepare(algebra(name));
            auto q = slice_chart(s, 5);
            std::vector<ChartResidual> res;
            try {
                res = verify_chart(*q.S, q.chart);
            } catch (const NegativeHbarPower& e) {
                o.require(false, name + ": negative hbar power: " + e.what());
                continue;
            }
            o.require(res.empty(), name + ": " + std::to_string(res.size()) + " star-commutator residuals");
            // hbar -> 0 of (commutator / hbar^2) against the classical chart relations.
            auto P = shifted_lie_poisson(s);
            auto cl = classical_chart(s, 5);
            o.require(cl.blocks.size() == q.chart.blocks.size(), name + ": block structure differs");
            auto qe = chart_elements(q.chart);
            auto ce = chart_elements(cl);
            std::size_t nq = qe.size() - q.chart.centralizer.size();
            for (std::size_t x = 0; x < qe.size() && x < ce.size(); ++x)
                for (std::size_t y = x; y < qe.size() && y < ce.size(); ++y) {
                    if (x >= nq && y >= nq) continue;
                    Series br = specialize_hbar(q.S->bracket(*qe[x].value, *qe[y].value), s.dim(), 0);
                    Series want = Series::constant(br.universe(), chart_expected(cl, x, y), 4);
                    o.require((br.truncated(4) - want).is_zero(), name + ": limit of {" + qe[x].label + "," + qe[y].label + "}");
                }
            Chart limit = classical_limit(s, q.chart);
            limit.order = 4;
            o.require(verify_chart(P, limit).empty(), name + ": hbar -> 0 chart is not a classical chart");
        }
    });

    criterion(4, "PBW tables of the Whittaker construction", [&](Outcome& o) {
        auto s = prepare(algebra("sl2"));
        auto w = whittaker_walgebra(s, 8);
        o.require(w.table == std::vector<std::size_t>{1, 1, 1, 1, 2, 2, 2, 2, 3}, "sl2 table");
        o.require(w.table == count_table({4}, {false}, 8), "sl2 table vs monomial count");
        auto t = prepare(algebra("osp12"));
        auto v = whittaker_walgebra(t, 6);
        o.require(v.table == count_table({4, 3, 1}, {false, true, true}, 6), "osp12 table vs S(g_e) x C[theta] count");
        std::multiset<std::pair<int, int>> got, want{{4, 0}, {3, 1}, {1, 1}};
        for (const auto& g : v.generators) got.insert({g.weight, bit(g.parity)});
        o.require(got == want, "osp12 generator weights (4 | 3, 1)");
    });

    criterion(5, "realization equivalence and perturbation control", [&](Outcome& o) {
        for (auto [name, N] : std::vector<std::pair<std::string, int>>{{"sl2", 8}, {"osp12", 6}}) {
            auto s = prepare(algebra(name));
            auto wh = whittaker_walgebra(s, N);
            auto sl = slice_walgebra(s, N);
            auto r = compare_presentations(s, wh, sl);
            o.require(r.match(), name + ": realizations differ");
            o.require(!compare_presentations(s, wh, perturbed(s, sl, 0)).match(), name + ": perturbation not detected");
        }
    });

    criterion(6, "sl2 weight-4 generator is the reduced Casimir", [&](Outcome& o) {
        auto s = prepare(algebra("sl2"));
        auto w = whittaker_walgebra(s, 8);
        const WGenerator* g4 = nullptr;
        for (const auto& g : w.generators)
            if (g.weight == 4) g4 = &g;
        o.require(g4 != nullptr, "no weight-4 generator");
        if (!g4) return;
        auto oracle = reduce_sl2_word({{"ef", 1}, {"fe", 1}, {"hh", Rational(1, 2)}});
        SuperPoly c(s.u);
        for (const auto& [word, coeff] : oracle) {
            Monomial m;
            for (char ch : word) {
                int v = *s.u->find(std::string(1, ch));
                m = m.with_exponent(v, m.exponent(v) + 1);
            }
            c.add_term(m, coeff);
        }
        o.require(oracle == std::map<std::string, Rational>{{"e", 2}, {"h", -1}, {"hh", Rational(1, 2)}},
                  "oracle reduction is not 2e - h + h^2/2");
        Monomial e = Monomial::var(*s.u->find("e"));
        Rational scale = g4->lift.coefficient(e) / c.coefficient(e);
        o.require(scale != 0, "generator has no e term");
        o.require(filtration_degree(*s.u, g4->lift - c * scale) <= 0, "generator differs beyond a constant shift");
    });

    criterion(7, "splitting residuals at N=6, k=2", [&](Outcome& o) {
        for (const char* name : {"sl2", "osp12"}) {
            auto r = splitting_check(prepare(algebra(name)), 6, 2);
            o.require(r.ok(), std::string(name) + ": " + std::to_string(r.residuals.size()) + " residuals, basis " +
                                  std::to_string(r.basis) + " vs " + std::to_string(r.monomials) + " monomials");
        }
    });

    criterion(8, "Clifford factorization at N=5", [&](Outcome& o) {
        for (const char* name : {"osp12", "sl21"}) {
            auto r = clifford_factorization(algebra(name), 5);
            o.require(r.a_table == r.cl_w_table, std::string(name) + ": Cl(V1) x W table differs from A");
            o.require(r.a_table == r.expected_table, std::string(name) + ": A table differs from the PBW count");
            o.require(r.psi_spans, std::string(name) + ": spans differ");
            o.require(r.embedding_failures.empty(), std::string(name) + ": W0 embedding failed");
            o.require(r.w0_generators > 0, std::string(name) + ": no W0 generators");
        }
    });

    criterion(9, "truncation stability of every report", [&](Outcome& o) {
        const int N = 4;
        for (const auto& name : lie) {
            auto g = algebra(name);
            auto s = prepare(g);
            o.require(dump_chart(s, classical_chart(s, N), N, false, nullptr) ==
                          dump_chart(s, classical_chart(s, N + 2), N, false, nullptr),
                      name + ": classical chart");
            auto q1 = slice_chart(s, N), q2 = slice_chart(s, N + 2);
            o.require(dump_chart(s, q1.chart, N, true, q1.S.get()) == dump_chart(s, q2.chart, N, true, q2.S.get()),
                      name + ": quantum chart");
            auto wa = whittaker_walgebra(s, N), wb = truncated(whittaker_walgebra(s, N + 2), N);
            auto sa = slice_walgebra(s, N), sb = truncated(slice_walgebra(s, N + 2), N);
            o.require(report::dump(report::walgebra_json(s, "both", &wa, &sa)) ==
                          report::dump(report::walgebra_json(s, "both", &wb, &sb)),
                      name + ": W-algebra");
            o.require(report::dump(report::splitting_json(name, splitting_check(s, N, 2))) ==
                          report::dump(report::splitting_json(name, splitting_check(s, slice_chart(s, N + 3), N, 2))),
                      name + ": splitting");
            o.require(report::dump(report::clifford_json(name, clifford_factorization(g, N))) ==
                          report::dump(report::clifford_json(
                              name, clifford_factorization(g, N, 2, LagrangianChoice::lowest_id, N + 2))),
                      name + ": Clifford");
        }
    });

    criterion(10, "Lagrangian independence", [&](Outcome& o) {
        for (auto [name, N] : std::vector<std::pair<std::string, int>>{{"osp12", 6}, {"sl21", 5}}) {
            auto a = prepare(algebra(name));
            auto b = prepare(algebra(name), LagrangianChoice::highest_id);
            auto wa = whittaker_walgebra(a, N), wb = whittaker_walgebra(b, N);
            auto sa = slice_walgebra(a, N), sb = slice_walgebra(b, N);
            o.require(wa.table == wb.table, name + ": Whittaker tables differ");
            o.require(sa.table == sb.table, name + ": slice tables differ");
            o.require(wa.table == sb.table, name + ": Whittaker and slice tables differ");
            o.require(compare_presentations(b, wb, sb).match(), name + ": realizations differ for the alternative l");
        }
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
