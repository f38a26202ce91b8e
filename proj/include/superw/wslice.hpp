#pragma once

#include "darboux.hpp"
#include "lie.hpp"
#include "linalg.hpp"
#include "poisson.hpp"
#include "starprod.hpp"
#include "supercore.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superw {

struct GradingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dynkin grading: grade[i] is the ad h eigenvalue of basis vector i.
struct GoodGrading {
    std::vector<int> grade;

    int kazhdan(int i) const { return grade[i] + 2; }
    std::vector<int> kazhdan_weights() const {
        std::vector<int> w;
        for (int d : grade) w.push_back(d + 2);
        return w;
    }
    std::vector<int> ids_of(int d) const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(grade.size()); ++i)
            if (grade[i] == d) out.push_back(i);
        return out;
    }
};

inline Sl2Triple zero_triple(const LieSuperalgebraData& g) {
    Vector z(g.dim(), Rational(0));
    return {z, z, z};
}

inline Sl2Triple triple_of(const LieSuperalgebraData& g) { return g.triple ? *g.triple : zero_triple(g); }

inline GoodGrading dynkin_grading(const LieSuperalgebraData& g, const Sl2Triple& t) {
    int n = g.dim();
    for (const Vector* v : {&t.e, &t.h, &t.f})
        if (!is_zero(*v) && g.parity_of(*v) != Parity::even) throw GradingError("sl2 triple must be even");
    if (g.bracket(t.e, t.f) != t.h || g.bracket(t.h, t.e) != scaled(t.e, 2) || g.bracket(t.h, t.f) != scaled(t.f, -2))
        throw GradingError("(e, h, f) is not an sl2 triple");
    Matrix adh = g.ad(t.h);
    GoodGrading gr;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k)
            if (k != i && adh[k][i] != 0) throw GradingError("basis is not an ad h eigenbasis at " + g.names[i]);
        const Rational& ev = adh[i][i];
        if (ev.get_den() != 1) throw GradingError("non-integral eigenvalue on " + g.names[i]);
        gr.grade.push_back(static_cast<int>(ev.get_num().get_si()));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (g.structure[i][j][k] != 0 && gr.grade[k] != gr.grade[i] + gr.grade[j])
                    throw GradingError("bracket does not respect the grading");
    for (int k = 0; k < n; ++k)
        if (t.e[k] != 0 && gr.grade[k] != 2) throw GradingError("e is not in degree 2");
    // Goodness: ad e injective from g(j), j <= -1, and surjective onto g(j+2), j >= -1.
    int top = 0;
    for (int d : gr.grade) top = std::max(top, std::abs(d));
    Matrix ade = g.ad(t.e);
    for (int j = -top - 2; j <= top; ++j) {
        auto src = gr.ids_of(j), dst = gr.ids_of(j + 2);
        Matrix block = zero_matrix(dst.size(), src.size());
        for (std::size_t a = 0; a < dst.size(); ++a)
            for (std::size_t b = 0; b < src.size(); ++b) block[a][b] = ade[dst[a]][src[b]];
        std::size_t r = src.empty() || dst.empty() ? 0 : rank(block);
        if (j <= -1 && r != src.size()) throw GradingError("ad e not injective on g(" + std::to_string(j) + ")");
        if (j >= -1 && r != dst.size()) throw GradingError("ad e not onto g(" + std::to_string(j + 2) + ")");
    }
    return gr;
}

enum class LagrangianChoice { lowest_id, highest_id };

inline std::string to_string(LagrangianChoice c) { return c == LagrangianChoice::lowest_id ? "lowest_id" : "highest_id"; }

struct ChiAndForm {
    Vector chi;                   // chi(b_i) = (e, b_i)
    std::vector<int> minus_one;   // basis ids of g(-1)
    Matrix pairing;               // chi([b_a, b_b]) over minus_one
    std::vector<int> lagrangian;  // basis ids spanning l
    std::optional<Vector> theta;  // self-paired odd vector orthogonal to l
    Rational theta_pairing = 0;   // <theta, theta>, kept unnormalized
    std::vector<int> m;           // basis ids spanning m: g(<= -2), then l

    Rational form(const LieSuperalgebraData& g, const Vector& x, const Vector& y) const {
        Vector b = g.bracket(x, y);
        Rational s = 0;
        for (int k = 0; k < g.dim(); ++k) s += b[k] * chi[k];
        return s;
    }
};

// Bivector Pi_ij = chi([b_i, b_j]) on the whole algebra.
inline Matrix chi_bivector(const LieSuperalgebraData& g, const Vector& chi) {
    Matrix pi = zero_matrix(g.dim(), g.dim());
    for (int i = 0; i < g.dim(); ++i)
        for (int j = 0; j < g.dim(); ++j)
            for (int k = 0; k < g.dim(); ++k) pi[i][j] += g.structure[i][j][k] * chi[k];
    return pi;
}

inline ChiAndForm build_chi(const LieSuperalgebraData& g, const GoodGrading& gr, const Vector& e,
                            LagrangianChoice choice = LagrangianChoice::lowest_id) {
    ChiAndForm c;
    int n = g.dim();
    c.chi.assign(n, Rational(0));
    for (int i = 0; i < n; ++i) c.chi[i] = g.pairing(e, g.basis_vector(i));
    for (int i = 0; i < n; ++i)
        if (c.chi[i] != 0 && g.parities[i] == Parity::odd) throw GradingError("chi does not vanish on " + g.names[i]);
    c.minus_one = gr.ids_of(-1);
    std::size_t d = c.minus_one.size();
    Matrix pi = chi_bivector(g, c.chi);
    c.pairing = zero_matrix(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) c.pairing[a][b] = pi[c.minus_one[a]][c.minus_one[b]];
    if (d > 0 && determinant(c.pairing) == 0) throw GradingError("pairing on g(-1) is degenerate");

    int d0 = 0, d1 = 0;
    for (int id : c.minus_one) (g.parities[id] == Parity::odd ? d1 : d0) += 1;
    std::vector<std::size_t> idx(d);
    for (std::size_t a = 0; a < d; ++a) idx[a] = a;
    if (choice == LagrangianChoice::highest_id) std::reverse(idx.begin(), idx.end());
    std::vector<std::size_t> chosen;
    int got0 = 0, got1 = 0;
    for (std::size_t a : idx) {
        bool odd = g.parities[c.minus_one[a]] == Parity::odd;
        if (odd ? got1 >= d1 / 2 : got0 >= d0 / 2) continue;
        bool ok = c.pairing[a][a] == 0;
        for (std::size_t b : chosen) ok = ok && c.pairing[a][b] == 0;
        if (!ok) continue;
        chosen.push_back(a);
        (odd ? got1 : got0) += 1;
    }
    if (got0 != d0 / 2 || got1 != d1 / 2) throw GradingError("no basis-aligned Lagrangian in g(-1)");
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t a : chosen) c.lagrangian.push_back(c.minus_one[a]);

    if (d1 % 2 == 1) {
        // Odd vectors of g(-1) orthogonal to l, outside l.
        std::vector<int> odd_ids;
        for (int id : c.minus_one)
            if (g.parities[id] == Parity::odd) odd_ids.push_back(id);
        Matrix cons;
        for (int l : c.lagrangian) {
            Vector row;
            for (int id : odd_ids) row.push_back(pi[l][id]);
            cons.push_back(row);
        }
        Matrix ker = cons.empty() ? identity_matrix(odd_ids.size()) : nullspace(cons, odd_ids.size());
        for (const auto& k : ker) {
            Vector t(n, Rational(0));
            for (std::size_t a = 0; a < odd_ids.size(); ++a) t[odd_ids[a]] = k[a];
            Rational s = pair(pi, t, t);
            if (s == 0) continue;
            c.theta = t;
            c.theta_pairing = s;
            break;
        }
        if (!c.theta) throw GradingError("no self-paired odd vector in g(-1)");
    }
    for (int i = 0; i < n; ++i)
        if (gr.grade[i] <= -2) c.m.push_back(i);
    for (int l : c.lagrangian) c.m.push_back(l);
    return c;
}

// Everything both constructions share: the algebra re-ordered so that m comes last.
struct WSetup {
    LieSuperalgebraData g;        // permuted basis: complement of m first, then m
    std::vector<int> source;      // source[a] = index of basis vector a in the input algebra
    Sl2Triple triple;
    GoodGrading grading;
    ChiAndForm chi;
    LagrangianChoice choice = LagrangianChoice::lowest_id;
    int complement = 0;           // basis ids [0, complement) span the PBW complement of m
    std::vector<int> weights;     // Kazhdan weights
    UniversePtr u;                // variables of U(g)
    std::shared_ptr<StarAlgebra> U;

    int dim() const { return g.dim(); }
    bool in_m(int id) const { return id >= complement; }
};

namespace detail {

inline Vector permute_vector(const Vector& v, const std::vector<int>& order) {
    Vector r(order.size());
    for (std::size_t a = 0; a < order.size(); ++a) r[a] = v[order[a]];
    return r;
}

inline StarAlgebra::Relations lie_relations(const LieSuperalgebraData& g, const UniversePtr& u, const Vector* chi) {
    StarAlgebra::Relations rel;
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i; j < g.dim(); ++j) {
            SuperPoly p(u);
            Rational shift = 0;
            for (int k = 0; k < g.dim(); ++k) {
                p.add_term(Monomial::var(k), g.structure[i][j][k]);
                if (chi) shift += g.structure[i][j][k] * (*chi)[k];
            }
            p.add_term(Monomial(), shift);
            if (!p.is_zero()) rel[{i, j}] = p;
        }
    return rel;
}

}  // namespace detail

inline WSetup prepare(const LieSuperalgebraData& input, LagrangianChoice choice = LagrangianChoice::lowest_id) {
    Sl2Triple t0 = triple_of(input);
    GoodGrading gr0 = dynkin_grading(input, t0);
    ChiAndForm c0 = build_chi(input, gr0, t0.e, choice);
    int n = input.dim();
    std::vector<bool> is_m(n, false);
    for (int id : c0.m) is_m[id] = true;
    std::vector<int> order;
    for (int i = 0; i < n; ++i)
        if (!is_m[i]) order.push_back(i);
    int complement = static_cast<int>(order.size());
    for (int i = 0; i < n; ++i)
        if (is_m[i]) order.push_back(i);
    std::vector<int> inv(n);
    for (int a = 0; a < n; ++a) inv[order[a]] = a;

    WSetup s;
    s.g = permuted(input, order);
    s.source = order;
    s.choice = choice;
    s.complement = complement;
    s.triple = triple_of(s.g);
    for (int a = 0; a < n; ++a) s.grading.grade.push_back(gr0.grade[order[a]]);
    s.chi.chi = detail::permute_vector(c0.chi, order);
    for (int id : c0.minus_one) s.chi.minus_one.push_back(inv[id]);
    s.chi.pairing = c0.pairing;
    for (int id : c0.lagrangian) s.chi.lagrangian.push_back(inv[id]);
    if (c0.theta) s.chi.theta = detail::permute_vector(*c0.theta, order);
    s.chi.theta_pairing = c0.theta_pairing;
    for (int a = complement; a < n; ++a) s.chi.m.push_back(a);
    s.weights = s.grading.kazhdan_weights();
    for (int a = 0; a < complement; ++a)
        if (s.weights[a] <= 0) throw GradingError("complement variable " + s.g.names[a] + " has nonpositive weight");
    s.u = s.g.universe(s.weights);
    s.U = std::make_shared<StarAlgebra>(s.u, detail::lie_relations(s.g, s.u, nullptr), -1, -1);
    return s;
}

// Homogeneous basis of the centralizer g_e (rows of the reduced echelon form).
inline Matrix centralizer_basis(const LieSuperalgebraData& g, const Vector& e) {
    Matrix ker = nullspace(g.ad(e), g.dim());
    if (ker.empty()) return ker;
    rref(ker);
    Matrix out;
    for (auto& r : ker)
        if (!is_zero(r)) out.push_back(r);
    return out;
}

// Basis of g~_e: g_e, plus theta when dim g(-1)_odd is odd.
inline Matrix extended_centralizer(const WSetup& s) {
    Matrix b = centralizer_basis(s.g, s.triple.e);
    if (s.chi.theta) b.push_back(*s.chi.theta);
    return b;
}

// ---------------------------------------------------------------------------
// U(g)/I_chi in PBW normal form: monomials in the complement variables.

inline SuperPoly reduce_chi(const WSetup& s, const SuperPoly& p) {
    SuperPoly r(s.u);
    for (const auto& [m, c] : p.terms()) {
        Rational k = c;
        Monomial keep;
        for (int i = 0; i < s.dim() && k != 0; ++i) {
            int e = m.exponent(i);
            if (!e) continue;
            if (s.in_m(i)) {
                Rational x = s.chi.chi[i];
                for (int t = 0; t < e; ++t) k *= x;
            } else {
                keep = keep.with_exponent(i, e);
            }
        }
        if (k != 0) r.add_term(keep, k);
    }
    return r;
}

namespace detail {

inline std::pair<SuperPoly, SuperPoly> parity_parts(const SuperPoly& a) {
    SuperPoly a0(a.universe()), a1(a.universe());
    for (const auto& [m, c] : a.terms()) (parity(*a.universe(), m) == Parity::odd ? a1 : a0).add_term(m, c);
    return {a0, a1};
}

inline SuperPoly poly_commutator(const StarAlgebra& S, const SuperPoly& a, const SuperPoly& b) {
    auto [a0, a1] = parity_parts(a);
    auto [b0, b1] = parity_parts(b);
    return S.mul_poly(a, b) - S.mul_poly(b0, a) - S.mul_poly(b1, a0) + S.mul_poly(b1, a1);
}

}  // namespace detail

// Product in U(g,e): y * z reduced modulo I_chi (y must be invariant for this to be well defined).
inline SuperPoly reduced_product(const WSetup& s, const SuperPoly& y, const SuperPoly& z) {
    return reduce_chi(s, s.U->mul_poly(y, z));
}

// (a - chi(a)) y modulo I_chi, i.e. [a, y] modulo I_chi, for a basis vector a of m.
inline SuperPoly invariance_defect(const WSetup& s, int a, const SuperPoly& y) {
    return reduce_chi(s, detail::poly_commutator(*s.U, SuperPoly::variable(s.u, a), y));
}

inline bool is_invariant(const WSetup& s, const SuperPoly& y) {
    for (int a = s.complement; a < s.dim(); ++a)
        if (!invariance_defect(s, a, y).is_zero()) return false;
    return true;
}

// Kazhdan filtration degree; -1 for zero.
inline int filtration_degree(const Universe& u, const SuperPoly& p) {
    int d = -1;
    for (const auto& [m, c] : p.terms()) d = std::max(d, weight(u, m));
    return d;
}

// Monomials in variables [0, nvars) of weight <= bound, all weights positive.
inline std::vector<Monomial> weighted_monomials(const Universe& u, int nvars, int bound) {
    std::vector<Monomial> out;
    auto rec = [&](auto&& self, int var, Monomial m, int w) -> void {
        if (var == nvars) {
            out.push_back(m);
            return;
        }
        int cap = u[var].parity == Parity::odd ? 1 : Monomial::kMaxExponent;
        for (int e = 0; e <= cap && w + e * u[var].weight <= bound; ++e)
            self(self, var + 1, m.with_exponent(var, e), w + e * u[var].weight);
    };
    for (int i = 0; i < nvars; ++i)
        if (u[i].weight <= 0) throw GradingError("weighted_monomials: nonpositive weight on " + u[i].name);
    rec(rec, 0, Monomial(), 0);
    std::sort(out.begin(), out.end(), [&](Monomial a, Monomial b) {
        int wa = weight(u, a), wb = weight(u, b);
        return wa != wb ? wa < wb : a < b;
    });
    return out;
}

// Reduced echelon basis of a span of polynomials, columns ordered by descending weight so that
// the rows with pivot weight <= n span the intersection with F_n.
struct FilteredBasis {
    std::vector<SuperPoly> rows;
    std::vector<int> pivot_weight;

    std::size_t dim_at(int n) const {
        return static_cast<std::size_t>(std::count_if(pivot_weight.begin(), pivot_weight.end(), [&](int w) { return w <= n; }));
    }
};

inline FilteredBasis filtered_echelon(const UniversePtr& u, const std::vector<SuperPoly>& polys) {
    std::vector<Monomial> cols;
    for (const auto& p : polys)
        for (const auto& [m, c] : p.terms()) cols.push_back(m);
    std::sort(cols.begin(), cols.end(), [&](Monomial a, Monomial b) {
        int wa = weight(*u, a), wb = weight(*u, b);
        return wa != wb ? wa > wb : b < a;
    });
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    std::map<Monomial, std::size_t> at;
    for (std::size_t k = 0; k < cols.size(); ++k) at[cols[k]] = k;
    Matrix M;
    for (const auto& p : polys) {
        Vector row(cols.size(), Rational(0));
        for (const auto& [m, c] : p.terms()) row[at[m]] = c;
        M.push_back(row);
    }
    FilteredBasis fb;
    if (M.empty()) return fb;
    auto piv = rref(M);
    for (std::size_t r = 0; r < piv.size(); ++r) {
        SuperPoly p(u);
        for (std::size_t k = 0; k < cols.size(); ++k) p.add_term(cols[k], M[r][k]);
        fb.rows.push_back(p);
        fb.pivot_weight.push_back(weight(*u, cols[piv[r]]));
    }
    return fb;
}

inline std::size_t poly_rank(const std::vector<SuperPoly>& polys) {
    if (polys.empty()) return 0;
    return filtered_echelon(polys.front().universe(), polys).rows.size();
}

// ---------------------------------------------------------------------------
// Presentations.

struct WGenerator {
    std::string label;
    Parity parity = Parity::even;
    int weight = 0;
    SuperPoly lift;  // element of U/I_chi in normal form
};

struct WProduct {
    std::size_t a = 0, b = 0;
    SuperPoly value;
};

struct WPresentation {
    std::string method;
    int order = 0;
    std::vector<std::size_t> table;  // dim F_n for n = 0..order
    std::vector<WGenerator> generators;
    std::vector<WProduct> products;  // a <= b, weight(a) + weight(b) <= order
};

// Exponent vectors of ordered monomials in generators of the given weights and parities.
struct OrderedMonomial {
    std::vector<int> exponents;
    int weight = 0;
};

inline std::vector<OrderedMonomial> ordered_monomials(const std::vector<int>& weights,
                                                      const std::vector<Parity>& parities, int bound) {
    std::vector<OrderedMonomial> out;
    std::vector<int> e(weights.size(), 0);
    auto rec = [&](auto&& self, std::size_t k, int w) -> void {
        if (k == weights.size()) {
            out.push_back({e, w});
            return;
        }
        if (weights[k] <= 0) throw GradingError("ordered_monomials: nonpositive weight");
        int cap = parities[k] == Parity::odd ? 1 : 1 << 20;
        for (int x = 0; x <= cap && w + x * weights[k] <= bound; ++x) {
            e[k] = x;
            self(self, k + 1, w + x * weights[k]);
        }
        e[k] = 0;
    };
    rec(rec, 0, 0);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.weight < b.weight; });
    return out;
}

inline std::string ordered_monomial_string(const std::vector<std::string>& labels, const std::vector<int>& e) {
    std::string s;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (!e[k]) continue;
        if (!s.empty()) s += "*";
        s += labels[k];
        if (e[k] > 1) s += "^" + std::to_string(e[k]);
    }
    return s.empty() ? "1" : s;
}

// Values in U(g,e) of ordered monomials in the given invariant lifts.
inline std::vector<SuperPoly> monomial_values(const WSetup& s, const std::vector<SuperPoly>& lifts,
                                              const std::vector<OrderedMonomial>& mons) {
    std::vector<SuperPoly> out;
    for (const auto& om : mons) {
        SuperPoly v = SuperPoly::constant(s.u, 1);
        for (std::size_t k = lifts.size(); k-- > 0;)
            for (int t = 0; t < om.exponents[k]; ++t) v = reduced_product(s, lifts[k], v);
        out.push_back(v);
    }
    return out;
}

namespace detail {

inline std::vector<int> weights_of(const std::vector<WGenerator>& gens) {
    std::vector<int> w;
    for (const auto& g : gens) w.push_back(g.weight);
    return w;
}

inline std::vector<Parity> parities_of(const std::vector<WGenerator>& gens) {
    std::vector<Parity> p;
    for (const auto& g : gens) p.push_back(g.parity);
    return p;
}

inline std::vector<SuperPoly> lifts_of(const std::vector<WGenerator>& gens) {
    std::vector<SuperPoly> l;
    for (const auto& g : gens) l.push_back(g.lift);
    return l;
}

inline Parity poly_parity(const SuperPoly& p) {
    std::optional<Parity> r;
    for (const auto& [m, c] : p.terms()) {
        Parity q = parity(*p.universe(), m);
        if (r && *r != q) throw std::logic_error("mixed-parity generator");
        r = q;
    }
    return r.value_or(Parity::even);
}

}  // namespace detail

// Invariant subspace (U/I_chi)^{ad m} up to filtration degree N, in filtered echelon form.
inline FilteredBasis whittaker_invariants(const WSetup& s, int N) {
    auto basis = weighted_monomials(*s.u, s.complement, N);
    std::map<std::pair<int, Monomial>, std::size_t> row;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> cols(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        SuperPoly y(s.u);
        y.add_term(basis[j], 1);
        for (int a = s.complement; a < s.dim(); ++a)
            for (const auto& [m, c] : invariance_defect(s, a, y).terms()) {
                auto it = row.emplace(std::make_pair(a, m), row.size()).first;
                cols[j].emplace_back(it->second, c);
            }
    }
    Matrix M = zero_matrix(row.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (const auto& [r, c] : cols[j]) M[r][j] = c;
    Matrix ker = row.empty() ? identity_matrix(basis.size()) : nullspace(M, basis.size());
    std::vector<SuperPoly> polys;
    for (const auto& k : ker) {
        SuperPoly p(s.u);
        for (std::size_t j = 0; j < basis.size(); ++j) p.add_term(basis[j], k[j]);
        polys.push_back(p);
    }
    return filtered_echelon(s.u, polys);
}

inline std::vector<WProduct> generator_products(const WSetup& s, const std::vector<WGenerator>& gens, int N) {
    std::vector<WProduct> out;
    for (std::size_t a = 0; a < gens.size(); ++a)
        for (std::size_t b = a; b < gens.size(); ++b)
            if (gens[a].weight + gens[b].weight <= N)
                out.push_back({a, b, reduced_product(s, gens[a].lift, gens[b].lift)});
    return out;
}

// W-algebra as ad m-invariants of U/I_chi, by exact linear algebra on the PBW basis.
inline WPresentation whittaker_walgebra(const WSetup& s, int N) {
    if (N < 0) throw std::invalid_argument("order must be nonnegative");
    FilteredBasis inv = whittaker_invariants(s, N);
    WPresentation w;
    w.method = "whittaker";
    w.order = N;
    for (int n = 0; n <= N; ++n) w.table.push_back(inv.dim_at(n));
    for (int wt = 1; wt <= N; ++wt) {
        auto mons = ordered_monomials(detail::weights_of(w.generators), detail::parities_of(w.generators), wt);
        auto span = monomial_values(s, detail::lifts_of(w.generators), mons);
        std::size_t have = poly_rank(span);
        for (std::size_t r = 0; r < inv.rows.size(); ++r) {
            if (inv.pivot_weight[r] != wt) continue;
            span.push_back(inv.rows[r]);
            std::size_t now = poly_rank(span);
            if (now == have) {
                span.pop_back();
                continue;
            }
            have = now;
            w.generators.push_back({"w" + std::to_string(w.generators.size() + 1), detail::poly_parity(inv.rows[r]), wt,
                                    inv.rows[r]});
        }
    }
    w.products = generator_products(s, w.generators, N);
    return w;
}


// ---------------------------------------------------------------------------
// Classical and quantum algebras at chi.

// Lie-Poisson bracket on S(g) in coordinates centred at chi.
inline PoissonAlgebra shifted_lie_poisson(const WSetup& s) {
    return linear_poisson(s.u, s.g.structure, chi_bivector(s.g, s.chi.chi), -2);
}

// Homogenized U(g) centred at chi: [x_i, x_j] = hbar^2 ([b_i, b_j] + chi([b_i, b_j])).
inline std::shared_ptr<StarAlgebra> homogenized_enveloping(const WSetup& s, int max_order) {
    UniversePtr q = with_hbar(*s.u);
    return std::make_shared<StarAlgebra>(q, detail::lie_relations(s.g, q, &s.chi.chi), s.dim(), max_order);
}

// Darboux basis of V = m + m*, with m* inside [g, f] and orthogonal to theta; complement g~_e.
inline SymplecticSubspace slice_subspace(const WSetup& s) {
    const auto& g = s.g;
    int n = g.dim();
    Matrix pi = chi_bivector(g, s.chi.chi);
    Matrix rest;
    for (int a : s.chi.m) rest.push_back(g.basis_vector(a));
    Matrix dual;
    for (int i = 0; i < n; ++i)
        if (s.grading.grade[i] >= 2) dual.push_back(g.bracket(s.triple.f, g.basis_vector(i)));
    for (int i : s.chi.minus_one) {
        if (std::find(s.chi.lagrangian.begin(), s.chi.lagrangian.end(), i) != s.chi.lagrangian.end()) continue;
        Vector w = g.basis_vector(i);
        if (s.chi.theta) w = axpy(w, -pair(pi, w, *s.chi.theta) / s.chi.theta_pairing, *s.chi.theta);
        dual.push_back(w);
    }
    if (!dual.empty()) {
        rref(dual);
        for (auto& r : dual)
            if (!is_zero(r)) rest.push_back(r);
    }
    std::vector<Parity> par = g.parities;
    SymplecticSubspace V;
    V.blocks = symplectic_reduce(pi, par, rest);
    if (!rest.empty()) throw DarbouxError("slice subspace is degenerate");
    V.complement = extended_centralizer(s);
    if (static_cast<int>(V.complement.size()) + V.even_dim() + V.odd_dim() != n)
        throw DarbouxError("V and g~_e do not span g");
    return V;
}

// Classical chart of the Lie-Poisson algebra at chi along the slice subspace.
inline Chart classical_chart(const WSetup& s, int order) {
    return equivariant_darboux(shifted_lie_poisson(s), slice_subspace(s), order);
}

struct SliceChart {
    std::shared_ptr<StarAlgebra> S;
    SymplecticSubspace V;
    Chart chart;
    int work = 0;
    int guard = 0;
};

// Quantum chart along V certified to `order`, growing the guard band until it is.
inline SliceChart slice_chart(const WSetup& s, const SymplecticSubspace& V, int order, int guard = 2) {
    if (guard < 2) throw std::invalid_argument("guard must be at least 2");
    for (;; guard += 2) {
        SliceChart sc;
        sc.V = V;
        sc.guard = guard;
        sc.work = order + 1 + guard;
        sc.S = homogenized_enveloping(s, sc.work);
        try {
            sc.chart = quantum_darboux(*sc.S, V, order, sc.work);
            return sc;
        } catch (const PrecisionError&) {
            if (guard > 2 * order + 8) throw;
        }
    }
}

inline SliceChart slice_chart(const WSetup& s, int order, int guard = 2) {
    return slice_chart(s, slice_subspace(s), order, guard);
}

// hbar -> 0 of a quantum chart, over the classical coordinates.
inline Chart classical_limit(const WSetup& s, const Chart& q) {
    auto lim = [&](const Series& x) {
        if (!x.universe()) return x;
        Series y = specialize_hbar(x, s.dim(), 0);
        return Series(rebase(y.poly(), s.u), y.order());
    };
    Chart c = q;
    for (auto& b : c.blocks) {
        b.first = lim(b.first);
        b.second = lim(b.second);
    }
    for (auto& y : c.centralizer) y = lim(y);
    return c;
}

namespace detail {

inline int m_degree(const WSetup& s, Monomial m) {
    int d = 0;
    for (int a = s.complement; a < s.dim(); ++a) d += m.exponent(a);
    return d;
}

inline int series_weight(const Series& y) {
    std::optional<int> w;
    for (const auto& [m, c] : y.poly().terms()) {
        int x = weight(*y.universe(), m);
        if (w && *w != x) throw DarbouxError("series is not weight-homogeneous");
        w = x;
    }
    return w.value_or(0);
}

}  // namespace detail

// hbar = 1, then reduction modulo U m'^depth (normal-ordered monomials with >= depth factors from m).
inline SuperPoly slice_image(const WSetup& s, const Series& y, int depth = 1) {
    int w = detail::series_weight(y);
    if (y.order() < w + depth - 1) throw PrecisionError("slice_image: precision below weight");
    int hb = s.dim();
    SuperPoly r(s.u);
    for (const auto& [m, c] : y.poly().terms()) {
        if (detail::m_degree(s, m) >= depth) continue;
        r.add_term(m.with_exponent(hb, 0), c);
    }
    return r;
}

// Star product of an ordered monomial in the given factors.
inline Series star_monomial(const StarAlgebra& S, const std::vector<Series>& factors, const std::vector<int>& e, int order) {
    Series v = Series::constant(S.universe(), 1, order);
    for (std::size_t k = factors.size(); k-- > 0;)
        for (int t = 0; t < e[k]; ++t) v = S.mul(factors[k], v);
    return v;
}

namespace detail {

inline Parity linear_parity(const Series& y) {
    std::optional<Parity> p;
    for (const auto& [m, c] : y.poly().terms()) {
        Parity q = parity(*y.universe(), m);
        if (p && *p != q) throw DarbouxError("mixed-parity chart element");
        p = q;
    }
    return p.value_or(Parity::even);
}

}  // namespace detail

// W-algebra as the C*-finite centralizer of the quantum chart at hbar = 1.
inline WPresentation slice_walgebra(const WSetup& s, const SliceChart& sc, int N) {
    WPresentation w;
    w.method = "slice";
    w.order = N;
    std::vector<Series> Y;
    std::vector<int> weights;
    std::vector<Parity> pars;
    for (std::size_t k = 0; k < sc.chart.centralizer.size(); ++k) {
        int wt = sc.chart.centralizer_weights[k];
        if (wt > N) continue;
        Y.push_back(sc.chart.centralizer[k]);
        weights.push_back(wt);
        pars.push_back(detail::linear_parity(Y.back()));
        w.generators.push_back({"s" + std::to_string(k + 1), pars.back(), wt, slice_image(s, Y.back())});
    }
    auto mons = ordered_monomials(weights, pars, N);
    std::vector<SuperPoly> images;
    for (const auto& om : mons) images.push_back(slice_image(s, star_monomial(*sc.S, Y, om.exponents, sc.work)));
    for (int n = 0; n <= N; ++n) {
        std::vector<SuperPoly> upto;
        for (std::size_t k = 0; k < mons.size(); ++k)
            if (mons[k].weight <= n) upto.push_back(images[k]);
        w.table.push_back(poly_rank(upto));
    }
    for (std::size_t a = 0; a < Y.size(); ++a)
        for (std::size_t b = a; b < Y.size(); ++b)
            if (weights[a] + weights[b] <= N) w.products.push_back({a, b, slice_image(s, sc.S->mul(Y[a], Y[b]))});
    return w;
}

inline WPresentation slice_walgebra(const WSetup& s, int N, int guard = 2) {
    return slice_walgebra(s, slice_chart(s, N, guard), N);
}

// Keeps generators of weight <= N and the products among them.
inline WPresentation truncated(const WPresentation& w, int N) {
    if (N > w.order) throw std::invalid_argument("cannot truncate above the computed order");
    WPresentation r;
    r.method = w.method;
    r.order = N;
    r.table.assign(w.table.begin(), w.table.begin() + N + 1);
    std::vector<long> at(w.generators.size(), -1);
    for (std::size_t k = 0; k < w.generators.size(); ++k)
        if (w.generators[k].weight <= N) {
            at[k] = static_cast<long>(r.generators.size());
            r.generators.push_back(w.generators[k]);
        }
    for (const auto& p : w.products)
        if (at[p.a] >= 0 && at[p.b] >= 0 && w.generators[p.a].weight + w.generators[p.b].weight <= N)
            r.products.push_back({static_cast<std::size_t>(at[p.a]), static_cast<std::size_t>(at[p.b]), p.value});
    return r;
}

// ---------------------------------------------------------------------------
// Cross-checks.

struct BasisChange {
    std::string generator;
    std::vector<std::pair<std::string, Rational>> terms;  // ordered monomials in the other presentation
};

struct CompareReport {
    std::vector<std::size_t> whittaker_table, slice_table;
    bool tables_match = false;
    std::vector<std::string> non_invariant;
    std::vector<std::string> leading_mismatch;
    std::vector<std::string> product_mismatch;
    std::size_t products_exact = 0;
    std::vector<BasisChange> change_of_basis;

    bool match() const {
        return tables_match && non_invariant.empty() && leading_mismatch.empty() && product_mismatch.empty();
    }
};

inline CompareReport compare_presentations(const WSetup& s, const WPresentation& wh, const WPresentation& sl) {
    CompareReport r;
    r.whittaker_table = wh.table;
    r.slice_table = sl.table;
    r.tables_match = wh.table == sl.table;
    auto key = [](const std::vector<WGenerator>& gs) {
        std::vector<std::pair<int, int>> k;
        for (const auto& g : gs) k.emplace_back(g.weight, bit(g.parity));
        std::sort(k.begin(), k.end());
        return k;
    };
    if (key(wh.generators) != key(sl.generators)) r.leading_mismatch.push_back("generator weights differ");
    std::vector<std::string> labels;
    for (const auto& g : wh.generators) labels.push_back(g.label);
    for (const auto& g : sl.generators) {
        if (!is_invariant(s, g.lift)) r.non_invariant.push_back(g.label);
        auto mons = ordered_monomials(detail::weights_of(wh.generators), detail::parities_of(wh.generators), g.weight);
        auto vals = monomial_values(s, detail::lifts_of(wh.generators), mons);
        std::vector<Monomial> rows;
        for (const auto& v : vals)
            for (const auto& [m, c] : v.terms()) rows.push_back(m);
        for (const auto& [m, c] : g.lift.terms()) rows.push_back(m);
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        Matrix M = zero_matrix(rows.size(), vals.size());
        Vector rhs(rows.size(), Rational(0));
        for (std::size_t k = 0; k < rows.size(); ++k) {
            for (std::size_t j = 0; j < vals.size(); ++j) M[k][j] = vals[j].coefficient(rows[k]);
            rhs[k] = g.lift.coefficient(rows[k]);
        }
        auto sol = solve(M, rhs);
        if (!sol) {
            r.leading_mismatch.push_back(g.label);
            continue;
        }
        BasisChange bc{g.label, {}};
        for (std::size_t j = 0; j < vals.size(); ++j)
            if ((*sol)[j] != 0) bc.terms.emplace_back(ordered_monomial_string(labels, mons[j].exponents), (*sol)[j]);
        r.change_of_basis.push_back(bc);
    }
    for (const auto& p : sl.products) {
        const auto& a = sl.generators[p.a];
        const auto& b = sl.generators[p.b];
        SuperPoly diff = p.value - reduced_product(s, a.lift, b.lift);
        if (diff.is_zero()) ++r.products_exact;
        if (filtration_degree(*s.u, diff) >= a.weight + b.weight) r.product_mismatch.push_back(a.label + "*" + b.label);
    }
    return r;
}

inline CompareReport compare_realizations(const WSetup& s, int N, int guard = 2) {
    return compare_presentations(s, whittaker_walgebra(s, N), slice_walgebra(s, N, guard));
}

// Negative control: adds the first complement variable that breaks invariance to generator k.
// When every element is invariant (e = 0) the first product is doubled instead.
inline WPresentation perturbed(const WSetup& s, WPresentation w, std::size_t k) {
    auto& g = w.generators.at(k);
    for (int a = 0; a < s.complement; ++a) {
        SuperPoly x = SuperPoly::variable(s.u, a);
        if (detail::poly_parity(x) != g.parity) continue;
        SuperPoly cand = g.lift + x;
        if (is_invariant(s, cand)) continue;
        g.lift = cand;
        return w;
    }
    for (auto& p : w.products)
        if (!p.value.is_zero()) {
            p.value = p.value * Rational(2);
            return w;
        }
    throw std::logic_error("presentation admits no perturbation");
}

struct SplittingReport {
    int order = 0;
    int depth = 0;
    std::size_t monomials = 0;
    std::size_t basis = 0;
    bool independent = false;
    std::vector<std::string> residuals;

    bool ok() const { return independent && monomials == basis && residuals.empty(); }
};

// Factorization A(V) x W -> U modulo U m'^depth on all PBW monomials (chi-centred) of weight <= N.
inline SplittingReport splitting_check(const WSetup& s, const SliceChart& sc, int N, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be positive");
    if (sc.chart.order < N + depth - 1) throw PrecisionError("splitting_check: chart order below N + depth - 1");
    SplittingReport rep;
    rep.order = N;
    rep.depth = depth;
    // Factor order: dual chart elements, centralizer, Lagrangian chart elements (trailing).
    std::vector<Series> factors;
    std::vector<int> weights, kind;  // kind 0 dual, 1 centralizer, 2 Lagrangian
    std::vector<Parity> pars;
    auto push = [&](const Series& x, int w, int k) {
        factors.push_back(x);
        weights.push_back(w);
        kind.push_back(k);
        pars.push_back(detail::linear_parity(x));
    };
    for (const auto& b : sc.chart.blocks) {
        if (b.kind == SymplecticBlock::Kind::odd_single) throw DarbouxError("slice chart has a self-paired block");
        for (const auto& [m, c] : b.first.poly().terms())
            if (m.degree() == 1 && m.exponent(s.dim()) == 0 && !s.in_m(m.lowest()))
                throw DarbouxError("chart Lagrangian not aligned with m");
        push(b.second, b.second_weight, 0);
    }
    for (std::size_t k = 0; k < sc.chart.centralizer.size(); ++k)
        push(sc.chart.centralizer[k], sc.chart.centralizer_weights[k], 1);
    for (const auto& b : sc.chart.blocks) push(b.first, b.first_weight, 2);

    std::vector<std::vector<int>> exps;
    std::vector<int> e(factors.size(), 0);
    auto rec = [&](auto&& self, std::size_t k, int w, int lag) -> void {
        if (k == factors.size()) {
            exps.push_back(e);
            return;
        }
        int cap = pars[k] == Parity::odd ? 1 : 1 << 20;
        for (int x = 0; x <= cap; ++x) {
            int nw = w + x * weights[k], nl = lag + (kind[k] == 2 ? x : 0);
            if (nw > N || nl >= depth) break;
            if (kind[k] != 2 && weights[k] <= 0) throw GradingError("nonpositive weight outside m");
            e[k] = x;
            self(self, k + 1, nw, nl);
            if (weights[k] == 0 && kind[k] != 2) break;
        }
        e[k] = 0;
    };
    rec(rec, 0, 0, 0);
    std::vector<SuperPoly> images;
    for (const auto& x : exps) images.push_back(slice_image(s, star_monomial(*sc.S, factors, x, sc.work), depth));
    rep.basis = images.size();

    // PBW monomials: complement part of weight <= N times fewer than `depth` factors from m.
    std::vector<Monomial> pbw;
    std::vector<int> ev(s.dim(), 0);
    auto mrec = [&](auto&& self, int var, Monomial m, int w, int md) -> void {
        if (var == s.dim()) {
            pbw.push_back(m);
            return;
        }
        int cap = s.g.parities[var] == Parity::odd ? 1 : Monomial::kMaxExponent;
        for (int x = 0; x <= cap; ++x) {
            int nw = w + x * s.weights[var], nm = md + (s.in_m(var) ? x : 0);
            if (nw > N || nm >= depth) break;
            self(self, var + 1, m.with_exponent(var, x), nw, nm);
        }
    };
    mrec(mrec, 0, Monomial(), 0, 0);
    rep.monomials = pbw.size();

    std::vector<Monomial> rows;
    for (const auto& v : images)
        for (const auto& [m, c] : v.terms()) rows.push_back(m);
    for (auto m : pbw) rows.push_back(m);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    Matrix M = zero_matrix(rows.size(), images.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t j = 0; j < images.size(); ++j) M[k][j] = images[j].coefficient(rows[k]);
    rep.independent = rank(M) == images.size();
    for (auto m : pbw) {
        Vector rhs(rows.size(), Rational(0));
        for (std::size_t k = 0; k < rows.size(); ++k) rhs[k] = rows[k] == m ? 1 : 0;
        if (!solve(M, rhs)) rep.residuals.push_back(monomial_string(*s.u, m));
    }
    return rep;
}

inline SplittingReport splitting_check(const WSetup& s, int N, int depth, int guard = 2) {
    return splitting_check(s, slice_chart(s, N + depth - 1, guard), N, depth);
}

namespace detail {

// Rank of the weight-n Rees elements x^alpha * hbar^(n - wt alpha), truncated at adic order n.
inline std::vector<SuperPoly> rees_elements(const StarAlgebra& S, const std::vector<Series>& factors,
                                            const std::vector<int>& weights, const std::vector<Parity>& pars, int n,
                                            int work) {
    std::vector<SuperPoly> out;
    Series hb = S.hbar(work);
    for (const auto& om : ordered_monomials(weights, pars, n)) {
        Series v = star_monomial(S, factors, om.exponents, work);
        for (int j = om.weight; j < n; ++j) v = S.mul(hb, v);
        if (v.order() < n) throw PrecisionError("rees_elements: precision below weight");
        out.push_back(v.truncated(n).poly());
    }
    return out;
}

inline int vector_weight(const std::vector<int>& weights, const Vector& v) {
    std::optional<int> w;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) {
            if (w && *w != weights[i]) throw GradingError("vector is not weight-homogeneous");
            w = weights[i];
        }
    return w.value_or(0);
}

}  // namespace detail

struct CliffordReport {
    int order = 0;
    std::vector<std::size_t> a_table;         // A_ddag = centralizer of the even part of the chart
    std::vector<std::size_t> expected_table;  // S[(g_0)_e] (x) exterior(g_1)
    std::vector<std::size_t> cl_w_table;      // Cl(V_1) (x) W
    bool psi_spans = false;                   // Cl(V_1) (x) W and A_ddag span the same space degreewise
    std::size_t w0_generators = 0;
    std::vector<std::string> embedding_failures;

    bool ok() const {
        return a_table == expected_table && a_table == cl_w_table && psi_spans && embedding_failures.empty();
    }
};

// Charts are computed to chart_order (at least N); tables and checks are reported at N.
inline CliffordReport clifford_factorization(const LieSuperalgebraData& g, int N, int guard = 2,
                                             LagrangianChoice choice = LagrangianChoice::lowest_id,
                                             int chart_order = -1) {
    CliffordReport rep;
    rep.order = N;
    chart_order = std::max(chart_order, N);
    WSetup s = prepare(g, choice);
    SliceChart sc = slice_chart(s, chart_order, guard);
    const StarAlgebra& S = *sc.S;

    // Even part of the chart, with complement (g_0)_e + g_1.
    SymplecticSubspace V0;
    for (const auto& b : sc.V.blocks)
        if (b.kind == SymplecticBlock::Kind::even_pair) V0.blocks.push_back(b);
    std::vector<int> cw;
    std::vector<Parity> cp;
    for (const auto& r : centralizer_basis(s.g, s.triple.e))
        if (s.g.parity_of(r) == Parity::even) {
            V0.complement.push_back(r);
            cw.push_back(detail::vector_weight(s.weights, r));
            cp.push_back(Parity::even);
        }
    for (int i = 0; i < s.dim(); ++i)
        if (s.g.parities[i] == Parity::odd) {
            V0.complement.push_back(s.g.basis_vector(i));
            cw.push_back(s.weights[i]);
            cp.push_back(Parity::odd);
        }
    Chart c0 = quantum_darboux(S, V0, chart_order, sc.work);
    const auto& Z = c0.centralizer;

    std::vector<Series> psi;
    std::vector<int> pw;
    std::vector<Parity> pp;
    for (const auto& b : sc.chart.blocks) {
        if (b.kind == SymplecticBlock::Kind::even_pair) continue;
        psi.push_back(b.first);
        pw.push_back(b.first_weight);
        pp.push_back(Parity::odd);
        if (b.kind == SymplecticBlock::Kind::odd_pair) {
            psi.push_back(b.second);
            pw.push_back(b.second_weight);
            pp.push_back(Parity::odd);
        }
    }
    for (std::size_t k = 0; k < sc.chart.centralizer.size(); ++k) {
        psi.push_back(sc.chart.centralizer[k]);
        pw.push_back(sc.chart.centralizer_weights[k]);
        pp.push_back(detail::linear_parity(sc.chart.centralizer[k]));
    }

    rep.psi_spans = true;
    for (int n = 0; n <= N; ++n) {
        auto za = detail::rees_elements(S, Z, c0.centralizer_weights, cp, n, sc.work);
        auto pa = detail::rees_elements(S, psi, pw, pp, n, sc.work);
        std::size_t rz = poly_rank(za), rp = poly_rank(pa);
        rep.a_table.push_back(rz);
        rep.cl_w_table.push_back(rp);
        std::size_t cnt = 0;
        for (const auto& om : ordered_monomials(cw, cp, n)) cnt += om.weight <= n;
        rep.expected_table.push_back(cnt);
        auto both = za;
        both.insert(both.end(), pa.begin(), pa.end());
        if (poly_rank(both) != rz || rz != rp) rep.psi_spans = false;
    }

    // W_0 from the even part, embedded by variable names.
    WSetup s0 = prepare(even_part(g), choice);
    SliceChart sc0 = slice_chart(s0, chart_order, sc.guard);
    const auto& Y0 = sc0.chart.centralizer;
    rep.w0_generators = Y0.size();
    const UniversePtr& U = S.universe();
    auto embed = [&](const Series& y) {
        SuperPoly p(U);
        const Universe& src = *y.universe();
        for (const auto& [m, c] : y.poly().terms()) {
            Monomial t;
            for (int i = 0; i < src.size(); ++i)
                if (m.exponent(i)) t = t.with_exponent(*U->find(src[i].name), m.exponent(i));
            p.add_term(t, c);
        }
        return Series(p, y.order());
    };
    std::vector<Series> E;
    for (const auto& y : Y0) E.push_back(embed(y));
    auto els = chart_elements(c0);
    std::size_t ncoord = els.size() - c0.centralizer.size();
    for (std::size_t k = 0; k < E.size(); ++k) {
        std::string lab = "u" + std::to_string(k + 1);
        for (std::size_t x = 0; x < ncoord; ++x) {
            Series br = S.bracket(*els[x].value, E[k]);
            if (br.order() < N || !br.truncated(N).is_zero()) rep.embedding_failures.push_back(lab + " vs " + els[x].label);
        }
        int w = sc0.chart.centralizer_weights[k];
        if (w > N) continue;
        auto za = detail::rees_elements(S, Z, c0.centralizer_weights, cp, w, sc.work);
        auto zb = za;
        zb.push_back(E[k].truncated(w).poly());
        if (poly_rank(zb) != poly_rank(za)) rep.embedding_failures.push_back(lab + " outside A_ddag");
    }
    std::vector<Parity> p0;
    for (const auto& y : E) p0.push_back(detail::linear_parity(y));
    for (std::size_t a = 0; a < E.size(); ++a)
        for (std::size_t b = a; b < E.size(); ++b) {
            int w = sc0.chart.centralizer_weights[a] + sc0.chart.centralizer_weights[b];
            if (w > N) continue;
            std::string lab = "u" + std::to_string(a + 1) + "*u" + std::to_string(b + 1);
            Series inside = S.mul(E[a], E[b]);
            Series outside = embed(sc0.S->mul(Y0[a], Y0[b]));
            if (!(inside.truncated(N) - outside.truncated(N)).is_zero()) rep.embedding_failures.push_back(lab + " differs");
            auto span = detail::rees_elements(S, E, sc0.chart.centralizer_weights, p0, w, sc.work);
            auto with = span;
            with.push_back(inside.truncated(w).poly());
            if (poly_rank(with) != poly_rank(span)) rep.embedding_failures.push_back(lab + " not closed");
        }
    return rep;
}

}  // namespace superw
