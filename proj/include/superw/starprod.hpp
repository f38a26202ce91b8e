#pragma once

#include "darboux.hpp"
#include "linalg.hpp"
#include "supercore.hpp"

#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace superw {

struct NegativeHbarPower : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normal-ordered associative algebra: for i > j (and i = j odd)
// x_i * x_j - (-1)^{|i||j|} x_j * x_i = c_ij hbar^2, ascending ids.
// Without hbar (hbar_id < 0) the relations carry no hbar factor.
class StarAlgebra {
public:
    using Relations = std::map<std::pair<int, int>, SuperPoly>;

    StarAlgebra(UniversePtr u, const Relations& brackets, int hbar_id, int max_order)
        : u_(std::move(u)), hbar_(hbar_id), max_order_(max_order) {
        int n = u_->size();
        if (hbar_ >= 0) {
            if (hbar_ != n - 1) throw std::invalid_argument("hbar must be the last variable");
            if ((*u_)[hbar_].parity != Parity::even) throw std::invalid_argument("hbar must be even");
        }
        rel_.assign(n, std::vector<SuperPoly>(n, SuperPoly(u_)));
        SuperPoly h2 = hbar_ >= 0 ? SuperPoly(u_) : SuperPoly::constant(u_, 1);
        if (hbar_ >= 0) h2.add_term(Monomial::var(hbar_, 2), 1);
        for (const auto& [key, value] : brackets) {
            auto [i, j] = key;
            if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("relation index");
            if (i == hbar_ || j == hbar_) throw std::invalid_argument("hbar is central");
            SuperPoly v = value.universe() ? rebase(value, u_) : SuperPoly(u_);
            Parity expect = (*u_)[i].parity + (*u_)[j].parity;
            for (const auto& [m, c] : v.terms())
                if (parity(*u_, m) != expect) throw std::invalid_argument("relation has wrong parity");
            bool both_odd = (*u_)[i].parity == Parity::odd && (*u_)[j].parity == Parity::odd;
            if (i == j && !both_odd) {
                if (!v.is_zero()) throw std::invalid_argument("even generator must commute with itself");
                continue;
            }
            if (i < j) {
                v = both_odd ? v : -v;
                std::swap(i, j);
            }
            rel_[i][j] = superw::mul(v, h2);
        }
    }

    const UniversePtr& universe() const { return u_; }
    int hbar_id() const { return hbar_; }
    int max_order() const { return max_order_; }
    // Value of x_i * x_j - (-1)^{|i||j|} x_j * x_i for i >= j.
    const SuperPoly& relation(int i, int j) const { return rel_.at(i).at(j); }

    Series gen(int id, int order) const { return Series::variable(u_, id, order); }
    Series hbar(int order) const { return Series::variable(u_, hbar_, order); }

    // Normal-ordered product of ordered monomials.
    SuperPoly mono_mul(Monomial m, Monomial n) const {
        if (m.is_one()) return single(n);
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = mono_cache_.find({m, n});
            if (it != mono_cache_.end()) return it->second;
        }
        SuperPoly acc = single(n);
        for (int v = u_->size() - 1; v >= 0; --v)
            for (int k = m.exponent(v); k > 0; --k) acc = left_mul(v, acc);
        std::lock_guard<std::mutex> lock(mu_);
        mono_cache_.emplace(std::make_pair(m, n), acc);
        return acc;
    }

    SuperPoly mul_poly(const SuperPoly& a, const SuperPoly& b, int cap = INT_MAX) const {
        a.check_same(b);
        SuperPoly r(u_);
        std::vector<std::pair<Monomial, int>> bo;
        for (const auto& [n, c] : b.terms()) bo.emplace_back(n, adic_order(*u_, n));
        for (const auto& [m, ca] : a.terms()) {
            int om = adic_order(*u_, m);
            for (const auto& [n, on] : bo) {
                if (om + on > cap) continue;
                const Rational& cb = b.terms().at(n);
                SuperPoly mn = mono_mul(m, n);
                for (const auto& [p, c] : mn.terms())
                    if (adic_order(*u_, p) <= cap) r.add_term(p, ca * cb * c);
            }
        }
        return r;
    }

    Series mul(const Series& a, const Series& b) const {
        int o = mul_order(a, b);
        if (max_order_ >= 0) o = std::min(o, max_order_);
        return {mul_poly(a.poly(), b.poly(), o), o};
    }

    // Super commutator [a, b]; mixed-parity inputs are split into homogeneous parts.
    Series commutator(const Series& a, const Series& b) const {
        auto [a0, a1] = split_parity(a);
        auto [b0, b1] = split_parity(b);
        Series r = mul(a, b) - mul(b0, a) - mul(b1, a0) + mul(b1, a1);
        return r;
    }

    // Normalized bracket [a,b] / hbar^2 (the plain commutator when there is no hbar).
    Series bracket(const Series& a, const Series& b) const {
        if (hbar_ < 0) return commutator(a, b);
        Series c = commutator(drop_constant(a), drop_constant(b));
        SuperPoly q(u_);
        for (const auto& [m, k] : c.poly().terms()) {
            int e = m.exponent(hbar_);
            if (e < 2) throw NegativeHbarPower("commutator term " + monomial_string(*u_, m) + " not divisible by hbar^2");
            q.add_term(m.with_exponent(hbar_, e - 2), k);
        }
        return {q, c.order() - 2};
    }

private:
    SuperPoly single(Monomial m) const {
        SuperPoly p(u_);
        p.add_term(m, 1);
        return p;
    }

    std::pair<Series, Series> split_parity(const Series& a) const {
        SuperPoly e(u_), o(u_);
        for (const auto& [m, c] : a.poly().terms()) (parity(*u_, m) == Parity::odd ? o : e).add_term(m, c);
        return {Series(e, a.order()), Series(o, a.order())};
    }

    bool too_big(int order) const { return max_order_ >= 0 && order > max_order_; }

    SuperPoly left_mul(int v, const SuperPoly& p) const {
        SuperPoly r(u_);
        for (const auto& [m, c] : p.terms()) {
            SuperPoly t = lmul(v, m);
            t *= c;
            r += t;
        }
        return r;
    }

    SuperPoly poly_times_mono(const SuperPoly& rel, Monomial rest) const {
        SuperPoly r(u_);
        for (const auto& [m, c] : rel.terms()) {
            SuperPoly t = mono_mul(m, rest);
            t *= c;
            r += t;
        }
        return r;
    }

    // x_v * m in normal order.
    SuperPoly lmul(int v, Monomial m) const {
        int ord = adic_order(*u_, m) + ((u_->adic_set() >> v) & 1);
        if (too_big(ord)) return SuperPoly(u_);
        int j = m.lowest();
        if (v == hbar_ || j < 0 || v < j) return single(m.with_exponent(v, m.exponent(v) + 1));
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = lmul_cache_.find({v, m});
            if (it != lmul_cache_.end()) return it->second;
        }
        SuperPoly r(u_);
        if (v == j) {
            if ((*u_)[v].parity == Parity::even) {
                r = single(m.with_exponent(v, m.exponent(v) + 1));
            } else {
                r = poly_times_mono(rel_[v][v], m.with_exponent(v, 0));
                r *= Rational(1, 2);
            }
        } else {
            Monomial rest = m.with_exponent(j, m.exponent(j) - 1);
            r = left_mul(j, lmul(v, rest));
            if ((*u_)[v].parity == Parity::odd && (*u_)[j].parity == Parity::odd) r *= Rational(-1);
            r += poly_times_mono(rel_[v][j], rest);
        }
        if (max_order_ >= 0) r = r.truncated(max_order_);
        std::lock_guard<std::mutex> lock(mu_);
        lmul_cache_.emplace(std::make_pair(v, m), r);
        return r;
    }

    UniversePtr u_;
    int hbar_;
    int max_order_;
    std::vector<std::vector<SuperPoly>> rel_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, Monomial>, SuperPoly> lmul_cache_;
    mutable std::map<std::pair<Monomial, Monomial>, SuperPoly> mono_cache_;
};

inline Series star_mul(const StarAlgebra& S, const Series& a, const Series& b) { return S.mul(a, b); }
inline Series star_commutator(const StarAlgebra& S, const Series& a, const Series& b) {
    return S.commutator(a, b);
}

// Universe with hbar appended as the last (even, weight 1, adic) variable.
inline UniversePtr with_hbar(const Universe& base) {
    auto vars = base.variables();
    vars.push_back({static_cast<int>(vars.size()), "hbar", Parity::even, 1, true});
    return make_universe(vars);
}

// Weyl/Clifford algebra: x_i * x_j - (-1)^{|i||j|} x_j * x_i = omega_ij hbar^2.
inline StarAlgebra weyl_clifford(const UniversePtr& u, const Matrix& omega, int max_order) {
    StarAlgebra::Relations rel;
    int n = u->size() - 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (omega[i][j] != 0) rel[{i, j}] = SuperPoly::constant(u, omega[i][j]);
    return StarAlgebra(u, rel, n, max_order);
}

inline Series quantum_even_correct(const StarAlgebra& S, const Series& f, const Series& g, int order) {
    return even_correct(S, f, g, order);
}

inline OddElement quantum_odd_correct(const StarAlgebra& S, const Series& f, int order) {
    return odd_normalize(S, f, std::nullopt, order);
}

inline std::pair<Series, Series> quantum_odd_flatten(const StarAlgebra& S, const Series& f, const Series& g,
                                                     int order) {
    return odd_pair_flatten(S, f, g, order);
}

inline Series quantum_split_project(const StarAlgebra& S, const Series& a, const Series& f, const Series& g) {
    return even_split_project(S, a, f, g);
}

using QuantumChart = Chart;

inline QuantumChart quantum_darboux(const StarAlgebra& S, const SymplecticSubspace& V, int order, int work) {
    return equivariant_darboux(S, V, order, work);
}

// Substitutes hbar = value (0 or 1).
inline Series specialize_hbar(const Series& a, int hbar_id, int value) {
    if (value != 0 && value != 1) throw std::invalid_argument("hbar specializes to 0 or 1");
    SuperPoly r(a.universe());
    for (const auto& [m, c] : a.poly().terms()) {
        if (m.exponent(hbar_id) == 0) r.add_term(m, c);
        else if (value == 1) r.add_term(m.with_exponent(hbar_id, 0), c);
    }
    return {r, a.order()};
}

// f hbar^j with f of weight i maps to f hbar^{i+j}.
inline SuperPoly rees_map(const SuperPoly& a, int hbar_id) {
    const Universe& u = *a.universe();
    SuperPoly r(a.universe());
    for (const auto& [m, c] : a.terms()) {
        int i = weight(u, m.with_exponent(hbar_id, 0));
        if (i < 0) throw std::domain_error("rees_map: negative weight component");
        r.add_term(m.with_exponent(hbar_id, m.exponent(hbar_id) + i), c);
    }
    return r;
}

inline SuperPoly rees_inverse(const SuperPoly& a, int hbar_id) {
    const Universe& u = *a.universe();
    SuperPoly r(a.universe());
    for (const auto& [m, c] : a.terms()) {
        int i = weight(u, m.with_exponent(hbar_id, 0));
        int k = m.exponent(hbar_id) - i;
        if (i < 0 || k < 0) throw std::domain_error("rees_inverse: element outside the Rees image");
        r.add_term(m.with_exponent(hbar_id, k), c);
    }
    return r;
}

// Components of weight <= bound; all variables present must have positive weight.
inline SuperPoly cx_finite_part(const Series& a, int bound) {
    const Universe& u = *a.universe();
    SuperPoly r(a.universe());
    std::uint32_t seen = 0;
    for (const auto& [m, c] : a.poly().terms()) seen |= m.support();
    for (int i = 0; i < u.size(); ++i)
        if ((seen >> i & 1) && u[i].weight <= 0)
            throw std::domain_error("cx_finite_part: nonpositive weight on variable " + u[i].name);
    int minw = INT_MAX;
    for (int i = 0; i < u.size(); ++i)
        if (u[i].adic_unit) minw = std::min(minw, u[i].weight);
    if (minw > 0 && minw != INT_MAX && a.order() < bound / minw)
        throw PrecisionError("cx_finite_part: precision too low for weight bound");
    for (const auto& [m, c] : a.poly().terms())
        if (weight(u, m) <= bound) r.add_term(m, c);
    return r;
}

// Monomials of weight <= bound in positive-weight variables.
inline std::vector<Monomial> cx_finite_basis(const Universe& u, int bound) {
    for (const auto& v : u.variables())
        if (v.weight <= 0) throw std::domain_error("cx_finite_basis: nonpositive weight on " + v.name);
    std::vector<Monomial> out;
    auto rec = [&](auto&& self, int var, Monomial m, int w) -> void {
        if (var == u.size()) {
            out.push_back(m);
            return;
        }
        int cap = u[var].parity == Parity::odd ? 1 : Monomial::kMaxExponent;
        for (int e = 0; e <= cap && w + e * u[var].weight <= bound; ++e)
            self(self, var + 1, m.with_exponent(var, e), w + e * u[var].weight);
    };
    rec(rec, 0, Monomial(), 0);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline std::vector<Monomial> monomials_of_degree(const Universe& u, int d) {
    std::vector<Monomial> out;
    auto rec = [&](auto&& self, int var, Monomial m, int left) -> void {
        if (var == u.size()) {
            if (left == 0) out.push_back(m);
            return;
        }
        int cap = u[var].parity == Parity::odd ? 1 : left;
        for (int e = 0; e <= std::min(cap, left); ++e) self(self, var + 1, m.with_exponent(var, e), left - e);
    };
    rec(rec, 0, Monomial(), d);
    return out;
}

// Spanning set of the degree-d part of the ideal generated by gens.
inline std::vector<SuperPoly> ideal_part(const std::vector<SuperPoly>& gens, int d) {
    std::vector<SuperPoly> out;
    for (const auto& g : gens) {
        int dg = g.terms().begin()->first.degree();
        if (dg > d) continue;
        for (Monomial m : monomials_of_degree(*g.universe(), d - dg)) {
            SuperPoly mp(g.universe());
            mp.add_term(m, 1);
            SuperPoly p = mul(mp, g);
            if (!p.is_zero()) out.push_back(p);
        }
    }
    return out;
}

inline Matrix as_columns(const std::vector<SuperPoly>& ps, const std::vector<Monomial>& basis) {
    std::map<Monomial, std::size_t> row;
    for (std::size_t i = 0; i < basis.size(); ++i) row[basis[i]] = i;
    Matrix m = zero_matrix(basis.size(), ps.size());
    for (std::size_t j = 0; j < ps.size(); ++j)
        for (const auto& [mono, c] : ps[j].terms()) m[row.at(mono)][j] = c;
    return m;
}

}  // namespace detail

// Saturates a homogeneous (total degree) supercommutative ideal: adds x whenever hbar x lies in it.
inline std::vector<SuperPoly> hbar_saturate(std::vector<SuperPoly> gens, int hbar_id, int bound) {
    for (const auto& g : gens) {
        if (g.is_zero()) throw std::invalid_argument("hbar_saturate: zero generator");
        int d = g.terms().begin()->first.degree();
        for (const auto& [m, c] : g.terms())
            if (m.degree() != d) throw std::invalid_argument("hbar_saturate: generator not homogeneous");
    }
    if (gens.empty()) return gens;
    UniversePtr u = gens.front().universe();
    for (bool changed = true; changed;) {
        changed = false;
        for (int d = 1; d <= bound && !changed; ++d) {
            auto top = detail::monomials_of_degree(*u, d);
            auto low = detail::monomials_of_degree(*u, d - 1);
            auto span_d = detail::ideal_part(gens, d);
            auto span_low = detail::ideal_part(gens, d - 1);
            // Columns: ideal spanning set, then hbar * low monomials.
            std::vector<SuperPoly> cols = span_d;
            for (Monomial m : low) {
                SuperPoly p(u);
                p.add_term(m.with_exponent(hbar_id, m.exponent(hbar_id) + 1), 1);
                cols.push_back(p);
            }
            Matrix M = detail::as_columns(cols, top);
            Matrix low_span = span_low.empty() ? Matrix{} : transpose(detail::as_columns(span_low, low));
            for (const auto& v : nullspace(M, cols.size())) {
                SuperPoly x(u);
                for (std::size_t k = 0; k < low.size(); ++k) x.add_term(low[k], v[span_d.size() + k]);
                if (x.is_zero()) continue;
                Vector xv(low.size());
                for (std::size_t k = 0; k < low.size(); ++k) xv[k] = x.coefficient(low[k]);
                if (in_span(low_span, xv)) continue;
                gens.push_back(x);
                changed = true;
                break;
            }
        }
    }
    return gens;
}

}  // namespace superw
