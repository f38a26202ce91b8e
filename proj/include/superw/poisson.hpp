#pragma once

#include "linalg.hpp"
#include "supercore.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace superw {

// Values {x_i, x_j} for i <= j.
using BracketTable = std::map<std::pair<int, int>, SuperPoly>;

namespace detail {

// Right derivative a <- d/dx_i, as a polynomial.
inline SuperPoly right_derivative(const SuperPoly& a, int i) {
    const Universe& u = *a.universe();
    bool odd = u[i].parity == Parity::odd;
    std::uint32_t above = odd ? (u.odd_set() & ~((2u << i) - 1)) : 0;
    SuperPoly r(a.universe());
    for (const auto& [m, c] : a.terms()) {
        int e = m.exponent(i);
        if (!e) continue;
        Rational k = c * e;
        if (odd && (std::popcount(m.support() & above) & 1)) k = -k;
        r.add_term(m.with_exponent(i, e - 1), k);
    }
    return r;
}

// Left derivative d/dx_j -> b.
inline SuperPoly left_derivative(const SuperPoly& b, int j) {
    const Universe& u = *b.universe();
    bool odd = u[j].parity == Parity::odd;
    std::uint32_t below = odd ? (u.odd_set() & ((1u << j) - 1)) : 0;
    SuperPoly r(b.universe());
    for (const auto& [m, c] : b.terms()) {
        int e = m.exponent(j);
        if (!e) continue;
        Rational k = c * e;
        if (odd && (std::popcount(m.support() & below) & 1)) k = -k;
        r.add_term(m.with_exponent(j, e - 1), k);
    }
    return r;
}

}  // namespace detail

class PoissonAlgebra {
public:
    PoissonAlgebra(UniversePtr u, const BracketTable& table, int equiv_weight)
        : u_(std::move(u)), k_(equiv_weight) {
        int n = u_->size();
        full_.assign(n, std::vector<SuperPoly>(n, SuperPoly(u_)));
        for (const auto& [key, value] : table) {
            auto [i, j] = key;
            if (i > j || i < 0 || j >= n) throw std::invalid_argument("bracket table key must satisfy 0 <= i <= j < n");
            SuperPoly v = value.universe() ? rebase(value, u_) : SuperPoly(u_);
            Parity expect = (*u_)[i].parity + (*u_)[j].parity;
            for (const auto& [m, c] : v.terms())
                if (parity(*u_, m) != expect)
                    throw std::invalid_argument("bracket {" + (*u_)[i].name + "," + (*u_)[j].name + "} has wrong parity");
            bool both_odd = (*u_)[i].parity == Parity::odd && (*u_)[j].parity == Parity::odd;
            if (i == j && !both_odd && !v.is_zero())
                throw std::invalid_argument("even self-bracket of " + (*u_)[i].name + " must vanish");
            full_[i][j] = v;
            full_[j][i] = both_odd ? v : -v;
        }
        tau_ = 2;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!full_[i][j].is_zero()) tau_ = std::min(tau_, full_[i][j].valuation());
    }

    const UniversePtr& universe() const { return u_; }
    int equiv_weight() const { return k_; }
    const SuperPoly& entry(int i, int j) const { return full_.at(i).at(j); }
    // Brackets lower adic order by at most this much.
    int order_drop() const { return 2 - tau_; }

    Series gen(int id, int order) const { return Series::variable(u_, id, order); }
    Series one(int order) const { return Series::constant(u_, 1, order); }

    Series mul(const Series& a, const Series& b) const { return superw::mul(a, b); }

    SuperPoly bracket_poly(const SuperPoly& a, const SuperPoly& b, int cap = INT_MAX) const {
        int n = u_->size();
        SuperPoly r(u_);
        std::vector<SuperPoly> db(n);
        std::vector<bool> have(n, false);
        for (int i = 0; i < n; ++i) {
            SuperPoly da = detail::right_derivative(a, i);
            if (da.is_zero()) continue;
            for (int j = 0; j < n; ++j) {
                if (full_[i][j].is_zero()) continue;
                if (!have[j]) {
                    db[j] = detail::left_derivative(b, j);
                    have[j] = true;
                }
                if (db[j].is_zero()) continue;
                r += superw::mul(superw::mul(da, full_[i][j], cap), db[j], cap);
            }
        }
        return r;
    }

    Series bracket(const Series& a, const Series& b) const {
        int drop = order_drop();
        int oa = std::max(a.order() + 1, 1) + deg_nonconstant(b) - drop - 1;
        int ob = std::max(b.order() + 1, 1) + deg_nonconstant(a) - drop - 1;
        int o = std::max(std::min(oa, ob), -1);
        return {bracket_poly(a.poly(), b.poly(), o), o};
    }

private:
    UniversePtr u_;
    int k_;
    int tau_ = 0;
    std::vector<std::vector<SuperPoly>> full_;
};

using Operator = std::function<Series(const Series&)>;

template <class Alg>
Operator ad_op(const Alg& alg, Series a) {
    return [&alg, a = std::move(a)](const Series& b) { return alg.bracket(a, b); };
}

template <class Alg>
Series bracket(const Alg& alg, const Series& a, const Series& b) {
    return alg.bracket(a, b);
}

// Lie-Poisson structure {x_i, x_j} = sum_k c_ij^k x_k + constant_ij.
inline PoissonAlgebra linear_poisson(UniversePtr u, const std::vector<std::vector<Vector>>& structure,
                                     const Matrix& constants, int equiv_weight) {
    int n = u->size();
    BracketTable table;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            SuperPoly p(u);
            for (int k = 0; k < n; ++k) p.add_term(Monomial::var(k), structure[i][j][k]);
            if (!constants.empty()) p.add_term(Monomial(), constants[i][j]);
            if (!p.is_zero()) table[{i, j}] = p;
        }
    return PoissonAlgebra(u, table, equiv_weight);
}

// Constant bracket {x_i, x_j} = omega_ij.
inline PoissonAlgebra constant_poisson(UniversePtr u, const Matrix& omega, int equiv_weight) {
    BracketTable table;
    int n = u->size();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (omega[i][j] != 0) table[{i, j}] = SuperPoly::constant(u, omega[i][j]);
    return PoissonAlgebra(u, table, equiv_weight);
}

struct PoissonBivector {
    Matrix matrix;
    std::vector<Parity> parities;
};

// Generator brackets evaluated at the point chi.
inline PoissonBivector bivector_at(const PoissonAlgebra& P, const Vector& chi) {
    const auto& U = P.universe();
    int n = U->size();
    PoissonBivector pi;
    pi.matrix = zero_matrix(n, n);
    for (int i = 0; i < n; ++i) {
        pi.parities.push_back((*U)[i].parity);
        if (i < static_cast<int>(chi.size()) && chi[i] != 0 && (*U)[i].parity == Parity::odd)
            throw std::invalid_argument("chi must vanish on odd generators");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) pi.matrix[i][j] = shift_variables(P.entry(i, j), chi).coefficient(Monomial());
    return pi;
}

struct JacobiViolation {
    int i, j, k;
    std::string residual;
};

// Graded Jacobi on generator triples i <= j <= k, modulo adic order > order.
inline std::vector<JacobiViolation> check_jacobi(const PoissonAlgebra& P, int order) {
    const auto& U = P.universe();
    int n = U->size();
    std::vector<JacobiViolation> out;
    auto gen = [&](int i) { return SuperPoly::variable(U, i); };
    auto par = [&](int i) { return bit((*U)[i].parity); };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                // {x,{y,z}} - {{x,y},z} - (-1)^{|x||y|} {y,{x,z}}
                SuperPoly lhs = P.bracket_poly(gen(i), P.entry(j, k));
                SuperPoly r1 = P.bracket_poly(P.entry(i, j), gen(k));
                SuperPoly r2 = P.bracket_poly(gen(j), P.entry(i, k));
                if (par(i) && par(j)) r2 = -r2;
                SuperPoly res = (lhs - r1 - r2).truncated(order);
                if (!res.is_zero()) out.push_back({i, j, k, res.str()});
            }
    return out;
}

// Weight of {x_i,x_j} entries must equal w_i + w_j + k; returns offending pairs.
inline std::vector<std::pair<int, int>> check_equivariance(const PoissonAlgebra& P) {
    const auto& U = P.universe();
    std::vector<std::pair<int, int>> bad;
    for (int i = 0; i < U->size(); ++i)
        for (int j = i; j < U->size(); ++j) {
            int w = (*U)[i].weight + (*U)[j].weight + P.equiv_weight();
            for (const auto& [m, c] : P.entry(i, j).terms())
                if (weight(*U, m) != w) {
                    bad.emplace_back(i, j);
                    break;
                }
        }
    return bad;
}

struct SymplecticBlock {
    enum class Kind { even_pair, odd_pair, odd_single };
    Kind kind;
    Vector first;   // p, or theta for odd_single
    Vector second;  // q; empty for odd_single
    Rational pairing = 1;
};

inline std::string to_string(SymplecticBlock::Kind k) {
    switch (k) {
        case SymplecticBlock::Kind::even_pair: return "even_pair";
        case SymplecticBlock::Kind::odd_pair: return "odd_pair";
        default: return "odd_single";
    }
}

// Darboux basis of a subspace V on which Pi is nondegenerate, plus a basis of its Pi-orthogonal.
struct SymplecticSubspace {
    std::vector<SymplecticBlock> blocks;
    Matrix complement;

    int even_dim() const {
        int d = 0;
        for (const auto& b : blocks) d += b.kind == SymplecticBlock::Kind::even_pair ? 2 : 0;
        return d;
    }
    int odd_dim() const {
        int d = 0;
        for (const auto& b : blocks)
            d += b.kind == SymplecticBlock::Kind::odd_pair ? 2 : b.kind == SymplecticBlock::Kind::odd_single ? 1 : 0;
        return d;
    }
};

namespace detail {

inline Parity vector_parity(const Vector& v, const std::vector<Parity>& par) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) return par[i];
    return Parity::even;
}

}  // namespace detail

// Extends a Darboux basis greedily from the given vectors (lowest index pivots).
// Returns the blocks and leaves the Pi-orthogonal remainder in `rest`.
inline std::vector<SymplecticBlock> symplectic_reduce(const Matrix& pi, const std::vector<Parity>& par, Matrix& rest) {
    std::vector<SymplecticBlock> blocks;
    auto P = [&](const Vector& a, const Vector& b) { return pair(pi, a, b); };
    auto is_odd = [&](const Vector& v) { return detail::vector_parity(v, par) == Parity::odd; };
    auto erase2 = [&](std::size_t a, std::size_t b) {
        rest.erase(rest.begin() + static_cast<long>(std::max(a, b)));
        rest.erase(rest.begin() + static_cast<long>(std::min(a, b)));
    };
    for (;;) {
        bool found = false;
        for (std::size_t a = 0; a < rest.size() && !found; ++a) {
            if (is_odd(rest[a])) continue;
            for (std::size_t b = 0; b < rest.size(); ++b) {
                if (b == a || is_odd(rest[b])) continue;
                Rational v = P(rest[a], rest[b]);
                if (v == 0) continue;
                Vector p = rest[a], q = scaled(rest[b], 1 / v);
                erase2(a, b);
                for (auto& w : rest) w = axpy(axpy(w, -P(w, q), p), P(w, p), q);
                blocks.push_back({SymplecticBlock::Kind::even_pair, p, q, 1});
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    for (;;) {
        bool found = false;
        for (std::size_t a = 0; a < rest.size(); ++a) {
            if (!is_odd(rest[a])) continue;
            Rational c = P(rest[a], rest[a]);
            if (c == 0) continue;
            Vector t = rest[a];
            rest.erase(rest.begin() + static_cast<long>(a));
            for (auto& w : rest) w = axpy(w, -P(t, w) / c, t);
            blocks.push_back({SymplecticBlock::Kind::odd_single, t, {}, c});
            found = true;
            break;
        }
        if (found) continue;
        for (std::size_t a = 0; a < rest.size() && !found; ++a) {
            if (!is_odd(rest[a])) continue;
            for (std::size_t b = 0; b < rest.size(); ++b) {
                if (b == a || !is_odd(rest[b])) continue;
                Rational v = P(rest[a], rest[b]);
                if (v == 0) continue;
                Vector p = rest[a], q = scaled(rest[b], 1 / v);
                q = axpy(q, -P(q, q) / 2, p);
                erase2(a, b);
                for (auto& w : rest) w = axpy(axpy(w, -P(w, q), p), -P(w, p), q);
                blocks.push_back({SymplecticBlock::Kind::odd_pair, p, q, 1});
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    return blocks;
}

inline SymplecticSubspace find_symplectic_subspace(const PoissonBivector& pi) {
    std::size_t n = pi.matrix.size();
    Matrix rest;
    for (std::size_t i = 0; i < n; ++i) {
        Vector v(n, Rational(0));
        v[i] = 1;
        rest.push_back(v);
    }
    SymplecticSubspace s;
    s.blocks = symplectic_reduce(pi.matrix, pi.parities, rest);
    s.complement = rest;
    return s;
}

// Linear element sum_k v_k x_k at the given precision.
inline Series linear_element(const UniversePtr& u, const Vector& v, int order) {
    SuperPoly p(u);
    for (std::size_t k = 0; k < v.size(); ++k) p.add_term(Monomial::var(static_cast<int>(k)), v[k]);
    return {p, order};
}

}  // namespace superw
