#pragma once

#include "rational.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace superw {

enum class Parity : std::uint8_t { even = 0, odd = 1 };

inline int bit(Parity p) { return p == Parity::odd ? 1 : 0; }
inline Parity parity_of(int b) { return (b & 1) ? Parity::odd : Parity::even; }
inline Parity operator+(Parity a, Parity b) { return parity_of(bit(a) + bit(b)); }

struct GradedVariable {
    int id = 0;
    std::string name;
    Parity parity = Parity::even;
    int weight = 0;
    bool adic_unit = true;
};

// Ordered set of graded variables; ids are 0..size-1.
class Universe {
public:
    static constexpr int kMaxVariables = 12;

    explicit Universe(std::vector<GradedVariable> vars) : vars_(std::move(vars)) {
        if (vars_.size() > static_cast<std::size_t>(kMaxVariables))
            throw std::length_error("too many variables (max 12)");
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i].id != static_cast<int>(i)) throw std::invalid_argument("variable ids must be 0..n-1");
            if (vars_[i].parity == Parity::odd) odd_ |= 1u << i;
            if (vars_[i].adic_unit) adic_ |= 1u << i;
        }
    }

    int size() const { return static_cast<int>(vars_.size()); }
    const GradedVariable& operator[](int id) const { return vars_.at(static_cast<std::size_t>(id)); }
    const std::vector<GradedVariable>& variables() const { return vars_; }
    std::uint32_t odd_set() const { return odd_; }
    std::uint32_t adic_set() const { return adic_; }

    std::optional<int> find(const std::string& name) const {
        for (const auto& v : vars_)
            if (v.name == name) return v.id;
        return std::nullopt;
    }

private:
    std::vector<GradedVariable> vars_;
    std::uint32_t odd_ = 0;
    std::uint32_t adic_ = 0;
};

using UniversePtr = std::shared_ptr<const Universe>;

inline UniversePtr make_universe(std::vector<GradedVariable> vars) {
    return std::make_shared<const Universe>(std::move(vars));
}

// Exponent vector packed in 5-bit fields, variable i at bits [5i, 5i+5).
class Monomial {
public:
    static constexpr int kMaxExponent = 31;
    static constexpr int kBits = 5;
    static constexpr std::uint64_t kField = 0x1F;

    constexpr Monomial() = default;
    constexpr explicit Monomial(std::uint64_t bits) : bits_(bits) {}

    static Monomial var(int id, int e = 1) { return Monomial().with_exponent(id, e); }

    int exponent(int id) const { return static_cast<int>((bits_ >> (kBits * id)) & kField); }

    Monomial with_exponent(int id, int e) const {
        if (e < 0 || e > kMaxExponent) throw std::overflow_error("monomial exponent out of range");
        std::uint64_t mask = kField << (kBits * id);
        return Monomial((bits_ & ~mask) | (static_cast<std::uint64_t>(e) << (kBits * id)));
    }

    std::uint64_t bits() const { return bits_; }
    bool is_one() const { return bits_ == 0; }

    // Bitmask of variables with nonzero exponent.
    std::uint32_t support() const {
        std::uint32_t s = 0;
        for (std::uint64_t b = bits_, i = 0; b; b >>= kBits, ++i)
            if (b & kField) s |= 1u << i;
        return s;
    }

    int degree() const {
        int d = 0;
        for (std::uint64_t b = bits_; b; b >>= kBits) d += static_cast<int>(b & kField);
        return d;
    }

    int degree_in(std::uint32_t vars) const {
        int d = 0;
        for (std::uint64_t b = bits_, i = 0; b; b >>= kBits, ++i)
            if (vars & (1u << i)) d += static_cast<int>(b & kField);
        return d;
    }

    // Lowest variable id present, or -1.
    int lowest() const { return bits_ ? std::countr_zero(bits_) / kBits : -1; }

    auto operator<=>(const Monomial&) const = default;

private:
    std::uint64_t bits_ = 0;
};

inline int adic_order(const Universe& u, Monomial m) { return m.degree_in(u.adic_set()); }

inline int weight(const Universe& u, Monomial m) {
    int w = 0;
    for (int i = 0; i < u.size(); ++i)
        if (int e = m.exponent(i)) w += e * u[i].weight;
    return w;
}

inline Parity parity(const Universe& u, Monomial m) {
    return parity_of(std::popcount(m.support() & u.odd_set()));
}

// Supercommutative product of canonical monomials: (sign, product); sign 0 means zero.
inline std::pair<int, Monomial> multiply(const Universe& u, Monomial a, Monomial b) {
    std::uint32_t oa = a.support() & u.odd_set();
    std::uint32_t ob = b.support() & u.odd_set();
    if (oa & ob) return {0, Monomial()};
    int swaps = 0;
    for (std::uint32_t rest = ob; rest; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        swaps += std::popcount(oa >> (j + 1));
    }
    std::uint64_t sum = a.bits() + b.bits();
    for (int i = 0; i < u.size(); ++i)
        if (a.exponent(i) + b.exponent(i) > Monomial::kMaxExponent)
            throw std::overflow_error("monomial exponent out of range");
    return {(swaps & 1) ? -1 : 1, Monomial(sum)};
}

inline std::string monomial_string(const Universe& u, Monomial m) {
    if (m.is_one()) return "1";
    std::string s;
    for (int i = 0; i < u.size(); ++i) {
        int e = m.exponent(i);
        if (!e) continue;
        if (!s.empty()) s += "*";
        s += u[i].name;
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

class SuperPoly {
public:
    using Terms = std::map<Monomial, Rational>;

    SuperPoly() = default;
    explicit SuperPoly(UniversePtr u) : u_(std::move(u)) {}

    static SuperPoly constant(UniversePtr u, const Rational& c) {
        SuperPoly p(std::move(u));
        p.add_term(Monomial(), c);
        return p;
    }

    static SuperPoly variable(UniversePtr u, int id, const Rational& c = 1) {
        if (id < 0 || id >= u->size()) throw std::out_of_range("variable id");
        SuperPoly p(std::move(u));
        p.add_term(Monomial::var(id), c);
        return p;
    }

    const UniversePtr& universe() const { return u_; }
    const Terms& terms() const& { return terms_; }
    Terms terms() && { return std::move(terms_); }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(Monomial m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(Monomial m, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SuperPoly& operator+=(const SuperPoly& o) {
        check_same(o);
        if (!u_) u_ = o.u_;
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    SuperPoly& operator-=(const SuperPoly& o) {
        check_same(o);
        if (!u_) u_ = o.u_;
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    SuperPoly& operator*=(const Rational& s) {
        if (s == 0) terms_.clear();
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
    friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
    friend SuperPoly operator-(SuperPoly a) { return a *= Rational(-1); }
    friend SuperPoly operator*(SuperPoly a, const Rational& s) { return a *= s; }
    friend SuperPoly operator*(const Rational& s, SuperPoly a) { return a *= s; }
    friend bool operator==(const SuperPoly& a, const SuperPoly& b) { return a.terms_ == b.terms_; }

    // Lowest adic order among terms, or INT_MAX for zero.
    int valuation() const {
        int v = INT_MAX;
        for (const auto& [m, c] : terms_) v = std::min(v, adic_order(*u_, m));
        return v;
    }
    int max_order() const {
        int v = -1;
        for (const auto& [m, c] : terms_) v = std::max(v, adic_order(*u_, m));
        return v;
    }

    SuperPoly truncated(int order) const {
        SuperPoly r(u_);
        for (const auto& [m, c] : terms_)
            if (adic_order(*u_, m) <= order) r.terms_.emplace_hint(r.terms_.end(), m, c);
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << (c < 0 ? " - " : " + ");
            else if (c < 0) os << "-";
            first = false;
            Rational a = abs(c);
            if (m.is_one()) os << a.get_str();
            else if (a == 1) os << monomial_string(*u_, m);
            else os << a.get_str() << "*" << monomial_string(*u_, m);
        }
        return os.str();
    }

    void check_same(const SuperPoly& o) const {
        if (u_ && o.u_ && u_ != o.u_) throw std::invalid_argument("variable-universe mismatch");
    }

private:
    UniversePtr u_;
    Terms terms_;
};

// Supercommutative product keeping only terms of adic order <= cap.
inline SuperPoly mul(const SuperPoly& a, const SuperPoly& b, int cap = INT_MAX) {
    a.check_same(b);
    const Universe& u = *a.universe();
    SuperPoly r(a.universe());
    std::vector<std::pair<Monomial, int>> bo;
    bo.reserve(b.size());
    for (const auto& [n, c] : b.terms()) bo.emplace_back(n, adic_order(u, n));
    for (const auto& [m, ca] : a.terms()) {
        int om = adic_order(u, m);
        if (om > cap) continue;
        for (const auto& [n, on] : bo) {
            if (om + on > cap) continue;
            auto [sign, p] = multiply(u, m, n);
            if (!sign) continue;
            Rational c = ca * b.terms().at(n);
            if (sign < 0) c = -c;
            r.add_term(p, c);
        }
    }
    return r;
}

// Substitutes x_i -> x_i + shift[i] (shift must vanish on odd variables).
inline SuperPoly shift_variables(const SuperPoly& p, const std::vector<Rational>& shift) {
    const auto& U = p.universe();
    SuperPoly r(U);
    for (const auto& [m, c] : p.terms()) {
        SuperPoly acc = SuperPoly::constant(U, c);
        for (int i = 0; i < U->size(); ++i) {
            int e = m.exponent(i);
            if (!e) continue;
            SuperPoly lin = SuperPoly::variable(U, i);
            if (i < static_cast<int>(shift.size()) && shift[i] != 0) {
                if ((*U)[i].parity == Parity::odd) throw std::invalid_argument("shift on odd variable");
                lin.add_term(Monomial(), shift[i]);
            }
            for (int k = 0; k < e; ++k) acc = mul(acc, lin);
        }
        r += acc;
    }
    return r;
}

// Reinterprets p over another universe sharing the ids of every variable p uses.
inline SuperPoly rebase(const SuperPoly& p, const UniversePtr& target) {
    SuperPoly r(target);
    for (const auto& [m, c] : p.terms()) {
        for (int i = 0; i < Universe::kMaxVariables; ++i) {
            if (!m.exponent(i)) continue;
            if (i >= target->size() || (*target)[i].parity != (*p.universe())[i].parity)
                throw std::invalid_argument("rebase: variable " + std::to_string(i) + " missing in target");
        }
        r.add_term(m, c);
    }
    return r;
}

enum class ParityClass { even, odd, mixed };

inline std::string to_string(ParityClass p) {
    switch (p) {
        case ParityClass::even: return "even";
        case ParityClass::odd: return "odd";
        default: return "mixed";
    }
}

// Polynomial known modulo terms of adic order > order; order -1 means nothing is known.
class TruncatedSeries {
public:
    TruncatedSeries() = default;
    TruncatedSeries(SuperPoly p, int order) : order_(std::max(order, -1)) {
        poly_ = p.max_order() <= order_ ? std::move(p) : p.truncated(order_);
    }

    static TruncatedSeries constant(UniversePtr u, const Rational& c, int order) {
        return {SuperPoly::constant(std::move(u), c), order};
    }
    static TruncatedSeries variable(UniversePtr u, int id, int order, const Rational& c = 1) {
        return {SuperPoly::variable(std::move(u), id, c), order};
    }
    static TruncatedSeries zero(UniversePtr u, int order) { return {SuperPoly(std::move(u)), order}; }

    const SuperPoly& poly() const& { return poly_; }
    SuperPoly poly() && { return std::move(poly_); }
    const UniversePtr& universe() const { return poly_.universe(); }
    int order() const { return order_; }
    bool is_zero() const { return poly_.is_zero(); }

    TruncatedSeries truncated(int n) const { return {poly_, std::min(n, order_)}; }

    Rational constant_term() const {
        if (order_ < 0) throw std::domain_error("constant term unknown at order -1");
        return poly_.coefficient(Monomial());
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        poly_.check_same(o.poly_);
        order_ = std::min(order_, o.order_);
        poly_ = (poly_ + o.poly_).truncated(order_);
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        poly_.check_same(o.poly_);
        order_ = std::min(order_, o.order_);
        poly_ = (poly_ - o.poly_).truncated(order_);
        return *this;
    }
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator-(TruncatedSeries a) {
        a.poly_ *= Rational(-1);
        return a;
    }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational& s) {
        a.poly_ *= s;
        return a;
    }
    friend TruncatedSeries operator*(const Rational& s, TruncatedSeries a) { return std::move(a) * s; }

    // Same known part and same precision.
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.order_ == b.order_ && a.poly_ == b.poly_;
    }

    std::string str() const { return poly_.str() + " + O(" + std::to_string(order_ + 1) + ")"; }

private:
    SuperPoly poly_;
    int order_ = -1;
};

using Series = TruncatedSeries;

// Minimal adic order of a nonzero component; order+1 when nothing nonzero is known.
inline int deg(const Series& a) { return std::min(a.poly().valuation(), a.order() + 1); }

// Effective valuation of the part of a without its constant term.
inline int deg_nonconstant(const Series& a) {
    int v = a.order() + 1;
    for (const auto& [m, c] : a.poly().terms())
        if (!m.is_one()) v = std::min(v, adic_order(*a.universe(), m));
    return std::max(v, 1);
}

inline Series drop_constant(const Series& a) {
    SuperPoly p = a.poly();
    p.add_term(Monomial(), -p.coefficient(Monomial()));
    return {p, a.order()};
}

inline ParityClass parity(const Series& a) {
    bool ev = false, od = false;
    for (const auto& [m, c] : a.poly().terms()) (parity(*a.universe(), m) == Parity::odd ? od : ev) = true;
    if (ev && od) return ParityClass::mixed;
    return od ? ParityClass::odd : ParityClass::even;
}

inline Parity require_parity(const Series& a) {
    auto p = parity(a);
    if (p == ParityClass::mixed) throw std::invalid_argument("mixed-parity element");
    return p == ParityClass::odd ? Parity::odd : Parity::even;
}

inline std::vector<std::pair<int, Series>> weight_components(const Series& a) {
    std::map<int, SuperPoly> parts;
    for (const auto& [m, c] : a.poly().terms()) {
        auto [it, fresh] = parts.try_emplace(weight(*a.universe(), m), a.universe());
        it->second.add_term(m, c);
    }
    std::vector<std::pair<int, Series>> out;
    for (auto& [w, p] : parts) out.emplace_back(w, Series(std::move(p), a.order()));
    return out;
}

// True if every stored term has weight w.
inline bool is_homogeneous(const Series& a, int w) {
    for (const auto& [m, c] : a.poly().terms())
        if (weight(*a.universe(), m) != w) return false;
    return true;
}

inline std::optional<int> homogeneous_weight(const Series& a) {
    auto comps = weight_components(a);
    if (comps.size() != 1) return std::nullopt;
    return comps.front().first;
}

// Precision of a product: the error of each factor times the other factor's valuation,
// capped two above the larger input precision.
inline int mul_order(const Series& a, const Series& b) {
    int pa = a.order(), pb = b.order();
    int o = std::min({pa + deg(b), pb + deg(a), std::max(pa, pb) + 2});
    return std::max(o, -1);
}

inline Series mul(const Series& a, const Series& b) {
    int o = mul_order(a, b);
    return {mul(a.poly(), b.poly(), o), o};
}

// Powers of t must be computable by mul; returns sum_k binom(alpha,k) t^k.
template <class Mul>
Series binomial_series(const Series& t, const Rational& alpha, Mul&& mul_fn) {
    if (t.order() >= 0 && t.constant_term() != 0) throw std::domain_error("binomial series needs deg(t) >= 1");
    if (require_parity(t) != Parity::even) throw std::invalid_argument("binomial series of odd element");
    Series sum = Series::constant(t.universe(), 1, t.order());
    Series power = sum;
    Rational coeff = 1;
    for (int k = 1; k <= t.order(); ++k) {
        power = mul_fn(power, t);
        coeff = coeff * (alpha - (k - 1)) / k;
        sum += power * coeff;
        if (power.is_zero()) break;
    }
    return sum;
}

// (1+t)^(-1/2) as a Taylor series.
inline Series inv_sqrt_series(const Series& t) {
    return binomial_series(t, Rational(-1, 2), [](const Series& a, const Series& b) { return mul(a, b); });
}

// (1+t)^(-1) as a geometric series.
inline Series inv_series(const Series& t) {
    return binomial_series(t, Rational(-1), [](const Series& a, const Series& b) { return mul(a, b); });
}

}  // namespace superw
