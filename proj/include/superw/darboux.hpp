#pragma once

#include "poisson.hpp"
#include "supercore.hpp"

#include <concepts>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace superw {

// Algebra with an associative product and an even bracket that is a biderivation of it.
template <class A>
concept BracketAlgebra = requires(const A& alg, const Series& a, const Series& b) {
    { alg.mul(a, b) } -> std::convertible_to<Series>;
    { alg.bracket(a, b) } -> std::convertible_to<Series>;
    { alg.universe() } -> std::convertible_to<UniversePtr>;
};

struct DarbouxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when the tracked precision of a result falls below the requested order.
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Series certify(const Series& a, int order, const char* what) {
    if (a.order() < order)
        throw PrecisionError(std::string(what) + ": precision " + std::to_string(a.order()) + " below requested " +
                             std::to_string(order));
    return a.truncated(order);
}

inline Series one_like(const Series& a) { return Series::constant(a.universe(), 1, a.order()); }

inline void require_even(const Series& a, const char* name) {
    if (require_parity(a) != Parity::even) throw DarbouxError(std::string(name) + " must be even");
}

inline void require_odd(const Series& a, const char* name) {
    if (!a.is_zero() && require_parity(a) != Parity::odd) throw DarbouxError(std::string(name) + " must be odd");
}

}  // namespace detail

// Corrects g so that {f, g} = 1, assuming {f, g} = 1 + t with deg t >= 1.
template <BracketAlgebra Alg>
Series even_correct(const Alg& A, const Series& f, Series g) {
    detail::require_even(f, "f");
    detail::require_even(g, "g");
    Rational c = A.bracket(f, g).constant_term();
    if (c == 0) throw DarbouxError("degenerate pair: {f,g} has zero constant term");
    if (c != 1) throw DarbouxError("bracket constant term is " + c.get_str() + ", expected 1");
    int last = 0;
    for (;;) {
        Series t = A.bracket(f, g) - detail::one_like(g);
        if (t.is_zero()) return g;
        int d = deg(t);
        if (d <= last) throw DarbouxError("even_correct: error degree did not increase");
        last = d;
        Series corr = Series::zero(g.universe(), g.order());
        Series adt = t, gp = g;
        for (int i = 1; i <= g.order() + 1; ++i) {
            Rational s = Rational(i % 2 ? -1 : 1) / factorial(i);
            corr += A.mul(gp, adt) * s;
            if (adt.is_zero()) break;
            adt = A.bracket(f, adt);
            gp = A.mul(gp, g);
        }
        g += corr;
    }
}

template <BracketAlgebra Alg>
Series even_correct(const Alg& A, const Series& f, const Series& g, int order) {
    return detail::certify(even_correct(A, f, g), order, "even_correct");
}

// Component of a in the joint kernel of ad_f and ad_g, for {f,g} = 1.
template <BracketAlgebra Alg>
Series even_split_project(const Alg& A, const Series& a, const Series& f, const Series& g) {
    int bound = a.order();
    std::vector<Series> fp{detail::one_like(a)}, gp{detail::one_like(a)};
    for (int k = 1; k <= bound; ++k) {
        fp.push_back(A.mul(fp.back(), f));
        gp.push_back(A.mul(gp.back(), g));
    }
    Series sum = Series::zero(a.universe(), a.order());
    Series bj = a;
    for (int j = 0; j <= bound; ++j) {
        Series x = bj;
        for (int i = 0; i + j <= bound; ++i) {
            Rational s = Rational(i % 2 ? -1 : 1) / (factorial(i) * factorial(j));
            sum += A.mul(fp[j], A.mul(gp[i], x)) * s;
            if (x.is_zero()) break;
            x = A.bracket(f, x);
        }
        if (bj.is_zero()) break;
        bj = A.bracket(g, bj);
    }
    return sum;
}

using EvenCoefficients = std::map<std::pair<int, int>, Series>;

// Coefficients b_ij in the joint kernel with a = sum g^i f^j b_ij.
template <BracketAlgebra Alg>
EvenCoefficients even_decompose(const Alg& A, const Series& a, const Series& f, const Series& g) {
    EvenCoefficients out;
    int bound = a.order();
    Series bj = a;
    for (int j = 0; j <= bound; ++j) {
        Series x = bj;
        for (int i = 0; i + j <= bound; ++i) {
            Series b = even_split_project(A, x, f, g) * (Rational(1) / (factorial(i) * factorial(j)));
            if (!b.is_zero()) out.emplace(std::make_pair(i, j), b);
            if (x.is_zero()) break;
            x = A.bracket(f, x);
        }
        if (bj.is_zero()) break;
        bj = -A.bracket(g, bj);
    }
    return out;
}

template <BracketAlgebra Alg>
Series even_reassemble(const Alg& A, const EvenCoefficients& b, const Series& f, const Series& g, int order) {
    Series sum = Series::zero(f.universe(), order);
    for (const auto& [ij, c] : b) {
        Series term = c;
        for (int k = 0; k < ij.second; ++k) term = A.mul(f, term);
        for (int k = 0; k < ij.first; ++k) term = A.mul(g, term);
        sum += term;
    }
    return sum;
}

struct OddElement {
    Series h;
    Rational pairing;  // {h,h}
};

// Builds odd h with {h,h} constant, from f, g or f+g; pairing scaled to 1 when it is a rational square.
template <BracketAlgebra Alg>
OddElement odd_normalize(const Alg& A, const Series& f, const std::optional<Series>& g = std::nullopt) {
    detail::require_odd(f, "f");
    if (g) detail::require_odd(*g, "g");
    Series s = f;
    Rational c = A.bracket(f, f).constant_term();
    if (c == 0 && g) {
        Rational cg = A.bracket(*g, *g).constant_term();
        if (cg != 0) {
            s = *g;
            c = cg;
        } else {
            s = f + *g;
            c = A.bracket(s, s).constant_term();
        }
    }
    if (c == 0) throw DarbouxError("odd_normalize: no element with invertible self-bracket");
    Series t = A.bracket(s, s) * (1 / c) - detail::one_like(s);
    Series u = binomial_series(t, Rational(-1, 2), [&](const Series& x, const Series& y) { return A.mul(x, y); });
    Series h = A.mul(u, s);
    Rational root;
    if (rational_sqrt(c, root)) return {h * (1 / root), Rational(1)};
    return {h, c};
}

template <BracketAlgebra Alg>
OddElement odd_normalize(const Alg& A, const Series& f, const std::optional<Series>& g, int order) {
    auto r = odd_normalize(A, f, g);
    r.h = detail::certify(r.h, order, "odd_normalize");
    return r;
}

// a = b0 + h b1 with b0, b1 in ker ad_h, for {h,h} = pairing.
template <BracketAlgebra Alg>
std::pair<Series, Series> odd_split_project(const Alg& A, const Series& a, const Series& h,
                                            const Rational& pairing = 1) {
    if (pairing == 0) throw DarbouxError("odd_split_project: h not normalized");
    Series b1 = A.bracket(h, a) * (1 / pairing);
    Series b0 = a - A.mul(h, b1);
    return {b0, b1};
}

// Odd pair with {f,f} = {g,g} = 0 and {f,g} = 1.
template <BracketAlgebra Alg>
std::pair<Series, Series> odd_pair_flatten(const Alg& A, Series f, Series g) {
    detail::require_odd(f, "f");
    detail::require_odd(g, "g");
    if (A.bracket(f, f).constant_term() != 0 || A.bracket(g, g).constant_term() != 0)
        throw DarbouxError("odd_pair_flatten: invertible self-bracket, use odd_normalize");
    if (A.bracket(f, g).constant_term() != 1) throw DarbouxError("odd_pair_flatten: {f,g} constant term must be 1");
    auto flatten = [&](Series& x, const Series& y) {
        int last = 0;
        for (;;) {
            Series t = A.bracket(x, x);
            if (t.is_zero()) return;
            int d = deg(t);
            if (d <= last) throw DarbouxError("odd_pair_flatten: error degree did not increase");
            last = d;
            x -= A.mul(y, t) * Rational(1, 2);
        }
    };
    flatten(f, g);
    flatten(g, f);
    Series q = A.bracket(f, g) - detail::one_like(f);
    if (!q.is_zero()) {
        Series u = binomial_series(q, Rational(-1), [&](const Series& x, const Series& y) { return A.mul(x, y); });
        g = A.mul(g, u);
    }
    return {f, g};
}

template <BracketAlgebra Alg>
std::pair<Series, Series> odd_pair_flatten(const Alg& A, const Series& f, const Series& g, int order) {
    auto [a, b] = odd_pair_flatten(A, f, g);
    return {detail::certify(a, order, "odd_pair_flatten"), detail::certify(b, order, "odd_pair_flatten")};
}

// h+ = f+g and h- = f-g, with {h+,h+} = 2 and {h-,h-} = -2.
inline std::pair<Series, Series> odd_pair_split(const Series& f, const Series& g) { return {f + g, f - g}; }

// Component of a commuting with both elements of a flat odd pair.
template <BracketAlgebra Alg>
Series odd_pair_project(const Alg& A, const Series& a, const Series& f, const Series& g) {
    Series b = a - A.mul(g, A.bracket(f, a));
    return b - A.mul(f, A.bracket(g, b));
}

struct ChartBlock {
    SymplecticBlock::Kind kind;
    Series first;
    Series second;  // empty series for odd_single
    Rational pairing = 1;
    int first_weight = 0;
    int second_weight = 0;
};

struct Chart {
    std::vector<ChartBlock> blocks;
    std::vector<Series> centralizer;
    std::vector<int> centralizer_weights;
    int order = 0;
};

using DarbouxChart = Chart;

namespace detail {

inline int linear_weight(const Series& a) {
    auto w = homogeneous_weight(a);
    if (!w) throw DarbouxError("chart input vector is not weight-homogeneous");
    return *w;
}

}  // namespace detail

// Runs the chart construction with inputs at precision `work`, certifying precision order+1.
template <BracketAlgebra Alg>
Chart equivariant_darboux(const Alg& A, const SymplecticSubspace& V, int order, int work) {
    const UniversePtr& U = A.universe();
    std::vector<Series> pending;
    std::vector<int> weights;
    auto add = [&](const Vector& v) {
        Series s = linear_element(U, v, work);
        if (parity(s) == ParityClass::mixed) throw DarbouxError("mixed-parity basis vector");
        weights.push_back(detail::linear_weight(s));
        pending.push_back(s);
    };
    for (const auto& b : V.blocks) {
        add(b.first);
        if (b.kind != SymplecticBlock::Kind::odd_single) add(b.second);
    }
    for (const auto& v : V.complement) add(v);

    Chart chart;
    chart.order = order;
    std::size_t pos = 0;
    auto project_rest = [&](std::size_t from, auto&& proj) {
        for (std::size_t k = from; k < pending.size(); ++k) pending[k] = proj(pending[k]);
    };
    for (const auto& b : V.blocks) {
        ChartBlock cb{b.kind, pending[pos], Series(), 1, weights[pos], 0};
        if (b.kind == SymplecticBlock::Kind::even_pair) {
            Series f = pending[pos], g = pending[pos + 1];
            Rational c = A.bracket(f, g).constant_term();
            if (c == 0) throw DarbouxError("degenerate even pair at block " + std::to_string(chart.blocks.size()));
            g = even_correct(A, f, g * (1 / c));
            project_rest(pos + 2, [&](const Series& a) { return even_split_project(A, a, f, g); });
            cb.second = g;
            cb.second_weight = weights[pos + 1];
            pos += 2;
        } else if (b.kind == SymplecticBlock::Kind::odd_single) {
            auto [h, c] = odd_normalize(A, pending[pos]);
            project_rest(pos + 1, [&](const Series& a) { return odd_split_project(A, a, h, c).first; });
            cb.first = h;
            cb.pairing = c;
            pos += 1;
        } else {
            Series f = pending[pos], g = pending[pos + 1];
            Rational c = A.bracket(f, g).constant_term();
            if (c == 0) throw DarbouxError("degenerate odd pair at block " + std::to_string(chart.blocks.size()));
            auto [ff, gg] = odd_pair_flatten(A, f, g * (1 / c));
            project_rest(pos + 2, [&](const Series& a) { return odd_pair_project(A, a, ff, gg); });
            cb.first = ff;
            cb.second = gg;
            cb.second_weight = weights[pos + 1];
            pos += 2;
        }
        chart.blocks.push_back(cb);
    }
    for (std::size_t k = pos; k < pending.size(); ++k) {
        chart.centralizer.push_back(pending[k]);
        chart.centralizer_weights.push_back(weights[k]);
    }
    auto fix = [&](Series& s) { s = detail::certify(s, order + 1, "equivariant_darboux"); };
    for (auto& b : chart.blocks) {
        fix(b.first);
        if (b.kind != SymplecticBlock::Kind::odd_single) fix(b.second);
    }
    for (auto& c : chart.centralizer) fix(c);
    return chart;
}

// Retries with a growing guard band until order N is certified.
template <BracketAlgebra Alg>
Chart equivariant_darboux(const Alg& A, const SymplecticSubspace& V, int order) {
    for (int guard = 2;; guard += 2) {
        try {
            return equivariant_darboux(A, V, order, order + 1 + guard);
        } catch (const PrecisionError&) {
            if (guard > 4 * order + 8) throw;
        }
    }
}

struct ChartResidual {
    std::string relation;
    std::string residual;
};

struct ChartElement {
    std::string label;
    const Series* value;
    int weight;
};

inline std::vector<ChartElement> chart_elements(const Chart& chart) {
    std::vector<ChartElement> out;
    for (std::size_t k = 0; k < chart.blocks.size(); ++k) {
        const auto& b = chart.blocks[k];
        std::string s = std::to_string(k);
        if (b.kind == SymplecticBlock::Kind::odd_single) {
            out.push_back({"h" + s, &b.first, b.first_weight});
        } else {
            out.push_back({"f" + s, &b.first, b.first_weight});
            out.push_back({"g" + s, &b.second, b.second_weight});
        }
    }
    for (std::size_t k = 0; k < chart.centralizer.size(); ++k)
        out.push_back({"c" + std::to_string(k), &chart.centralizer[k], chart.centralizer_weights[k]});
    return out;
}

// Expected constant value of {x, y} for chart elements x, y (by position in chart_elements).
inline Rational chart_expected(const Chart& chart, std::size_t x, std::size_t y) {
    std::size_t pos = 0;
    for (const auto& b : chart.blocks) {
        if (b.kind == SymplecticBlock::Kind::odd_single) {
            if (x == pos && y == pos) return b.pairing;
            pos += 1;
        } else {
            if (x == pos && y == pos + 1) return 1;
            if (x == pos + 1 && y == pos) return b.kind == SymplecticBlock::Kind::even_pair ? -1 : 1;
            pos += 2;
        }
    }
    return 0;
}

// Nonzero residuals of all chart relations modulo adic order > chart.order, plus homogeneity failures.
template <BracketAlgebra Alg>
std::vector<ChartResidual> verify_chart(const Alg& A, const Chart& chart) {
    std::vector<ChartResidual> out;
    auto elems = chart_elements(chart);
    std::size_t ncoord = elems.size() - chart.centralizer.size();
    for (const auto& e : elems)
        if (!is_homogeneous(*e.value, e.weight))
            out.push_back({"homogeneous(" + e.label + ")", "weight != " + std::to_string(e.weight)});
    for (std::size_t x = 0; x < elems.size(); ++x)
        for (std::size_t y = x; y < elems.size(); ++y) {
            if (x >= ncoord && y >= ncoord) continue;
            Series br = A.bracket(*elems[x].value, *elems[y].value);
            std::string rel = "{" + elems[x].label + "," + elems[y].label + "}";
            if (br.order() < chart.order) {
                out.push_back({rel, "precision " + std::to_string(br.order())});
                continue;
            }
            Series res = br.truncated(chart.order) -
                         Series::constant(br.universe(), chart_expected(chart, x, y), chart.order);
            if (!res.is_zero()) out.push_back({rel, res.poly().str()});
        }
    return out;
}

}  // namespace superw
