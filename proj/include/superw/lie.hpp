#pragma once

#include "linalg.hpp"
#include "rational.hpp"
#include "supercore.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superw {

struct Sl2Triple {
    Vector e, h, f;
};

// Finite-dimensional Lie superalgebra in a homogeneous basis:
// [b_i, b_j] = sum_k structure[i][j][k] b_k, invariant form matrix `form`.
struct LieSuperalgebraData {
    std::string name;
    std::vector<std::string> names;
    std::vector<Parity> parities;
    std::vector<std::vector<Vector>> structure;
    Matrix form;
    std::optional<Sl2Triple> triple;

    int dim() const { return static_cast<int>(names.size()); }
    int even_dim() const {
        int d = 0;
        for (auto p : parities) d += p == Parity::even;
        return d;
    }
    int odd_dim() const { return dim() - even_dim(); }

    Vector basis_vector(int i) const {
        Vector v(dim(), Rational(0));
        v[i] = 1;
        return v;
    }

    Vector bracket(const Vector& u, const Vector& v) const {
        Vector r(dim(), Rational(0));
        for (int i = 0; i < dim(); ++i) {
            if (u[i] == 0) continue;
            for (int j = 0; j < dim(); ++j) {
                if (v[j] == 0) continue;
                Rational c = u[i] * v[j];
                for (int k = 0; k < dim(); ++k) r[k] += c * structure[i][j][k];
            }
        }
        return r;
    }

    Rational pairing(const Vector& u, const Vector& v) const { return pair(form, u, v); }

    // Matrix of ad x: column j is [x, b_j].
    Matrix ad(const Vector& x) const {
        Matrix m = zero_matrix(dim(), dim());
        for (int j = 0; j < dim(); ++j) {
            Vector c = bracket(x, basis_vector(j));
            for (int k = 0; k < dim(); ++k) m[k][j] = c[k];
        }
        return m;
    }

    // Parity of a nonzero homogeneous vector; throws when mixed.
    Parity parity_of(const Vector& v) const {
        std::optional<Parity> p;
        for (int i = 0; i < dim(); ++i)
            if (v[i] != 0) {
                if (p && *p != parities[i]) throw std::invalid_argument("vector is not parity homogeneous");
                p = parities[i];
            }
        return p.value_or(Parity::even);
    }

    // Variables x_i = b_i with the given weights, all adic.
    UniversePtr universe(const std::vector<int>& weights = {}) const {
        std::vector<GradedVariable> vs;
        for (int i = 0; i < dim(); ++i)
            vs.push_back({i, names[i], parities[i], weights.empty() ? 0 : weights[i], true});
        return make_universe(vs);
    }
};

struct AlgebraParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Violation {
    std::string kind;  // parity, antisymmetry, jacobi, form_parity, form_symmetry, form_invariance, form_degenerate
    std::string where;
    std::string detail;
};

struct InvalidAlgebra : std::runtime_error {
    std::vector<Violation> violations;
    explicit InvalidAlgebra(std::vector<Violation> v)
        : std::runtime_error(v.empty() ? "invalid algebra" : v.front().kind + " violation at " + v.front().where),
          violations(std::move(v)) {}
};

namespace detail {

inline Rational json_rational(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw AlgebraParseError("coefficient must be an integer or a rational string");
}

inline Vector json_vector(const nlohmann::json& j, int n, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw AlgebraParseError(what + ": expected an array of " + std::to_string(n) + " coefficients");
    Vector v;
    for (const auto& x : j) v.push_back(json_rational(x));
    return v;
}

inline std::string vec_string(const LieSuperalgebraData& g, const Vector& v) {
    std::string s;
    for (int k = 0; k < g.dim(); ++k) {
        if (v[k] == 0) continue;
        if (!s.empty()) s += " + ";
        s += to_string(v[k]) + "*" + g.names[k];
    }
    return s.empty() ? "0" : s;
}

}  // namespace detail

// Parses an algebra document; shape errors throw AlgebraParseError, no validation.
inline LieSuperalgebraData parse_algebra(const nlohmann::json& doc) {
    LieSuperalgebraData g;
    try {
        for (const char* key : {"name", "basis", "brackets", "form"})
            if (!doc.contains(key)) throw AlgebraParseError(std::string("missing field '") + key + "'");
        g.name = doc.at("name").get<std::string>();
        for (const auto& b : doc.at("basis")) {
            g.names.push_back(b.at("name").get<std::string>());
            const auto& p = b.at("parity");
            bool odd = p.is_string() ? p.get<std::string>() == "odd" : p.get<int>() == 1;
            if (p.is_string() && p != "odd" && p != "even") throw AlgebraParseError("parity must be 'even' or 'odd'");
            g.parities.push_back(odd ? Parity::odd : Parity::even);
        }
        int n = g.dim();
        if (n == 0) throw AlgebraParseError("empty basis");
        if (n > Universe::kMaxVariables - 1) throw AlgebraParseError("basis too large");
        g.structure.assign(n, std::vector<Vector>(n, Vector(n, Rational(0))));
        std::vector<std::vector<bool>> given(n, std::vector<bool>(n, false));
        for (const auto& b : doc.at("brackets")) {
            int i = b.at("i").get<int>(), j = b.at("j").get<int>();
            if (i < 0 || j < 0 || i >= n || j >= n) throw AlgebraParseError("bracket index out of range");
            if (given[i][j] || given[j][i]) throw AlgebraParseError("bracket given twice");
            given[i][j] = true;
            Vector c = detail::json_vector(b.at("coeffs"), n, "bracket coeffs");
            bool both_odd = g.parities[i] == Parity::odd && g.parities[j] == Parity::odd;
            g.structure[i][j] = c;
            if (i != j) g.structure[j][i] = both_odd ? c : scaled(c, -1);
        }
        const auto& f = doc.at("form");
        if (!f.is_array() || static_cast<int>(f.size()) != n) throw AlgebraParseError("form must be an n x n matrix");
        for (const auto& row : f) g.form.push_back(detail::json_vector(row, n, "form row"));
        if (doc.contains("sl2_triple")) {
            const auto& t = doc.at("sl2_triple");
            g.triple = Sl2Triple{detail::json_vector(t.at("e"), n, "sl2_triple.e"),
                                 detail::json_vector(t.at("h"), n, "sl2_triple.h"),
                                 detail::json_vector(t.at("f"), n, "sl2_triple.f")};
        }
    } catch (const nlohmann::json::exception& e) {
        throw AlgebraParseError(e.what());
    } catch (const std::invalid_argument& e) {
        throw AlgebraParseError(e.what());
    }
    return g;
}

inline nlohmann::json algebra_to_json(const LieSuperalgebraData& g) {
    using nlohmann::json;
    auto vec = [](const Vector& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(to_string(x));
        return a;
    };
    json doc;
    doc["name"] = g.name;
    doc["basis"] = json::array();
    for (int i = 0; i < g.dim(); ++i)
        doc["basis"].push_back({{"name", g.names[i]}, {"parity", g.parities[i] == Parity::odd ? "odd" : "even"}});
    doc["brackets"] = json::array();
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i; j < g.dim(); ++j)
            if (!is_zero(g.structure[i][j])) doc["brackets"].push_back({{"i", i}, {"j", j}, {"coeffs", vec(g.structure[i][j])}});
    doc["form"] = json::array();
    for (const auto& row : g.form) doc["form"].push_back(vec(row));
    if (g.triple) doc["sl2_triple"] = {{"e", vec(g.triple->e)}, {"h", vec(g.triple->h)}, {"f", vec(g.triple->f)}};
    return doc;
}

// All structural invariants, checked exactly on basis elements.
inline std::vector<Violation> validate_algebra(const LieSuperalgebraData& g) {
    std::vector<Violation> out;
    int n = g.dim();
    auto p = [&](int i) { return bit(g.parities[i]); };
    auto nm = [&](int i) { return g.names[i]; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k)
                if (g.structure[i][j][k] != 0 && p(k) != (p(i) ^ p(j))) {
                    out.push_back({"parity", "[" + nm(i) + "," + nm(j) + "]", "component along " + nm(k)});
                    break;
                }
            int s = p(i) && p(j) ? 1 : -1;
            if (j >= i && g.structure[i][j] != scaled(g.structure[j][i], s))
                out.push_back({"antisymmetry", "[" + nm(i) + "," + nm(j) + "]", ""});
            if (i == j && !p(i) && !is_zero(g.structure[i][i]))
                out.push_back({"antisymmetry", "[" + nm(i) + "," + nm(i) + "]", "even self-bracket nonzero"});
        }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                Vector x = g.basis_vector(i), y = g.basis_vector(j), z = g.basis_vector(k);
                // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
                Vector lhs = g.bracket(x, g.bracket(y, z));
                Vector r = g.bracket(g.bracket(x, y), z);
                Vector t = g.bracket(y, g.bracket(x, z));
                r = axpy(r, p(i) && p(j) ? -1 : 1, t);
                Vector res = axpy(lhs, -1, r);
                if (!is_zero(res))
                    out.push_back({"jacobi", "(" + nm(i) + "," + nm(j) + "," + nm(k) + ")", detail::vec_string(g, res)});
            }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rational a = g.form[i][j];
            if (a != 0 && p(i) != p(j)) out.push_back({"form_parity", "(" + nm(i) + "," + nm(j) + ")", to_string(a)});
            int s = p(i) && p(j) ? -1 : 1;
            if (j > i && a != s * g.form[j][i]) out.push_back({"form_symmetry", "(" + nm(i) + "," + nm(j) + ")", ""});
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vector x = g.basis_vector(i), y = g.basis_vector(j), z = g.basis_vector(k);
                Rational l = g.pairing(g.bracket(x, y), z), r = g.pairing(x, g.bracket(y, z));
                if (l != r)
                    out.push_back({"form_invariance", "(" + nm(i) + "," + nm(j) + "," + nm(k) + ")",
                                   l.get_str() + " != " + r.get_str()});
            }
    if (determinant(g.form) == 0) out.push_back({"form_degenerate", "form", "determinant is zero"});
    return out;
}

inline LieSuperalgebraData load_algebra(const nlohmann::json& doc) {
    LieSuperalgebraData g = parse_algebra(doc);
    auto v = validate_algebra(g);
    if (!v.empty()) throw InvalidAlgebra(std::move(v));
    return g;
}

// Same algebra in the basis b_{order[0]}, b_{order[1]}, ...
inline LieSuperalgebraData permuted(const LieSuperalgebraData& g, const std::vector<int>& order) {
    int n = g.dim();
    if (static_cast<int>(order.size()) != n) throw std::invalid_argument("permutation size");
    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a) inv.at(order[a]) = a;
    for (int x : inv)
        if (x < 0) throw std::invalid_argument("not a permutation");
    auto pv = [&](const Vector& v) {
        Vector r(n);
        for (int a = 0; a < n; ++a) r[a] = v[order[a]];
        return r;
    };
    LieSuperalgebraData h;
    h.name = g.name;
    for (int a = 0; a < n; ++a) {
        h.names.push_back(g.names[order[a]]);
        h.parities.push_back(g.parities[order[a]]);
    }
    h.structure.assign(n, std::vector<Vector>(n));
    h.form = zero_matrix(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            h.structure[a][b] = pv(g.structure[order[a]][order[b]]);
            h.form[a][b] = g.form[order[a]][order[b]];
        }
    if (g.triple) h.triple = Sl2Triple{pv(g.triple->e), pv(g.triple->h), pv(g.triple->f)};
    return h;
}

// Even part g_0 with the restricted form; the basis keeps the relative order.
inline LieSuperalgebraData even_part(const LieSuperalgebraData& g) {
    std::vector<int> keep;
    for (int i = 0; i < g.dim(); ++i)
        if (g.parities[i] == Parity::even) keep.push_back(i);
    int m = static_cast<int>(keep.size());
    auto restrict = [&](const Vector& v) {
        Vector r(m);
        for (int a = 0; a < m; ++a) r[a] = v[keep[a]];
        return r;
    };
    LieSuperalgebraData h;
    h.name = g.name + "_even";
    for (int i : keep) {
        h.names.push_back(g.names[i]);
        h.parities.push_back(Parity::even);
    }
    h.structure.assign(m, std::vector<Vector>(m));
    h.form = zero_matrix(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            h.structure[a][b] = restrict(g.structure[keep[a]][keep[b]]);
            h.form[a][b] = g.form[keep[a]][keep[b]];
        }
    if (g.triple) h.triple = Sl2Triple{restrict(g.triple->e), restrict(g.triple->h), restrict(g.triple->f)};
    return h;
}

}  // namespace superw
