#pragma once

#include "darboux.hpp"
#include "lie.hpp"
#include "starprod.hpp"
#include "suite.hpp"
#include "wslice.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace superw::report {

using Json = nlohmann::ordered_json;

// Normal-form monomial list, in monomial order.
inline Json poly_json(const SuperPoly& p) {
    Json out = Json::array();
    for (const auto& [m, c] : p.terms())
        out.push_back({{"coeff", c.get_str()}, {"monomial", monomial_string(*p.universe(), m)}});
    return out;
}

inline std::string parity_name(Parity p) { return p == Parity::odd ? "odd" : "even"; }

inline Json violations_json(const std::vector<Violation>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) out.push_back({{"kind", v.kind}, {"where", v.where}, {"detail", v.detail}});
    return out;
}

inline Json failures_json(const std::vector<PropertyFailure>& fs) {
    Json out = Json::array();
    for (const auto& f : fs) out.push_back({{"property", f.property}, {"where", f.where}, {"detail", f.detail}});
    return out;
}

inline Json check_json(const LieSuperalgebraData& g, const std::vector<Violation>& vs) {
    return {{"command", "check"},
            {"algebra", g.name},
            {"dim", {{"even", g.even_dim()}, {"odd", g.odd_dim()}}},
            {"violations", violations_json(vs)},
            {"verdict", vs.empty() ? "pass" : "fail"}};
}

// Chart relations and homogeneity modulo adic order > N (N <= chart.order).
template <BracketAlgebra Alg>
Json chart_residuals(const Alg& A, const Chart& chart, int N) {
    Json out = Json::array();
    auto elems = chart_elements(chart);
    std::size_t ncoord = elems.size() - chart.centralizer.size();
    for (const auto& e : elems)
        if (!is_homogeneous(*e.value, e.weight))
            out.push_back({{"relation", "homogeneous(" + e.label + ")"}, {"residual", "not of weight " + std::to_string(e.weight)}});
    for (std::size_t x = 0; x < elems.size(); ++x)
        for (std::size_t y = x; y < elems.size(); ++y) {
            if (x >= ncoord && y >= ncoord) continue;
            std::string rel = "{" + elems[x].label + "," + elems[y].label + "}";
            Series br;
            try {
                br = A.bracket(*elems[x].value, *elems[y].value);
            } catch (const NegativeHbarPower& e) {
                out.push_back({{"relation", rel}, {"residual", e.what()}});
                continue;
            }
            if (br.order() < N) {
                out.push_back({{"relation", rel}, {"residual", "precision " + std::to_string(br.order())}});
                continue;
            }
            Series res = br.truncated(N) - Series::constant(br.universe(), chart_expected(chart, x, y), N);
            if (!res.is_zero()) out.push_back({{"relation", rel}, {"residual", res.poly().str()}});
        }
    return out;
}

template <BracketAlgebra Alg>
Json chart_json(const Alg& A, const Chart& chart, int N, const std::string& algebra, const std::string& mode) {
    if (N > chart.order) throw std::invalid_argument("report order exceeds chart order");
    auto elem = [&](const std::string& label, const Series& v, int w) {
        return Json{{"label", label},
                    {"weight", w},
                    {"parity", parity_name(detail::linear_parity(v))},
                    {"expr", poly_json(v.truncated(N).poly())}};
    };
    Json blocks = Json::array();
    for (std::size_t k = 0; k < chart.blocks.size(); ++k) {
        const auto& b = chart.blocks[k];
        std::string s = std::to_string(k);
        Json j{{"kind", to_string(b.kind)}, {"pairing", b.pairing.get_str()}};
        if (b.kind == SymplecticBlock::Kind::odd_single) {
            j["first"] = elem("h" + s, b.first, b.first_weight);
        } else {
            j["first"] = elem("f" + s, b.first, b.first_weight);
            j["second"] = elem("g" + s, b.second, b.second_weight);
        }
        blocks.push_back(j);
    }
    Json cen = Json::array();
    for (std::size_t k = 0; k < chart.centralizer.size(); ++k)
        cen.push_back(elem("c" + std::to_string(k), chart.centralizer[k], chart.centralizer_weights[k]));
    Json res = chart_residuals(A, chart, N);
    bool ok = res.empty();
    return {{"command", "darboux"}, {"algebra", algebra}, {"mode", mode},       {"order", N},
            {"blocks", blocks},     {"centralizer", cen}, {"residuals", res}, {"verdict", ok ? "pass" : "fail"}};
}

inline Json presentation_json(const WPresentation& w) {
    Json gens = Json::array();
    for (const auto& g : w.generators)
        gens.push_back({{"label", g.label}, {"parity", parity_name(g.parity)}, {"weight", g.weight}, {"lift", poly_json(g.lift)}});
    Json prods = Json::array();
    for (const auto& p : w.products)
        prods.push_back({{"a", w.generators[p.a].label}, {"b", w.generators[p.b].label}, {"value", poly_json(p.value)}});
    return {{"method", w.method}, {"order", w.order}, {"table", w.table}, {"generators", gens}, {"products", prods}};
}

inline Json compare_json(const CompareReport& r) {
    Json cob = Json::array();
    for (const auto& b : r.change_of_basis) {
        Json terms = Json::array();
        for (const auto& [m, c] : b.terms) terms.push_back({{"coeff", c.get_str()}, {"monomial", m}});
        cob.push_back({{"generator", b.generator}, {"terms", terms}});
    }
    return {{"tables_match", r.tables_match},
            {"non_invariant", r.non_invariant},
            {"leading_mismatch", r.leading_mismatch},
            {"product_mismatch", r.product_mismatch},
            {"products_exact", r.products_exact},
            {"change_of_basis", cob},
            {"verdict", r.match() ? "match" : "mismatch"}};
}

inline Json walgebra_json(const WSetup& s, const std::string& method, const WPresentation* wh,
                          const WPresentation* sl) {
    Json j{{"command", "walgebra"},
           {"algebra", s.g.name},
           {"method", method},
           {"order", (wh ? wh : sl)->order},
           {"lagrangian", to_string(s.choice)}};
    if (wh) j["whittaker"] = presentation_json(*wh);
    if (sl) j["slice"] = presentation_json(*sl);
    bool ok = true;
    if (wh && sl) {
        CompareReport r = compare_presentations(s, *wh, *sl);
        j["comparison"] = compare_json(r);
        ok = r.match();
    }
    j["verdict"] = ok ? "pass" : "fail";
    return j;
}

inline Json splitting_json(const std::string& algebra, const SplittingReport& r) {
    return {{"command", "split"},          {"algebra", algebra},     {"order", r.order},
            {"depth", r.depth},            {"monomials", r.monomials}, {"basis", r.basis},
            {"independent", r.independent}, {"residuals", r.residuals}, {"verdict", r.ok() ? "pass" : "fail"}};
}

inline Json clifford_json(const std::string& algebra, const CliffordReport& r) {
    return {{"command", "clifford"},
            {"algebra", algebra},
            {"order", r.order},
            {"a_table", r.a_table},
            {"expected_table", r.expected_table},
            {"cl_w_table", r.cl_w_table},
            {"psi_spans", r.psi_spans},
            {"w0_generators", r.w0_generators},
            {"embedding_failures", r.embedding_failures},
            {"verdict", r.ok() ? "pass" : "fail"}};
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace superw::report
