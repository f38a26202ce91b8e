#include <superw/superw.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

using namespace superw;
using report::Json;

namespace {

struct RunConfig {
    std::string command;
    std::string algebra;
    int order = 6;
    int guard = 2;
    int truncate = -1;
    int depth = 2;
    std::string method = "both";
    std::string mode = "classical";
    std::string lagrangian = "lowest";
    std::string out;
    std::uint64_t seed = 20240611;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::filesystem::path catalog_dir() {
    if (const char* env = std::getenv("SUPERW_CATALOG")) return env;
    return SUPERW_DEFAULT_CATALOG;
}

// A path to an existing file, or the name of a catalog entry.
nlohmann::json read_document(const std::string& source) {
    std::filesystem::path p = source;
    if (!std::filesystem::is_regular_file(p)) p = catalog_dir() / (source + ".json");
    if (!std::filesystem::is_regular_file(p)) throw UsageError("unknown algebra: " + source);
    std::ifstream in(p);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw AlgebraParseError(std::string("malformed JSON: ") + e.what());
    }
}

LagrangianChoice lagrangian_of(const RunConfig& c) {
    return c.lagrangian == "highest" ? LagrangianChoice::highest_id : LagrangianChoice::lowest_id;
}

int report_order(const RunConfig& c) { return c.truncate >= 0 ? c.truncate : c.order; }

Json cmd_check(const RunConfig& c) {
    LieSuperalgebraData g = parse_algebra(read_document(c.algebra));
    auto vs = validate_algebra(g);
    PoissonAlgebra P = linear_poisson(g.universe(), g.structure, zero_matrix(g.dim(), g.dim()), 0);
    for (const auto& v : check_jacobi(P, 2))
        vs.push_back({"poisson_jacobi", g.names[v.i] + "," + g.names[v.j] + "," + g.names[v.k], v.residual});
    return report::check_json(g, vs);
}

// Constant bracket {q, p} = 1, {t, t} = 1: the chart is the identity.
Json cmd_darboux_toy(const RunConfig& c) {
    auto u = make_universe({{0, "q", Parity::even, 0, true}, {1, "p", Parity::even, 0, true}, {2, "t", Parity::odd, 0, true}});
    Matrix omega = zero_matrix(3, 3);
    omega[0][1] = 1;
    omega[1][0] = -1;
    omega[2][2] = 1;
    PoissonAlgebra P = constant_poisson(u, omega, 0);
    auto V = find_symplectic_subspace(bivector_at(P, {0, 0, 0}));
    Chart chart = equivariant_darboux(P, V, c.order);
    return report::chart_json(P, chart, report_order(c), "symplectic", "classical");
}

Json cmd_darboux(const RunConfig& c) {
    if (c.algebra == "symplectic") return cmd_darboux_toy(c);
    WSetup s = prepare(load_algebra(read_document(c.algebra)), lagrangian_of(c));
    if (c.mode == "quantum") {
        SliceChart sc = slice_chart(s, c.order, c.guard);
        return report::chart_json(*sc.S, sc.chart, report_order(c), s.g.name, "quantum");
    }
    return report::chart_json(shifted_lie_poisson(s), classical_chart(s, c.order), report_order(c), s.g.name,
                              "classical");
}

Json cmd_walgebra(const RunConfig& c) {
    WSetup s = prepare(load_algebra(read_document(c.algebra)), lagrangian_of(c));
    int n = report_order(c);
    std::optional<WPresentation> wh, sl;
    if (c.method != "slice") wh = truncated(whittaker_walgebra(s, c.order), n);
    if (c.method != "whittaker") sl = truncated(slice_walgebra(s, c.order, c.guard), n);
    return report::walgebra_json(s, c.method, wh ? &*wh : nullptr, sl ? &*sl : nullptr);
}

Json cmd_split(const RunConfig& c) {
    WSetup s = prepare(load_algebra(read_document(c.algebra)), lagrangian_of(c));
    SliceChart sc = slice_chart(s, c.order + c.depth - 1, c.guard);
    return report::splitting_json(s.g.name, splitting_check(s, sc, report_order(c), c.depth));
}

Json cmd_clifford(const RunConfig& c) {
    LieSuperalgebraData g = load_algebra(read_document(c.algebra));
    return report::clifford_json(g.name,
                                 clifford_factorization(g, report_order(c), c.guard, lagrangian_of(c), c.order));
}

Json cmd_suite(const RunConfig& c) {
    std::vector<std::string> names;
    if (!c.algebra.empty()) names.push_back(c.algebra);
    else names = {"sl2", "gl11", "osp12", "sl21"};
    Json runs = Json::array();
    bool ok = true;
    for (const auto& name : names) {
        LieSuperalgebraData g = parse_algebra(read_document(name));
        Json run{{"algebra", g.name}};
        auto vs = validate_algebra(g);
        run["violations"] = report::violations_json(vs);
        std::vector<PropertyFailure> fs;
        if (vs.empty()) {
            WSetup s = prepare(g, lagrangian_of(c));
            PoissonAlgebra plain = linear_poisson(g.universe(), g.structure, zero_matrix(g.dim(), g.dim()), 0);
            auto a = poisson_axioms(plain, 6, c.seed, 200);
            auto b = poisson_axioms(shifted_lie_poisson(s), 6, c.seed + 1, 200);
            for (auto [i, j] : check_equivariance(shifted_lie_poisson(s)))
                fs.push_back({"equivariance", s.g.names[i] + "," + s.g.names[j], "bracket weight"});
            auto w = walgebra_properties(s, c.order, c.guard);
            fs.insert(fs.end(), a.begin(), a.end());
            fs.insert(fs.end(), b.begin(), b.end());
            fs.insert(fs.end(), w.begin(), w.end());
        }
        run["failures"] = report::failures_json(fs);
        bool pass = vs.empty() && fs.empty();
        run["verdict"] = pass ? "pass" : "fail";
        ok = ok && pass;
        runs.push_back(run);
    }
    return {{"command", "suite"}, {"order", c.order}, {"seed", c.seed}, {"runs", runs}, {"verdict", ok ? "pass" : "fail"}};
}

void emit(const RunConfig& c, const Json& j) {
    std::string text = report::dump(j);
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + c.out);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Darboux charts and finite W-superalgebras in exact arithmetic"};
    app.require_subcommand(1);
    auto common = [&](CLI::App* sub, bool need_algebra) {
        auto* a = sub->add_option("--algebra", c.algebra, "catalog name or path to an algebra document");
        if (need_algebra) a->required();
        sub->add_option("--order", c.order, "truncation order N")->check(CLI::PositiveNumber);
        sub->add_option("--guard", c.guard, "initial guard band")->check(CLI::Range(2, 64));
        sub->add_option("--out", c.out, "write the report here instead of stdout");
        sub->add_option("--seed", c.seed, "seed for randomized checks");
        sub->add_option("--truncate", c.truncate, "report at this order (<= N)")->check(CLI::NonNegativeNumber);
        sub->add_option("--lagrangian", c.lagrangian, "Lagrangian choice in g(-1)")
            ->check(CLI::IsMember({"lowest", "highest"}));
    };
    auto* check = app.add_subcommand("check", "validate an algebra document");
    common(check, true);
    auto* darboux = app.add_subcommand("darboux", "equivariant Darboux chart at chi");
    common(darboux, true);
    darboux->add_option("--mode", c.mode, "classical or quantum")->check(CLI::IsMember({"classical", "quantum"}));
    auto* walg = app.add_subcommand("walgebra", "finite W-algebra presentation");
    common(walg, true);
    walg->add_option("--method", c.method, "whittaker, slice or both")
        ->check(CLI::IsMember({"whittaker", "slice", "both"}));
    auto* split = app.add_subcommand("split", "splitting check modulo U m'^k");
    common(split, true);
    split->add_option("--depth", c.depth, "filtration depth k")->check(CLI::PositiveNumber);
    auto* cliff = app.add_subcommand("clifford", "Clifford factorization check");
    common(cliff, true);
    auto* suite = app.add_subcommand("suite", "seeded property suite");
    common(suite, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    c.command = app.get_subcommands().front()->get_name();
    if (c.truncate > c.order) {
        std::cerr << "--truncate must not exceed --order\n";
        return 2;
    }
    try {
        Json j;
        if (c.command == "check") j = cmd_check(c);
        else if (c.command == "darboux") j = cmd_darboux(c);
        else if (c.command == "walgebra") j = cmd_walgebra(c);
        else if (c.command == "split") j = cmd_split(c);
        else if (c.command == "clifford") j = cmd_clifford(c);
        else j = cmd_suite(c);
        emit(c, j);
        return j["verdict"] == "fail" ? 1 : 0;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const InvalidAlgebra& e) {
        emit(c, {{"command", c.command}, {"violations", report::violations_json(e.violations)}, {"verdict", "fail"}});
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        emit(c, {{"command", c.command}, {"error", e.what()}, {"verdict", "fail"}});
        std::cerr << e.what() << "\n";
        return 1;
    }
}
