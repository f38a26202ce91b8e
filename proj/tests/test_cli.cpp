#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + SUPERW_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / "superw_cli_test";
    fs::create_directories(d);
    return d;
}

nlohmann::json catalog(const std::string& name) {
    std::ifstream in(std::string(SUPERW_DEFAULT_CATALOG) + "/" + name + ".json");
    return nlohmann::json::parse(in);
}

fs::path write(const fs::path& p, const nlohmann::json& j) {
    std::ofstream(p) << j.dump();
    return p;
}

nlohmann::json corrupted_osp12() {
    auto doc = catalog("osp12");
    for (auto& b : doc["brackets"])
        if (b["i"] == 3 && b["j"] == 3) b["coeffs"][0] = "3";
    return doc;
}

}  // namespace

TEST_CASE("check_exit_codes") {
    auto ok = run("check --algebra sl2");
    CHECK(ok.code == 0);
    CHECK(parse(ok)["verdict"] == "pass");

    auto bad = run("check --algebra " + write(scratch() / "bad.json", corrupted_osp12()).string());
    CHECK(bad.code == 1);
    CHECK(bad.out.find("(e,x,y)") != std::string::npos);

    auto doc = catalog("sl2");
    doc.erase("form");
    auto nf = run("check --algebra " + write(scratch() / "noform.json", doc).string());
    CHECK(nf.code == 1);
    CHECK(parse(nf)["error"].get<std::string>().find("form") != std::string::npos);
}

TEST_CASE("usage_errors_exit_2") {
    CHECK(run("").code == 2);
    CHECK(run("check --algebra no_such_algebra").code == 2);
    CHECK(run("walgebra --algebra sl2 --guard 1").code == 2);
    CHECK(run("walgebra --algebra sl2 --method other").code == 2);
    CHECK(run("walgebra --algebra sl2 --order 4 --truncate 5").code == 2);
}

TEST_CASE("catalog_env_override") {
    fs::path dir = scratch() / "catalog";
    fs::create_directories(dir);
    write(dir / "sl2.json", corrupted_osp12());
    CHECK(run("check --algebra sl2", "SUPERW_CATALOG=" + dir.string()).code == 1);
    CHECK(run("check --algebra sl2").code == 0);
}

TEST_CASE("darboux_symplectic_toy_is_identity") {
    auto r = run("darboux --algebra symplectic --order 4");
    REQUIRE(r.code == 0);
    auto j = parse(r);
    REQUIRE(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["first"]["expr"] == nlohmann::json::parse(R"([{"coeff":"1","monomial":"q"}])"));
    CHECK(j["blocks"][0]["second"]["expr"] == nlohmann::json::parse(R"([{"coeff":"1","monomial":"p"}])"));
    CHECK(j["blocks"][1]["first"]["expr"] == nlohmann::json::parse(R"([{"coeff":"1","monomial":"t"}])"));
    CHECK(j["residuals"].empty());
}

TEST_CASE("darboux_lie_charts") {
    auto sl2 = run("darboux --algebra sl2 --order 6");
    CHECK(sl2.code == 0);
    CHECK(parse(sl2)["residuals"].empty());
    auto osp = run("darboux --algebra osp12 --order 5 --mode quantum");
    CHECK(osp.code == 0);
    CHECK(parse(osp)["residuals"].empty());
}

TEST_CASE("walgebra_reports") {
    auto sl2 = run("walgebra --algebra sl2 --order 8 --method both");
    REQUIRE(sl2.code == 0);
    auto j = parse(sl2);
    CHECK(j["comparison"]["verdict"] == "match");
    CHECK(j["whittaker"]["table"] == nlohmann::json::parse("[1,1,1,1,2,2,2,2,3]"));
    auto gl = run("walgebra --algebra gl11 --order 4 --method whittaker");
    REQUIRE(gl.code == 0);
    CHECK(parse(gl)["whittaker"]["table"] == nlohmann::json::parse("[1,1,5,5,13]"));
}

TEST_CASE("reports_are_deterministic_and_truncation_stable") {
    auto a = run("walgebra --algebra osp12 --order 6");
    auto b = run("walgebra --algebra osp12 --order 6");
    auto c = run("walgebra --algebra osp12 --order 8 --truncate 6");
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    auto d = run("suite --order 2 --seed 7");
    auto e = run("suite --order 2 --seed 7");
    CHECK(d.out == e.out);
}

TEST_CASE("suite_verdicts") {
    auto ok = run("suite --order 1");
    CHECK(ok.code == 0);
    CHECK(parse(ok)["verdict"] == "pass");
    auto bad = run("suite --order 1 --algebra " + write(scratch() / "bad.json", corrupted_osp12()).string());
    CHECK(bad.code == 1);
}

TEST_CASE("split_and_clifford_commands") {
    auto s = run("split --algebra osp12 --order 4 --depth 2");
    CHECK(s.code == 0);
    CHECK(parse(s)["residuals"].empty());
    auto c = run("clifford --algebra sl21 --order 4");
    CHECK(c.code == 0);
    CHECK(parse(c)["a_table"] == parse(c)["cl_w_table"]);
}

TEST_CASE("out_flag_writes_file") {
    fs::path p = scratch() / "report.json";
    fs::remove(p);
    auto r = run("check --algebra gl11 --out " + p.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(nlohmann::json::parse(ss.str())["algebra"] == "gl11");
}
