#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("mimp_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_file(const std::string& name, const std::string& content) {
    fs::path p = work_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
}

RunResult run(const std::string& args, const std::string& stdinData = "",
              const std::string& envPrefix = "") {
    static int counter = 0;
    fs::path outP = work_dir() / ("out_" + std::to_string(counter));
    fs::path errP = work_dir() / ("err_" + std::to_string(counter));
    std::string redirect = " < /dev/null";
    if (!stdinData.empty()) {
        fs::path inP = work_dir() / ("in_" + std::to_string(counter));
        std::ofstream(inP, std::ios::binary) << stdinData;
        redirect = " < \"" + inP.string() + "\"";
    }
    ++counter;
    std::string cmd = (envPrefix.empty() ? "" : envPrefix + " ") + "\"" MIMP_BIN "\" " +
                      args + " > \"" + outP.string() + "\" 2> \"" + errP.string() + "\"" +
                      redirect;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(outP);
    r.err = slurp(errP);
    return r;
}

std::string fixture(const std::string& name) {
    return std::string(MIMP_FIXTURE_DIR) + "/" + name;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    RunResult help = run("--help");
    CHECK(help.exit == 0);
    CHECK(help.out.find("Usage") != std::string::npos);

    CHECK(run("").exit == 2);
    CHECK(run("frobnicate").exit == 2);
    CHECK(run("parse").exit == 2);
    CHECK(run("check /nonexistent/path.json").exit == 2);
}

TEST_CASE("parse reports formula shape") {
    RunResult r = run("parse \"a -> b -> c\"");
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    CHECK(j.at("formula") == "a -> b -> c");
    CHECK(j.at("nodes") == 5);
    CHECK(j.at("tokens") == 5);
    CHECK_FALSE(j.contains("tree"));

    RunResult t = run("parse --tree \"a -> b -> c\"");
    REQUIRE(t.exit == 0);
    json jt = json::parse(t.out);
    CHECK(jt.at("tree").at("vertices").size() == 5);
    CHECK(jt.at("tree").at("root") == 0);

    RunResult bad = run("parse \"a ->\"");
    CHECK(bad.exit == 2);
    CHECK(!bad.err.empty());
}

TEST_CASE("format flag works before and after the verb") {
    RunResult before = run("--format text parse \"a -> b\"");
    REQUIRE(before.exit == 0);
    CHECK(before.out.find("formula: a -> b") != std::string::npos);
    RunResult after = run("parse \"a -> b\" --format text");
    REQUIRE(after.exit == 0);
    CHECK(after.out == before.out);
    CHECK(run("--format yaml parse \"a\"").exit == 2);
}

TEST_CASE("check judges the worked example and a broken discharge") {
    RunResult r = run("check " + q(fixture("fig_derivation.proof.json")));
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    CHECK(j.at("ok") == true);
    CHECK(j.at("conclusion") == "A -> C");
    CHECK(j.at("metrics").at("sizeNodes") == 6);
    CHECK(j.at("metrics").at("height") == 3);
    std::set<std::string> open(j.at("open").begin(), j.at("open").end());
    CHECK(open == std::set<std::string>{"A -> B", "B -> C"});
    CHECK(j.at("closed") == false);
    CHECK(j.at("normal") == true);
    CHECK(j.at("expanded") == true);

    std::string offPath = write_file("offpath.proof.json", R"({
      "elim": {
        "minor": {"intro": {"label": 1, "discharged": "a",
                            "premise": {"hyp": {"formula": "a", "label": 1}}}},
        "major": {"hyp": {"formula": "(a -> a) -> b", "label": 1}}
      }
    })");
    RunResult bad = run("check " + q(offPath));
    CHECK(bad.exit == 1);
    json jb = json::parse(bad.out);
    CHECK(jb.at("ok") == false);
    REQUIRE(!jb.at("violations").empty());
    std::string reason = jb.at("violations")[0].at("reason");
    CHECK(reason.find("not on its path") != std::string::npos);
}

TEST_CASE("normalize and expand pipe through files and stdin") {
    std::string redex = write_file("redex.proof.json", R"({
      "elim": {
        "minor": {"hyp": {"formula": "a"}},
        "major": {"intro": {"label": 1, "discharged": "a",
                            "premise": {"hyp": {"formula": "a", "label": 1}}}}
      }
    })");
    RunResult n = run("normalize " + q(redex));
    REQUIRE(n.exit == 0);
    CHECK(json::parse(n.out) == json::parse(R"({"hyp":{"formula":"a"}})"));
    json status = json::parse(n.err);
    CHECK(status.at("steps") == 1);
    CHECK(status.at("nodesBefore") == 4);
    CHECK(status.at("nodesAfter") == 1);
    CHECK_FALSE(status.contains("trace"));

    RunResult traced = run("normalize --trace " + q(redex));
    json ts = json::parse(traced.err);
    REQUIRE(ts.at("trace").size() == 1);
    CHECK(ts.at("trace")[0].at("site") == "root");
    CHECK(ts.at("trace")[0].at("maximalFormula") == "a -> a");

    // expanding the normalized hypothesis is the identity here (atomic conclusion)
    RunResult e = run("expand -", n.out);
    REQUIRE(e.exit == 0);
    CHECK(json::parse(e.out) == json::parse(n.out));

    // a non-normal input is refused by expand
    RunResult refuse = run("expand " + q(redex));
    CHECK(refuse.exit == 1);
    CHECK(refuse.err.find("normal") != std::string::npos);

    // eta-expansion introduces structure on an implication-typed hypothesis
    std::string hypAB = write_file("hyp_ab.proof.json", R"({"hyp":{"formula":"a -> b"}})");
    RunResult e2 = run("expand " + q(hypAB));
    REQUIRE(e2.exit == 0);
    json je = json::parse(e2.out);
    CHECK(je.contains("intro"));
    RunResult echeck = run("check -", e2.out);
    CHECK(echeck.exit == 0);
}

TEST_CASE("branches lists the worked example's three branches") {
    RunResult r = run("branches " + q(fixture("fig_derivation.proof.json")));
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("branches").size() == 3);
    CHECK(j.at("branches")[0].at("order") == 2);
    CHECK(j.at("branches")[1].at("order") == 1);
    CHECK(j.at("branches")[2].at("order") == 0);
    CHECK(j.at("branches")[2].at("reverseRank") == 2);
}

TEST_CASE("map builds, verifies and rejects") {
    RunResult ok = run("map " + q(fixture("mapped_fig.proof.json")));
    REQUIRE(ok.exit == 0);
    json j = json::parse(ok.out);
    CHECK(j.at("ok") == true);
    CHECK(j.at("epartTypes") == 6);
    REQUIRE(j.contains("map"));
    CHECK(j.at("map").size() == 15);
    CHECK(j.at("tree").at("vertices").size() == 19);

    RunResult vo = run("map --verify-only " + q(fixture("mapped_fig.proof.json")));
    REQUIRE(vo.exit == 0);
    json jv = json::parse(vo.out);
    CHECK_FALSE(jv.contains("map"));
    CHECK_FALSE(jv.contains("tree"));

    // round trip the produced map through --map-file verification
    std::string mapPath = write_file("fig.map.json", j.at("map").dump());
    RunResult verify =
        run("map --map-file " + q(mapPath) + " " + q(fixture("mapped_fig.proof.json")));
    REQUIRE(verify.exit == 0);
    CHECK(json::parse(verify.out).at("ok") == true);

    // tamper with one vertex
    json tampered = j.at("map");
    tampered[1]["vertex"] = 2;
    std::string tamperedPath = write_file("tampered.map.json", tampered.dump());
    RunResult rejected = run("map --map-file " + q(tamperedPath) + " " +
                             q(fixture("mapped_fig.proof.json")));
    CHECK(rejected.exit == 1);
    json jr = json::parse(rejected.out);
    CHECK(jr.at("ok") == false);
    CHECK(!jr.at("violations").empty());

    // the plain figure admits no map
    RunResult fail = run("map " + q(fixture("fig_derivation.proof.json")));
    CHECK(fail.exit == 1);
    json jf = json::parse(fail.out);
    CHECK(jf.at("ok") == false);
    CHECK(jf.at("failure").at("reason").get<std::string>().find("no admissible vertex") !=
          std::string::npos);
    CHECK(jf.at("failure").at("occ") == json::array({"premise", "major"}));
}

TEST_CASE("analyze reports unmet hypotheses on a small proof") {
    RunResult r = run("analyze --p 4 --q 1 " + q(fixture("mapped_fig.proof.json")));
    CHECK(r.exit == 1);
    json j = json::parse(r.out);
    CHECK(j.at("hypothesesMet") == false);
    CHECK(j.at("m") == 19);
    CHECK(j.at("unmetReason").get<std::string>().find("does not exceed") !=
          std::string::npos);
    CHECK(r.err.find("hypotheses unmet") != std::string::npos);

    RunResult oracle =
        run("analyze --p 4 --q 1 --oracle " + q(fixture("mapped_fig.proof.json")));
    json jo = json::parse(oracle.out);
    REQUIRE(jo.contains("oracle"));
    CHECK(jo.at("oracle").at("multiplicity") == 1);
    CHECK(jo.at("oracleAtLeastReport") == true);

    RunResult limited = run("analyze --p 4 --q 1 --oracle " +
                                q(fixture("mapped_fig.proof.json")),
                            "", "MIMP_NODE_LIMIT=10");
    json jl = json::parse(limited.out);
    REQUIRE(jl.contains("oracle"));
    CHECK(jl.at("oracle").contains("skipped"));

    // an unmappable proof cannot be analyzed
    RunResult nomap = run("analyze --p 4 " + q(fixture("fig_derivation.proof.json")));
    CHECK(nomap.exit == 1);
    CHECK(json::parse(nomap.out).at("error").get<std::string>().find(
              "no consistent map") != std::string::npos);

    CHECK(run("analyze " + q(fixture("mapped_fig.proof.json"))).exit == 2);  // --p required
    CHECK(run("analyze --p 4 --case Both " + q(fixture("mapped_fig.proof.json"))).exit ==
          2);
}

TEST_CASE("generate, analyze and compress the blowup member end to end") {
    RunResult gen = run("generate --family blowup --m 4 --p 4 --seed 7");
    REQUIRE(gen.exit == 0);
    json jg = json::parse(gen.out);
    REQUIRE(jg.at("members").size() == 1);
    const json& mem = jg.at("members")[0];
    CHECK(mem.at("depth") == 12);
    CHECK(mem.at("mPrime") == 23);
    CHECK(mem.at("metrics").at("sizeNodes") == 32767);
    CHECK(mem.at("metrics").at("height") == 54);

    std::string proofPath = write_file("blowup44.proof.json", mem.at("proof").dump());
    RunResult an = run("analyze --p 4 --q 1 " + q(proofPath));
    REQUIRE(an.exit == 0);
    json ja = json::parse(an.out);
    CHECK(ja.at("hypothesesMet") == true);
    CHECK(ja.at("found") == true);
    CHECK(ja.at("multiplicity") == 507);
    CHECK(ja.at("level") == 47);
    CHECK(ja.at("caseTag") == "Top");
    CHECK(ja.at("multiplicityThreshold") == 23);

    RunResult cmp = run("compress " + q(proofPath));
    REQUIRE(cmp.exit == 0);
    json status = json::parse(cmp.err);
    CHECK(status.at("treeNodes") == 32767);
    CHECK(status.at("dagNodes") == 56);
    std::string dagPath = write_file("blowup44.dag.json", cmp.out);
    RunResult dec = run("decompress " + q(dagPath));
    REQUIRE(dec.exit == 0);
    json ds = json::parse(dec.err);
    CHECK(ds.at("treeNodes") == 32767);
    RunResult recheck = run("check -", dec.out);
    CHECK(recheck.exit == 0);
}

TEST_CASE("compress round trip on a small file plus corrupt input") {
    RunResult cmp = run("compress " + q(fixture("mapped_fig.proof.json")));
    REQUIRE(cmp.exit == 0);
    json status = json::parse(cmp.err);
    CHECK(status.at("treeNodes") == 15);
    CHECK(status.at("dagNodes").get<int>() <= 15);

    std::string dagPath = write_file("fig.dag.json", cmp.out);
    RunResult dec = run("decompress " + q(dagPath));
    REQUIRE(dec.exit == 0);
    CHECK(run("check -", dec.out).exit == 0);
    // labels may be renumbered, but recompressing reaches the same dag
    RunResult recmp = run("compress -", dec.out);
    REQUIRE(recmp.exit == 0);
    CHECK(json::parse(recmp.out) == json::parse(cmp.out));

    CHECK(run("decompress " + q(write_file("corrupt.json", "{{{"))).exit == 2);
    std::string badDag = write_file(
        "bad.dag.json", R"({"nodes":[{"id":0,"kind":"hyp","formula":"a"}],"root":5})");
    CHECK(run("decompress " + q(badDag)).exit == 2);
}

TEST_CASE("prove settles the classic goals") {
    RunResult k = run("prove \"a -> b -> a\"");
    REQUIRE(k.exit == 0);
    json status = json::parse(k.err);
    CHECK(status.at("status") == "proved");
    CHECK(status.at("proofNodes") == 3);
    RunResult recheck = run("check -", k.out);
    CHECK(recheck.exit == 0);
    json jc = json::parse(recheck.out);
    CHECK(jc.at("conclusion") == "a -> b -> a");
    CHECK(jc.at("closed") == true);

    RunResult peirce = run("prove \"((p -> q) -> p) -> p\"");
    CHECK(peirce.exit == 1);
    json ps = json::parse(peirce.err);
    CHECK(ps.at("status") == "not provable");
    CHECK(ps.at("nodesExplored") == 4);

    RunResult tight = run("prove --budget 1 \"(a -> b -> c) -> (a -> b) -> a -> c\"");
    CHECK(tight.exit == 1);
    CHECK(json::parse(tight.err).at("status") == "budget exceeded");

    CHECK(run("prove \"a ->\"").exit == 2);
}

TEST_CASE("generate random families deterministically") {
    RunResult r = run("generate --family random --n 13 --count 5 --seed 9");
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("formulas").size() == 5);
    RunResult again = run("generate --family random --n 13 --count 5 --seed 9");
    CHECK(again.out == r.out);

    CHECK(run("generate --family nosuch").exit == 2);
    CHECK(run("generate --family blowup --m 2 --p 8").exit == 1);  // infeasible
}

TEST_CASE("fit diagnoses growth from a points file") {
    std::string pts = write_file("quad.points.json", "[[4,16],[5,25],[6,36],[7,49]]");
    RunResult r = run("fit " + q(pts));
    REQUIRE(r.exit == 0);
    json j = json::parse(r.out);
    CHECK(j.at("exponent").get<double>() == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(j.at("verdict").get<std::string>().find("cannot certify") != std::string::npos);

    std::string wrapped = write_file("wrapped.points.json",
                                     R"({"points":[[4,16],[5,25],[6,36]]})");
    CHECK(run("fit " + q(wrapped)).exit == 0);

    CHECK(run("fit " + q(write_file("two.points.json", "[[4,16],[5,25]]"))).exit == 2);
    CHECK(run("fit " + q(write_file("bad.points.json", R"(["x"])"))).exit == 2);
}

} // TEST_SUITE
