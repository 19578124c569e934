// mimp: command-line front end for the minimal implicational proof library.
//
// Artifact verbs (normalize, expand, compress, decompress, prove) print a
// single JSON artifact on stdout and a one-line JSON status object on
// stderr, so they pipe into each other.  Report verbs (parse, check,
// branches, map, analyze, generate, fit) print a report that embeds the
// tool version and a full parameter echo.
//
// Exit codes: 0 success, 1 domain failure (check violations, not provable,
// unmet hypotheses, no consistent map), 2 usage or format error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimp/branch.hpp"
#include "mimp/compress.hpp"
#include "mimp/derivation.hpp"
#include "mimp/emap.hpp"
#include "mimp/formula.hpp"
#include "mimp/json_io.hpp"
#include "mimp/prover.hpp"
#include "mimp/redundancy.hpp"
#include "mimp/syntax_tree.hpp"
#include "mimp/transform.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kOk = 0, kDomain = 1, kUsage = 2;

using nlohmann::json;
using namespace mimp;

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_all(path));
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("not valid JSON: ") + e.what(), path);
    }
}

void emit_stdout(const json& j) { std::cout << j.dump(2) << "\n"; }
void emit_stderr(const json& j) { std::cerr << j.dump() << "\n"; }

// Text rendering of a report: scalars verbatim, containers summarized.
void print_text(const json& j, std::ostream& os, const std::string& prefix = "") {
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            os << prefix << key << ":\n";
            print_text(value, os, prefix + "  ");
        } else if (value.is_array()) {
            bool scalarOnly = true;
            for (const auto& el : value)
                if (el.is_object() || el.is_array()) scalarOnly = false;
            if (scalarOnly && value.size() <= 16) {
                os << prefix << key << ": " << value.dump() << "\n";
            } else {
                os << prefix << key << ": [" << value.size() << " entries]\n";
            }
        } else {
            os << prefix << key << ": "
               << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
}

void emit_report(const json& j, const std::string& format) {
    if (format == "text")
        print_text(j, std::cout);
    else
        emit_stdout(j);
}

json violations_json(const std::vector<Violation>& vs) {
    json arr = json::array();
    for (const Violation& v : vs)
        arr.push_back({{"where", address_to_string(v.where)}, {"reason", v.reason}});
    return arr;
}

json metrics_json(const DerivPtr& d) {
    Metrics m = metrics(d);
    return {{"sizeSymbols", m.sizeSymbols}, {"sizeNodes", m.sizeNodes}, {"height", m.height}};
}

int run_parse(const std::string& text, bool withTree, const std::string& format) {
    FormulaPtr f = parse_formula(text);
    json rep{{"version", kVersion},
             {"command", "parse"},
             {"params", {{"formula", text}, {"tree", withTree}}},
             {"formula", print_formula(f)},
             {"nodes", f->node_count()},
             {"tokens", f->token_count()},
             {"printLength", f->print_length()}};
    if (withTree) rep["tree"] = tree_to_json(build_syntax_tree(f));
    emit_report(rep, format);
    return kOk;
}

int run_check(const std::string& path, const std::string& format) {
    DerivPtr d = proof_from_json(read_json(path));
    CheckReport cr = check_derivation(d);
    json rep{{"version", kVersion},
             {"command", "check"},
             {"params", {{"input", path}}},
             {"ok", cr.ok},
             {"violations", violations_json(cr.violations)},
             {"conclusion", print_formula(d->conclusion())},
             {"metrics", metrics_json(d)}};
    if (cr.ok) {
        json open = json::array();
        for (const FormulaPtr& f : open_assumptions(d)) open.push_back(print_formula(f));
        rep["open"] = std::move(open);
        rep["closed"] = is_closed(d);
        rep["normal"] = is_normal(d);
        rep["expanded"] = is_expanded(d);
    }
    emit_report(rep, format);
    return cr.ok ? kOk : kDomain;
}

int run_normalize(const std::string& path, bool trace) {
    DerivPtr d = proof_from_json(read_json(path));
    NormalizeResult r = normalize(d);
    json status{{"steps", r.steps},
                {"nodesBefore", d->node_count()},
                {"nodesAfter", r.result->node_count()}};
    if (trace) {
        json tr = json::array();
        for (const NormalizeStep& s : r.trace)
            tr.push_back({{"index", s.index},
                          {"site", address_to_string(s.site)},
                          {"maximalFormula", print_formula(s.maximalFormula)},
                          {"nodesBefore", s.nodesBefore},
                          {"nodesAfter", s.nodesAfter}});
        status["trace"] = std::move(tr);
    }
    emit_stdout(proof_to_json(r.result));
    emit_stderr(status);
    return kOk;
}

int run_expand(const std::string& path, bool trace) {
    DerivPtr d = proof_from_json(read_json(path));
    if (!is_normal(d)) {
        emit_stderr({{"error", "input derivation is not normal; normalize it first"}});
        return kDomain;
    }
    DerivPtr r = expand(d);
    json status{{"nodesBefore", d->node_count()}, {"nodesAfter", r->node_count()}};
    if (trace)
        status["heightBefore"] = d->height(), status["heightAfter"] = r->height();
    emit_stdout(proof_to_json(r));
    emit_stderr(status);
    return kOk;
}

int run_branches(const std::string& path, const std::string& format) {
    DerivPtr d = proof_from_json(read_json(path));
    ProofView view(d);
    BranchAnalysis ba = analyze_branches(view);
    json rep{{"version", kVersion},
             {"command", "branches"},
             {"params", {{"input", path}}},
             {"count", ba.branches.size()}};
    json arr = json::array();
    for (std::size_t i = 0; i < ba.branches.size(); ++i) {
        const Branch& b = ba.branches[i];
        json el = json::array(), forms = json::array();
        for (const Deriv* n : b.elements) {
            el.push_back(address_to_string(view.address_of(n)));
            forms.push_back(print_formula(n->conclusion()));
        }
        json jb{{"top", address_to_string(view.address_of(b.top()))},
                {"end", address_to_string(view.address_of(b.end()))},
                {"elements", std::move(el)},
                {"formulas", std::move(forms)},
                {"order", ba.orders[i]},
                {"reverseRank", ba.reverseRanks[i]}};
        try {
            BranchSplit s = split_branch(view, b);
            json ep = json::array(), ip = json::array();
            for (const Deriv* n : s.ePart) ep.push_back(print_formula(n->conclusion()));
            for (const Deriv* n : s.iPart) ip.push_back(print_formula(n->conclusion()));
            jb["ePart"] = std::move(ep);
            jb["minimal"] = print_formula(s.minimal->conclusion());
            jb["iPart"] = std::move(ip);
        } catch (const std::invalid_argument& e) {
            jb["splitError"] = e.what();
        }
        arr.push_back(std::move(jb));
    }
    rep["branches"] = std::move(arr);
    emit_report(rep, format);
    return kOk;
}

json choice_json(const EmapChoice& c) {
    return {{"occ", address_to_json(c.address)},
            {"vertex", c.vertex},
            {"candidates", c.candidates}};
}

int run_map(const std::string& path, bool verifyOnly, const std::string& mapFile,
            const std::string& format) {
    DerivPtr d = proof_from_json(read_json(path));
    json rep{{"version", kVersion},
             {"command", "map"},
             {"params",
              {{"input", path}, {"verifyOnly", verifyOnly}, {"mapFile", mapFile}}}};

    if (!mapFile.empty()) {
        EMappedProof e;
        e.proof = d;
        e.view = std::make_shared<ProofView>(d);
        e.tree = build_syntax_tree(d->conclusion());
        e.map = map_from_json(*e.view, read_json(mapFile));
        EmapReport vr = verify_emap(e);
        rep["ok"] = vr.ok;
        json viol = json::array();
        for (const EmapViolation& v : vr.violations)
            viol.push_back({{"check", v.check},
                            {"detail", v.detail},
                            {"occ", address_to_json(v.address)},
                            {"vertex", v.vertex}});
        rep["violations"] = std::move(viol);
        emit_report(rep, format);
        return vr.ok ? kOk : kDomain;
    }

    if (!is_normal(d) || !is_expanded(d)) {
        rep["ok"] = false;
        rep["failure"] = {{"reason", "derivation must be normal and expanded"}};
        emit_report(rep, format);
        return kDomain;
    }
    BuildEmapResult r = build_emap(d);
    json choices = json::array();
    for (const EmapChoice& c : r.choices) choices.push_back(choice_json(c));
    rep["choices"] = std::move(choices);
    if (!r.ok()) {
        rep["ok"] = false;
        rep["failure"] = {{"reason", r.failure->reason},
                          {"occ", address_to_json(r.failure->address)}};
        emit_report(rep, format);
        return kDomain;
    }
    rep["ok"] = true;
    rep["epartTypes"] = count_epart_types(*r.mapped);
    if (!verifyOnly) {
        rep["tree"] = tree_to_json(r.mapped->tree);
        rep["map"] = map_to_json(*r.mapped);
    }
    emit_report(rep, format);
    return kOk;
}

int run_analyze(const std::string& path, int p, int q, int heightCoeff,
                const std::string& caseFilter, bool oracle, bool perLevel, int jobs,
                const std::string& format) {
    (void)jobs;  // accepted for interface stability; scanning is serial
    DerivPtr d = proof_from_json(read_json(path));
    json rep{{"version", kVersion},
             {"command", "analyze"},
             {"params",
              {{"input", path},
               {"p", p},
               {"q", q},
               {"heightCoeff", heightCoeff},
               {"case", caseFilter},
               {"oracle", oracle},
               {"perLevel", perLevel},
               {"jobs", jobs}}}};

    if (!is_normal(d) || !is_expanded(d)) {
        rep["error"] = "derivation must be normal and expanded";
        emit_report(rep, format);
        return kDomain;
    }
    BuildEmapResult r = build_emap(d);
    if (!r.ok()) {
        rep["error"] = "no consistent map: " + r.failure->reason;
        emit_report(rep, format);
        return kDomain;
    }

    RedundancyReport rr = find_redundant(*r.mapped, p, q, heightCoeff, caseFilter);
    rep["m"] = rr.m;
    rep["sizeThreshold"] = rr.sizeThreshold;
    rep["heightBound"] = rr.heightBound;
    rep["multiplicityThreshold"] = rr.multiplicityThreshold;
    rep["hypothesesMet"] = rr.hypothesesMet;
    if (!rr.hypothesesMet) rep["unmetReason"] = rr.unmetReason;
    rep["found"] = rr.found;
    rep["notes"] = rr.notes;
    if (rr.subderivation) {
        rep["multiplicity"] = rr.multiplicity;
        rep["level"] = rr.level;
        rep["cellVertex"] = rr.cellVertex;
        rep["cellLevel"] = rr.cellLevel;
        rep["caseTag"] = rr.caseTag;
        rep["subderivation"] = proof_to_json(rr.subderivation);
        rep["subderivationNodes"] = rr.subderivation->node_count();
    }

    if (oracle) {
        int limit = 5000;
        if (const char* env = std::getenv("MIMP_NODE_LIMIT")) limit = std::atoi(env);
        try {
            BruteForceResult br = brute_force_max_repeats(d, perLevel, limit);
            rep["oracle"] = {{"multiplicity", br.multiplicity},
                             {"level", br.level},
                             {"sizeNodes", br.sizeNodes},
                             {"subderivation", proof_to_json(br.subderivation)}};
            if (rr.subderivation)
                rep["oracleAtLeastReport"] =
                    static_cast<long long>(br.multiplicity) >= rr.multiplicity;
        } catch (const std::invalid_argument& e) {
            rep["oracle"] = {{"skipped", e.what()}};
        }
    }

    emit_report(rep, format);
    if (!rr.hypothesesMet) std::cerr << "hypotheses unmet: " << rr.unmetReason << "\n";
    return (rr.hypothesesMet && rr.found) ? kOk : kDomain;
}

int run_compress(const std::string& path) {
    DerivPtr d = proof_from_json(read_json(path));
    ProofDag g = to_dag(d);
    emit_stdout(dag_to_json(g));
    emit_stderr({{"treeNodes", d->node_count()},
                 {"dagNodes", g.size()},
                 {"ratio", d->node_count() > 0
                               ? static_cast<double>(g.size()) / d->node_count()
                               : 0.0}});
    return kOk;
}

int run_decompress(const std::string& path) {
    ProofDag g = dag_from_json(read_json(path));
    DerivPtr d = from_dag(g);
    emit_stdout(proof_to_json(d));
    emit_stderr({{"dagNodes", g.size()}, {"treeNodes", d->node_count()}});
    return kOk;
}

int run_prove(const std::string& text, long long budget) {
    FormulaPtr goal = parse_formula(text);
    ProverResult r = decide_and_prove(goal, budget);
    switch (r.status) {
        case ProverStatus::Proved: {
            emit_stdout(proof_to_json(r.proof));
            emit_stderr({{"status", "proved"},
                         {"nodesExplored", r.nodesExplored},
                         {"proofNodes", r.proof->node_count()}});
            return kOk;
        }
        case ProverStatus::NotProvable:
            emit_stderr({{"status", "not provable"}, {"nodesExplored", r.nodesExplored}});
            return kDomain;
        case ProverStatus::BudgetExceeded:
            emit_stderr(
                {{"status", "budget exceeded"}, {"nodesExplored", r.nodesExplored}});
            return kDomain;
    }
    return kUsage;
}

int run_generate(const std::string& family, int m, int p, int q, std::uint64_t seed,
                 int heightCoeff, int n, int count, const std::string& format) {
    json rep{{"version", kVersion}, {"command", "generate"}};
    if (family == "blowup") {
        rep["params"] = {{"family", family}, {"m", m},       {"p", p},
                         {"q", q},           {"seed", seed}, {"heightCoeff", heightCoeff}};
        FamilySpec spec;
        spec.family = family;
        spec.m = m;
        spec.p = p;
        spec.q = q;
        spec.seed = seed;
        spec.heightCoeff = heightCoeff;
        std::vector<FamilyMember> members = gen_redundant_family(spec);
        json arr = json::array();
        for (const FamilyMember& mem : members)
            arr.push_back({{"formula", print_formula(mem.formula)},
                           {"depth", mem.depth},
                           {"mPrime", mem.mPrime},
                           {"metrics", metrics_json(mem.proof)},
                           {"proof", proof_to_json(mem.proof)}});
        rep["members"] = std::move(arr);
    } else if (family == "random") {
        rep["params"] = {{"family", family}, {"n", n}, {"count", count}, {"seed", seed}};
        json arr = json::array();
        for (const FormulaPtr& f : gen_random_formulas(n, count, seed))
            arr.push_back(print_formula(f));
        rep["formulas"] = std::move(arr);
    } else {
        throw CLI::ValidationError("--family", "unknown family: " + family);
    }
    emit_report(rep, format);
    return kOk;
}

int run_fit(const std::string& path, const std::string& format) {
    json j = read_json(path);
    const json* arr = &j;
    if (j.is_object() && j.contains("points")) arr = &j["points"];
    if (!arr->is_array()) throw FormatError("expected an array of [m, size] pairs", path);
    std::vector<std::pair<double, double>> pts;
    for (const json& el : *arr) {
        if (!el.is_array() || el.size() != 2 || !el[0].is_number() || !el[1].is_number())
            throw FormatError("expected an array of [m, size] pairs", path);
        pts.emplace_back(el[0].get<double>(), el[1].get<double>());
    }
    GrowthFit g = growth_fit(pts);
    json jp = json::array();
    for (const auto& [x, y] : g.points) jp.push_back({x, y});
    json rep{{"version", kVersion},
             {"command", "fit"},
             {"params", {{"input", path}}},
             {"points", std::move(jp)},
             {"exponent", g.exponent},
             {"constant", g.constant},
             {"windowSlopes", g.windowSlopes},
             {"verdict", g.verdict}};
    emit_report(rep, format);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal implicational natural deduction toolkit"};
    app.require_subcommand(1);
    std::string format = "json";
    app.add_option("--format", format, "output format for reports")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    std::string inPath, formulaText, mapFile, caseFilter, family = "blowup";
    bool withTree = false, trace = false, verifyOnly = false, oracle = false,
         perLevel = false;
    int p = 4, q = 1, heightCoeff = 4, jobs = 1, m = 3, n = 30, count = 10;
    long long budget = 200000;
    std::uint64_t seed = 0;

    CLI::App* cParse = app.add_subcommand("parse", "parse a formula and report its shape");
    cParse->add_option("formula", formulaText, "formula text, e.g. \"a -> b -> a\"")
        ->required();
    cParse->add_flag("--tree", withTree, "include the conclusion syntax tree");

    CLI::App* cCheck = app.add_subcommand("check", "validate a derivation file");
    cCheck->add_option("input", inPath, "proof JSON file (- for stdin)")->required();

    CLI::App* cNorm = app.add_subcommand("normalize", "reduce to normal form");
    cNorm->add_option("input", inPath, "proof JSON file (- for stdin)")->required();
    cNorm->add_flag("--trace", trace, "log each reduction step to stderr");

    CLI::App* cExp = app.add_subcommand("expand", "rewrite into expanded normal form");
    cExp->add_option("input", inPath, "proof JSON file (- for stdin)")->required();
    cExp->add_flag("--trace", trace, "log size and height changes to stderr");

    CLI::App* cBr = app.add_subcommand("branches", "enumerate branches with orders and ranks");
    cBr->add_option("input", inPath, "proof JSON file (- for stdin)")->required();

    CLI::App* cMap = app.add_subcommand("map", "map a normal expanded proof onto its "
                                               "conclusion's syntax tree");
    cMap->add_option("input", inPath, "proof JSON file (- for stdin)")->required();
    cMap->add_flag("--verify-only", verifyOnly, "report verification outcome without the map");
    cMap->add_option("--map-file", mapFile, "verify this serialized map instead of building");

    CLI::App* cAn = app.add_subcommand("analyze", "search for repeated subderivations");
    cAn->add_option("input", inPath, "proof JSON file (- for stdin)")->required();
    cAn->add_option("--p", p, "size exponent")->required();
    cAn->add_option("--q", q, "height exponent")->capture_default_str();
    cAn->add_option("--height-coeff", heightCoeff, "height bound coefficient")
        ->capture_default_str();
    cAn->add_option("--case", caseFilter, "restrict to Top, Uno or Duo")
        ->check(CLI::IsMember({"Top", "Uno", "Duo"}));
    cAn->add_flag("--oracle", oracle, "run the brute-force counter for comparison");
    cAn->add_flag("--per-level", perLevel, "oracle counts per level instead of overall");
    cAn->add_option("--jobs", jobs, "worker count (accepted; scanning is serial)")
        ->check(CLI::PositiveNumber);

    CLI::App* cCmp = app.add_subcommand("compress", "hash-cons a proof into a dag");
    cCmp->add_option("input", inPath, "proof JSON file (- for stdin)")->required();

    CLI::App* cDec = app.add_subcommand("decompress", "rebuild the tree derivation of a dag");
    cDec->add_option("input", inPath, "dag JSON file (- for stdin)")->required();

    CLI::App* cProve = app.add_subcommand("prove", "decide provability and emit a proof");
    cProve->add_option("formula", formulaText, "goal formula")->required();
    cProve->add_option("--budget", budget, "search call budget")->capture_default_str();

    CLI::App* cGen = app.add_subcommand("generate", "emit proof families or random formulas");
    cGen->add_option("--family", family, "blowup or random")->capture_default_str();
    cGen->add_option("--m", m, "family parameter")->capture_default_str();
    cGen->add_option("--p", p, "size exponent")->capture_default_str();
    cGen->add_option("--q", q, "height exponent")->capture_default_str();
    cGen->add_option("--seed", seed, "rng seed")->capture_default_str();
    cGen->add_option("--height-coeff", heightCoeff, "height bound coefficient")
        ->capture_default_str();
    cGen->add_option("--n", n, "random formula size bound")->capture_default_str();
    cGen->add_option("--count", count, "random formula count")->capture_default_str();

    CLI::App* cFit = app.add_subcommand("fit", "log-log growth fit over (m, size) points");
    cFit->add_option("input", inPath, "JSON array of [m, size] pairs (- for stdin)")
        ->required();

    for (CLI::App* sc : {cParse, cCheck, cNorm, cExp, cBr, cMap, cAn, cCmp, cDec, cProve,
                         cGen, cFit})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*cParse) return run_parse(formulaText, withTree, format);
        if (*cCheck) return run_check(inPath, format);
        if (*cNorm) return run_normalize(inPath, trace);
        if (*cExp) return run_expand(inPath, trace);
        if (*cBr) return run_branches(inPath, format);
        if (*cMap) return run_map(inPath, verifyOnly, mapFile, format);
        if (*cAn)
            return run_analyze(inPath, p, q, heightCoeff, caseFilter, oracle, perLevel,
                               jobs, format);
        if (*cCmp) return run_compress(inPath);
        if (*cDec) return run_decompress(inPath);
        if (*cProve) return run_prove(formulaText, budget);
        if (*cGen) return run_generate(family, m, p, q, seed, heightCoeff, n, count, format);
        if (*cFit) return run_fit(inPath, format);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const FamilyInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
