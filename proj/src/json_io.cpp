#include "mimp/json_io.hpp"

#include <algorithm>

namespace mimp {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what, const std::string& where) {
    throw FormatError(what, where);
}

const json& field(const json& j, const char* name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) bad(std::string("missing field \"") + name + "\"", where);
    return *it;
}

int int_field(const json& j, const char* name, const std::string& where) {
    const json& v = field(j, name, where);
    if (!v.is_number_integer()) bad(std::string("field \"") + name + "\" is not an integer",
                                    where);
    return v.get<int>();
}

std::string str_field(const json& j, const char* name, const std::string& where) {
    const json& v = field(j, name, where);
    if (!v.is_string()) bad(std::string("field \"") + name + "\" is not a string", where);
    return v.get<std::string>();
}

FormulaPtr formula_field(const json& j, const char* name, const std::string& where) {
    try {
        return parse_formula(str_field(j, name, where));
    } catch (const ParseError& pe) {
        bad(std::string("bad formula in \"") + name + "\": " + pe.what(), where);
    }
}

json proof_rec(const DerivPtr& d) {
    switch (d->kind()) {
        case RuleKind::Hyp: {
            json h;
            h["formula"] = print_formula(d->conclusion());
            if (d->label() != 0) h["label"] = d->label();
            return json{{"hyp", std::move(h)}};
        }
        case RuleKind::Intro:
            return json{{"intro",
                         {{"label", d->label()},
                          {"discharged", print_formula(d->discharged())},
                          {"premise", proof_rec(d->premise())}}}};
        case RuleKind::Elim:
            return json{{"elim",
                         {{"minor", proof_rec(d->minor())},
                          {"major", proof_rec(d->major())}}}};
    }
    throw std::logic_error("proof_rec: bad kind");
}

DerivPtr proof_parse(const json& j, const std::string& where) {
    if (!j.is_object() || j.size() != 1)
        bad("derivation node must be an object with exactly one of \"hyp\", \"intro\", "
            "\"elim\"",
            where);
    const auto it0 = j.begin();
    const std::string key = it0.key();
    const json& body = it0.value();
    if (!body.is_object()) bad("rule body is not an object", where);

    DerivPtr result;
    if (key == "hyp") {
        int label = 0;
        if (body.contains("label")) label = int_field(body, "label", where);
        if (label < 0) bad("negative hypothesis label", where);
        result = Deriv::hyp(formula_field(body, "formula", where), label);
    } else if (key == "intro") {
        int label = int_field(body, "label", where);
        if (label <= 0) bad("intro label must be positive", where);
        FormulaPtr discharged = formula_field(body, "discharged", where);
        DerivPtr premise = proof_parse(field(body, "premise", where), where + ".premise");
        result = Deriv::intro(label, std::move(discharged), std::move(premise));
    } else if (key == "elim") {
        DerivPtr minor = proof_parse(field(body, "minor", where), where + ".minor");
        DerivPtr major = proof_parse(field(body, "major", where), where + ".major");
        try {
            result = Deriv::elim(std::move(minor), std::move(major));
        } catch (const std::invalid_argument& e) {
            bad(e.what(), where);
        }
    } else {
        bad("unknown rule \"" + key + "\"", where);
    }

    if (body.contains("conclusion")) {
        FormulaPtr stored = formula_field(body, "conclusion", where);
        if (!formula_equal(stored, result->conclusion()))
            bad("stored conclusion " + print_formula(stored) +
                    " does not match the computed " + print_formula(result->conclusion()),
                where);
    }
    return result;
}

} // namespace

json proof_to_json(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("proof_to_json: null derivation");
    return proof_rec(d);
}

DerivPtr proof_from_json(const json& j) { return proof_parse(j, "$"); }

json tree_to_json(const SyntaxTree& t) {
    json verts = json::array();
    for (int id = 0; id < t.size(); ++id) {
        const SyntaxTree::Vertex& v = t.at(id);
        json jv{{"id", id}, {"label", print_formula(v.label)}};
        if (v.left >= 0) jv["left"] = v.left;
        if (v.right >= 0) jv["right"] = v.right;
        verts.push_back(std::move(jv));
    }
    return json{{"vertices", std::move(verts)}, {"root", t.root}};
}

SyntaxTree tree_from_json(const json& j) {
    const std::string where = "$";
    if (!j.is_object()) bad("tree must be an object", where);
    const json& verts = field(j, "vertices", where);
    if (!verts.is_array() || verts.empty()) bad("\"vertices\" must be a non-empty array",
                                                where);
    SyntaxTree t;
    t.vertices.resize(verts.size());
    std::vector<bool> seen(verts.size(), false);
    const int n = static_cast<int>(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const std::string vw = "$.vertices[" + std::to_string(i) + "]";
        const json& jv = verts[i];
        if (!jv.is_object()) bad("vertex is not an object", vw);
        int id = int_field(jv, "id", vw);
        if (id < 0 || id >= n) bad("vertex id out of range", vw);
        if (seen[static_cast<std::size_t>(id)]) bad("duplicate vertex id", vw);
        seen[static_cast<std::size_t>(id)] = true;
        SyntaxTree::Vertex& v = t.vertices[static_cast<std::size_t>(id)];
        v.label = formula_field(jv, "label", vw);
        if (jv.contains("left")) v.left = int_field(jv, "left", vw);
        if (jv.contains("right")) v.right = int_field(jv, "right", vw);
        if ((v.left < 0) != (v.right < 0)) bad("vertex must have both children or none", vw);
        if (v.left >= n || v.right >= n) bad("child id out of range", vw);
    }
    t.root = int_field(j, "root", where);
    if (t.root < 0 || t.root >= n) bad("root id out of range", where);
    for (int id = 0; id < n; ++id) {
        const SyntaxTree::Vertex& v = t.vertices[static_cast<std::size_t>(id)];
        if (v.left >= 0) {
            SyntaxTree::Vertex& l = t.vertices[static_cast<std::size_t>(v.left)];
            SyntaxTree::Vertex& r = t.vertices[static_cast<std::size_t>(v.right)];
            if (v.left == v.right || l.parent != -1 || r.parent != -1)
                bad("vertex has several parents", "$");
            l.parent = id;
            r.parent = id;
        }
    }
    if (t.at(t.root).parent != -1) bad("root has a parent", "$");
    return t;
}

json address_to_json(const OccAddress& a) {
    json arr = json::array();
    for (Step s : a) switch (s) {
            case Step::Premise: arr.push_back("premise"); break;
            case Step::Minor: arr.push_back("minor"); break;
            case Step::Major: arr.push_back("major"); break;
        }
    return arr;
}

OccAddress address_from_json(const json& j) {
    if (!j.is_array()) bad("address must be an array", "$");
    OccAddress a;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& s = j[i];
        const std::string where = "$[" + std::to_string(i) + "]";
        if (!s.is_string()) bad("address step is not a string", where);
        const std::string step = s.get<std::string>();
        if (step == "premise")
            a.push_back(Step::Premise);
        else if (step == "minor")
            a.push_back(Step::Minor);
        else if (step == "major")
            a.push_back(Step::Major);
        else
            bad("unknown address step \"" + step + "\"", where);
    }
    return a;
}

json map_to_json(const EMappedProof& e) {
    if (!e.view) throw std::invalid_argument("map_to_json: empty mapped proof");
    json arr = json::array();
    for (const Deriv* n : e.view->preorder()) {
        auto it = e.map.find(n);
        if (it == e.map.end()) continue;
        arr.push_back(json{{"occ", address_to_json(e.view->address_of(n))},
                           {"vertex", it->second}});
    }
    return arr;
}

std::unordered_map<const Deriv*, int> map_from_json(const ProofView& view, const json& j) {
    if (!j.is_array()) bad("map must be an array", "$");
    std::unordered_map<const Deriv*, int> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "$[" + std::to_string(i) + "]";
        const json& entry = j[i];
        if (!entry.is_object()) bad("map entry is not an object", where);
        OccAddress a = address_from_json(field(entry, "occ", where));
        const Deriv* n = nullptr;
        try {
            n = view.resolve(a);
        } catch (const std::out_of_range&) {
            bad("address " + address_to_string(a) + " does not resolve", where);
        }
        int v = int_field(entry, "vertex", where);
        auto [it, fresh] = out.emplace(n, v);
        if (!fresh && it->second != v) bad("occurrence mapped twice inconsistently", where);
    }
    return out;
}

json dag_to_json(const ProofDag& g) {
    json nodes = json::array();
    for (int id = 0; id < g.size(); ++id) {
        const ProofDag::Node& n = g.nodes[static_cast<std::size_t>(id)];
        json jn{{"id", id}};
        switch (n.kind) {
            case RuleKind::Hyp:
                jn["kind"] = "hyp";
                jn["formula"] = print_formula(n.formula);
                break;
            case RuleKind::Intro:
                jn["kind"] = "intro";
                jn["discharged"] = print_formula(n.discharged);
                jn["premise"] = n.premise;
                jn["captures"] = n.captures;
                break;
            case RuleKind::Elim:
                jn["kind"] = "elim";
                jn["minor"] = n.minor;
                jn["major"] = n.major;
                break;
        }
        nodes.push_back(std::move(jn));
    }
    return json{{"nodes", std::move(nodes)}, {"root", g.root}};
}

ProofDag dag_from_json(const json& j) {
    const std::string where = "$";
    if (!j.is_object()) bad("dag must be an object", where);
    const json& nodes = field(j, "nodes", where);
    if (!nodes.is_array() || nodes.empty()) bad("\"nodes\" must be a non-empty array", where);
    ProofDag g;
    g.nodes.resize(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    const int n = static_cast<int>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string nw = "$.nodes[" + std::to_string(i) + "]";
        const json& jn = nodes[i];
        if (!jn.is_object()) bad("node is not an object", nw);
        int id = int_field(jn, "id", nw);
        if (id < 0 || id >= n) bad("node id out of range", nw);
        if (seen[static_cast<std::size_t>(id)]) bad("duplicate node id", nw);
        seen[static_cast<std::size_t>(id)] = true;
        ProofDag::Node& node = g.nodes[static_cast<std::size_t>(id)];
        const std::string kind = str_field(jn, "kind", nw);
        if (kind == "hyp") {
            node.kind = RuleKind::Hyp;
            node.formula = formula_field(jn, "formula", nw);
        } else if (kind == "intro") {
            node.kind = RuleKind::Intro;
            node.discharged = formula_field(jn, "discharged", nw);
            node.premise = int_field(jn, "premise", nw);
            const json& caps = field(jn, "captures", nw);
            if (!caps.is_array()) bad("\"captures\" is not an array", nw);
            for (const json& c : caps) {
                if (!c.is_number_integer()) bad("capture index is not an integer", nw);
                node.captures.push_back(c.get<int>());
            }
        } else if (kind == "elim") {
            node.kind = RuleKind::Elim;
            node.minor = int_field(jn, "minor", nw);
            node.major = int_field(jn, "major", nw);
        } else {
            bad("unknown node kind \"" + kind + "\"", nw);
        }
    }
    g.root = int_field(j, "root", where);
    g.refcount.assign(g.nodes.size(), 0);
    for (const ProofDag::Node& node : g.nodes) {
        switch (node.kind) {
            case RuleKind::Hyp: break;
            case RuleKind::Intro:
                if (node.premise >= 0 && node.premise < n)
                    ++g.refcount[static_cast<std::size_t>(node.premise)];
                break;
            case RuleKind::Elim:
                if (node.minor >= 0 && node.minor < n)
                    ++g.refcount[static_cast<std::size_t>(node.minor)];
                if (node.major >= 0 && node.major < n)
                    ++g.refcount[static_cast<std::size_t>(node.major)];
                break;
        }
    }
    if (g.root >= 0 && g.root < n) ++g.refcount[static_cast<std::size_t>(g.root)];
    return g;
}

} // namespace mimp
