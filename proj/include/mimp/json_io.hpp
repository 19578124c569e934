// JSON wire formats.
//
// Proof:  {"hyp":{"formula":"A","label":1}}            (label omitted when 0)
//         {"intro":{"label":1,"discharged":"A","premise":...}}
//         {"elim":{"minor":...,"major":...}}
//   Conclusions are recomputed on load; a stored "conclusion" field is
//   verified if present.
// Tree:   {"vertices":[{"id":0,"label":"A -> C","left":1,"right":2},...],"root":0}
//   Leaves omit left/right.
// Map:    [{"occ":["minor","major"],"vertex":3},...] ordered by occurrence
//   preorder.
// Dag:    {"nodes":[{"id":0,"kind":"hyp","formula":"A"},
//                   {"id":1,"kind":"intro","discharged":"A","premise":0,"captures":[0]},
//                   {"id":2,"kind":"elim","minor":0,"major":1}],"root":2}

#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "mimp/compress.hpp"
#include "mimp/derivation.hpp"
#include "mimp/emap.hpp"
#include "mimp/syntax_tree.hpp"

namespace mimp {

struct FormatError : std::runtime_error {
    FormatError(const std::string& what, std::string where)
        : std::runtime_error(what + " (at " + where + ")"), path(std::move(where)) {}
    std::string path;
};

nlohmann::json proof_to_json(const DerivPtr& d);
DerivPtr proof_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const SyntaxTree& t);
SyntaxTree tree_from_json(const nlohmann::json& j);

nlohmann::json address_to_json(const OccAddress& a);
OccAddress address_from_json(const nlohmann::json& j);

nlohmann::json map_to_json(const EMappedProof& e);
// Resolves the serialized addresses against view's derivation.
std::unordered_map<const Deriv*, int> map_from_json(const ProofView& view,
                                                    const nlohmann::json& j);

nlohmann::json dag_to_json(const ProofDag& g);
ProofDag dag_from_json(const nlohmann::json& j);

} // namespace mimp
