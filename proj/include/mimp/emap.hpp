// Mapping proofs onto the syntax tree of their conclusion.
//
// An E-mapped proof carries a partial map from formula occurrences to
// vertices of the conclusion's syntax tree, defined at least on every E-part
// element and every minimal formula, and coherent with the rules: an elim's
// conclusion vertex hangs by a right edge under its major's vertex, with the
// minor on the left sibling; each branch's E-part runs down one right spine;
// and the top of that spine is the vertex reached from the minimal formula's
// vertex by reversing right edges maximally.  The map need not be injective.

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimp/branch.hpp"
#include "mimp/derivation.hpp"
#include "mimp/syntax_tree.hpp"

namespace mimp {

struct EMappedProof {
    DerivPtr proof;
    std::shared_ptr<ProofView> view;
    SyntaxTree tree;  // of the proof's conclusion
    std::unordered_map<const Deriv*, int> map;  // occurrence -> vertex id

    int vertex_of(const Deriv* occ) const;  // throws std::out_of_range if unmapped
    bool mapped(const Deriv* occ) const { return map.count(occ) != 0; }
};

struct EmapFailure {
    std::string reason;
    OccAddress address;  // occurrence at which the constraint became unsatisfiable
};

// A place where no constraint dictated the vertex and the leftmost labeled
// candidate was taken.
struct EmapChoice {
    OccAddress address;
    int vertex = -1;
    std::vector<int> candidates;
};

struct BuildEmapResult {
    std::optional<EMappedProof> mapped;
    std::optional<EmapFailure> failure;
    std::vector<EmapChoice> choices;

    bool ok() const { return mapped.has_value(); }
};

// Deterministic construction.  Requires a normal, expanded derivation
// (std::invalid_argument otherwise); open assumptions are allowed.  Failure
// (no consistent assignment) is a first-class outcome, not an exception.
BuildEmapResult build_emap(const DerivPtr& d);

struct EmapViolation {
    std::string check;  // "label", "epart-coverage", "elim-coherence",
                        // "intro-coherence", "epart-chain", "top-vertex",
                        // "neighborhood"
    std::string detail;
    OccAddress address;
    int vertex = -1;
};

struct EmapReport {
    bool ok = true;
    std::vector<EmapViolation> violations;
};

// Re-checks every bullet of the mapping definitions against e.proof.
EmapReport verify_emap(const EMappedProof& e);

// Vertex path image of the branch's E-part plus minimal formula; throws
// std::invalid_argument when the branch's minimal is unmapped.
std::vector<int> epart_path(const EMappedProof& e, const Branch& b);

// Number of distinct vertex paths realized by E-parts; ≤ tree size.
int count_epart_types(const EMappedProof& e);

} // namespace mimp
