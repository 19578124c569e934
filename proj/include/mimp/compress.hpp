// Hash-consed DAG compression of derivations.
//
// Instance-equal subderivations (equal after canonical label renumbering)
// share one node.  Binding across shared nodes is positional: each node
// exposes the sequence of its locally-open hypothesis occurrences in
// preorder, and an intro node lists the slots it captures as indices into
// its premise's sequence.  Expansion regenerates concrete labels, so
// round-tripping preserves derivations up to canonical relabeling.

#pragma once

#include <vector>

#include "mimp/derivation.hpp"

namespace mimp {

struct ProofDag {
    struct Node {
        RuleKind kind = RuleKind::Hyp;
        FormulaPtr formula;     // Hyp only
        FormulaPtr discharged;  // Intro only
        int premise = -1;       // Intro only
        std::vector<int> captures;  // Intro: sorted slot indices, strictly increasing
        int minor = -1, major = -1; // Elim only
    };

    std::vector<Node> nodes;      // ids are indices; children precede parents
    std::vector<int> refcount;    // references from other nodes plus the root
    int root = -1;

    int size() const { return static_cast<int>(nodes.size()); }
};

ProofDag to_dag(const DerivPtr& d);

// Throws std::invalid_argument on malformed input (bad ids, cycles,
// out-of-range or unsorted captures, capture/discharge mismatch).
DerivPtr from_dag(const ProofDag& g);

} // namespace mimp
