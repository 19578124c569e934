// Branches of a derivation.
//
// A branch starts at a top-formula (a Hyp leaf) and moves toward the root:
// from a major premise to the elim's conclusion, or from an intro's premise
// to its conclusion; it ends at the root or at a minor premise.  Every
// occurrence of a derivation lies on exactly one branch.  In a normal
// derivation a branch is an E-part (majors of elims), then the minimal
// formula, then an I-part (intro conclusions).

#pragma once

#include <unordered_map>
#include <vector>

#include "mimp/derivation.hpp"

namespace mimp {

struct Branch {
    std::vector<const Deriv*> elements;  // top first, end last

    const Deriv* top() const { return elements.front(); }
    const Deriv* end() const { return elements.back(); }
};

// One branch per Hyp leaf, ordered by the leaf's preorder index.
std::vector<Branch> enumerate_branches(const ProofView& view);

struct BranchSplit {
    std::vector<const Deriv*> ePart;  // proper E-part, excluding the minimal
    const Deriv* minimal = nullptr;
    std::vector<const Deriv*> iPart;
};

// Throws std::invalid_argument when the branch shows an intro used as a
// major premise (non-normal derivation).
BranchSplit split_branch(const ProofView& view, const Branch& b);

struct BranchAnalysis {
    std::vector<Branch> branches;
    std::unordered_map<const Deriv*, int> branchOf;  // occurrence -> branch index
    std::vector<int> orders;        // principal branch = 0
    std::vector<int> reverseRanks;  // 0 iff the branch holds no elim conclusion
};

BranchAnalysis analyze_branches(const ProofView& view);

// The only E-part-plus-minimal formula sequence an expanded normal branch
// with this top-formula can carry: the right-spine unfolding of `top` down
// to its atomic head.
std::vector<FormulaPtr> epart_from_top(const FormulaPtr& top);

} // namespace mimp
