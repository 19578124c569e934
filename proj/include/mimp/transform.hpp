// Reduction and normal/expanded forms.
//
// A maximal formula is an occurrence that is conclusion of an ⊃-Intro and
// major premise of an ⊃-Elim; a derivation is normal when it has none.  A
// normal derivation is expanded when every minimal formula (see branch.hpp)
// is atomic.

#pragma once

#include <string>
#include <vector>

#include "mimp/derivation.hpp"

namespace mimp {

// The elim node whose major premise is an intro.
struct MaximalFormulaSite {
    OccAddress elim;
    FormulaPtr maximalFormula;  // conclusion of the major premise
};

// Complete list, in preorder of the elim nodes; empty iff d is normal.
std::vector<MaximalFormulaSite> find_maximal_formulas(const DerivPtr& d);

bool is_normal(const DerivPtr& d);

// True when every occurrence that is neither an intro conclusion nor a major
// premise has an atomic formula (all minimal formulas atomic).  Does not
// imply normality by itself.
bool is_expanded(const DerivPtr& d);

// Replaces every Hyp carrying `label` by a fresh copy of `replacement`
// (conclusions must match; std::invalid_argument otherwise).  Each copy gets
// fresh intro labels drawn from *nextLabel.
DerivPtr substitute_hyp(const DerivPtr& d, int label, const DerivPtr& replacement,
                        int& nextLabel);

// One ⊃-reduction at the addressed elim: Elim(Σ, Intro binding φ over Π)
// becomes Π with every hypothesis bound by that intro replaced by a copy of
// Σ.  Throws std::invalid_argument if the address is not a redex.
DerivPtr reduce_step(const DerivPtr& d, const OccAddress& site);

struct NormalizeStep {
    int index = 0;  // 0-based reduction counter
    OccAddress site;
    FormulaPtr maximalFormula;
    int nodesBefore = 0;
    int nodesAfter = 0;
};

struct NormalizeResult {
    DerivPtr result;
    int steps = 0;
    std::vector<NormalizeStep> trace;
};

// Reduces leftmost-innermost (first redex in postorder) until normal.
NormalizeResult normalize(const DerivPtr& d);

// Expanded normal form: peels every non-atomic minimal formula with the
// intro-over-elim rewrite until atomic.  Requires a normal input (throws
// std::invalid_argument); preserves conclusion, open assumptions and
// normality.
DerivPtr expand(const DerivPtr& d);

} // namespace mimp
