// Shared randomized corpus for the test binaries: prover-produced proofs,
// copies with planted redexes, their normalized and expanded forms, and
// eta-long forms of random hypotheses.  Built once per process.
#pragma once

#include <random>
#include <vector>

#include "mimp/derivation.hpp"
#include "mimp/formula.hpp"

namespace testutil {

using namespace mimp;

struct Corpus {
    std::vector<FormulaPtr> provable;  // goals (<= 30 printed symbols) settled positively
    std::vector<DerivPtr> proofs;      // prover output, one per goal
    std::vector<DerivPtr> planted;     // >= 1000 copies with planted redexes
    std::vector<DerivPtr> normalized;  // normalize(planted[i]).result
    std::vector<DerivPtr> expanded;    // expand(normalized[i])
    std::vector<DerivPtr> etaForms;    // expand(hyp(f)) for random f
};

const Corpus& corpus();

// Rebuilds d with the subtree at `addr` replaced.
DerivPtr replace_at(const DerivPtr& d, const OccAddress& addr, const DerivPtr& repl);

// Wraps a random subtree into a freshly built redex (identity application or
// vacuous discharge), preserving the conclusion.
DerivPtr plant_redex(const DerivPtr& d, std::mt19937_64& rng);

// Every formula occurring in d is a subformula of the conclusion or of an
// open assumption.  Checked against a locally computed subformula closure.
bool subformula_principle_holds(const DerivPtr& d);

bool formula_subset(const std::vector<FormulaPtr>& a, const std::vector<FormulaPtr>& b);

} // namespace testutil
