// Decision procedure and proof generators.
//
// decide_and_prove runs a terminating, contraction-free backward search for
// the implicational fragment of minimal/intuitionistic logic, extracts a
// derivation, and returns it normalized and expanded.  The generators
// produce the deterministic corpora used to exercise the counting theorems:
// uniform random formulas and the "blowup" family of wide, height-bounded
// proofs with planted repeated subderivations.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimp/derivation.hpp"

namespace mimp {

enum class ProverStatus { Proved, NotProvable, BudgetExceeded };

struct ProverResult {
    ProverStatus status = ProverStatus::NotProvable;
    DerivPtr proof;  // closed, normal, expanded when status == Proved
    long long nodesExplored = 0;
};

ProverResult decide_and_prove(const FormulaPtr& goal, long long budget = 200000);

// Uniformly shaped implicational formulas over atoms {a..e}; node counts are
// odd and <= maxNodes; deterministic per seed.
std::vector<FormulaPtr> gen_random_formulas(int maxNodes, int count, std::uint64_t seed);

struct FamilySpec {
    std::string family = "blowup";
    int m = 3;
    int p = 4;
    int q = 1;
    std::uint64_t seed = 0;
    int heightCoeff = 4;
};

struct FamilyMember {
    FormulaPtr formula;
    DerivPtr proof;
    int depth = 0;        // duplication depth d chosen for the thresholds
    long long mPrime = 0; // syntax-tree size of the formula
};

struct FamilyInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic; throws FamilyInfeasible when no duplication depth satisfies
// the size threshold within the height bound heightCoeff * m'^q.
std::vector<FamilyMember> gen_redundant_family(const FamilySpec& spec);

} // namespace mimp
