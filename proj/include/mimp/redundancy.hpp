// Counting repeated subderivations in E-mapped proofs.
//
// The pipeline: bucket mapped occurrences into (vertex, level) cells, split
// a cell by rule role (Top = hypotheses, Uno = intro conclusions, Duo = elim
// conclusions), spread branch instances over levels by pigeonhole, pump a
// branch into the subderivation hanging at its end, and search for a
// subderivation whose level-aligned multiplicity clears an exact integer
// threshold.  A brute-force counter serves as an independent oracle, and a
// log-log fit diagnoses growth of proof families.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mimp/emap.hpp"

namespace mimp {

long long ipow(long long base, int exp);  // exact; throws std::overflow_error

struct LevelHistogram {
    // (vertex id, level) -> mapped occurrences, each sorted by preorder.
    std::map<std::pair<int, int>, std::vector<const Deriv*>> cells;
    int mappedOccurrences = 0;
};

LevelHistogram level_histogram(const EMappedProof& e);

struct TUDPartition {
    std::vector<const Deriv*> top, uno, duo;
};

// Splits one cell by rule role; throws std::invalid_argument on an empty cell.
TUDPartition partition_tud(const std::vector<const Deriv*>& cell);

struct SpreadResult {
    int level = 0;                           // level of the minimal formulas
    int count = 0;                           // exact recount at that level
    std::vector<const Deriv*> minimalOccs;   // the occurrences counted
    long long threshold = 0;                 // m^(p-1)
    bool meetsThreshold = false;
};

// Lemma-Zero-style pigeonhole: instances of b = branches carrying the same
// formula sequence.  Requires height(e.proof) <= heightCoeff * m where
// m = tree size (std::invalid_argument otherwise).  Returns the fullest
// level of their minimal formulas, or nullopt when instances <= m^p.
std::optional<SpreadResult> spread_check(const EMappedProof& e, const Branch& b, int p,
                                         int heightCoeff = 4);

struct PumpResult {
    DerivPtr subderivation;  // canonical form of the subtree at b's end
    int multiplicity = 0;    // verified level-aligned instance count
    int level = 0;           // level of the subderivation roots
};

// Assembles the subderivation whose main branch is b (the subtree hanging at
// the branch end) and counts its instances at the end's level.  `instances`
// must be minimal-formula occurrences on one level
// (std::invalid_argument otherwise).
PumpResult pump_subderivation(const EMappedProof& e, const Branch& b,
                              const std::vector<const Deriv*>& instances);

struct RedundancyReport {
    bool found = false;
    bool hypothesesMet = false;
    std::string unmetReason;

    DerivPtr subderivation;  // canonical form
    long long multiplicity = 0;
    int level = 0;           // of the subderivation roots (depth from conclusion)
    int cellVertex = -1;
    int cellLevel = -1;
    std::string caseTag;     // "Top" | "Uno" | "Duo"

    long long m = 0;  // conclusion's syntax-tree size
    int p = 0, q = 1;
    long long sizeThreshold = 0;          // m^p
    long long heightBound = 0;            // heightCoeff * m^q
    long long multiplicityThreshold = 0;  // m^(p-3) when q == 1, else m^(p-(q+3))
    std::vector<std::string> notes;
};

// Searches the histogram cells (largest first) for a subderivation whose
// level-aligned multiplicity clears the threshold above.  Requires p >= q+3
// (std::invalid_argument).  Unmet size/height hypotheses are reported, not
// thrown.  caseFilter restricts to "Top", "Uno" or "Duo" when nonempty.
RedundancyReport find_redundant(const EMappedProof& e, int p, int q = 1,
                                int heightCoeff = 4, const std::string& caseFilter = "");

struct BruteForceResult {
    DerivPtr subderivation;  // canonical form of the winner
    int multiplicity = 0;    // per-level maximum when perLevel, else total
    int level = -1;          // -1 when perLevel is false
    int sizeNodes = 0;
};

// Counts instances of every subderivation exhaustively.  Ties: larger
// subderivation first, then smaller preorder index.  Throws
// std::invalid_argument when d exceeds nodeLimit.
BruteForceResult brute_force_max_repeats(const DerivPtr& d, bool perLevel,
                                         int nodeLimit = 5000);

struct GrowthFit {
    double exponent = 0.0;
    double constant = 0.0;  // size ~ constant * m^exponent
    std::vector<std::pair<double, double>> points;
    std::vector<double> windowSlopes;  // slopes of consecutive point pairs
    std::string verdict;               // diagnostic text, never a certificate
};

// Least squares on log size vs log m; needs >= 3 points with distinct m
// (std::invalid_argument otherwise).
GrowthFit growth_fit(const std::vector<std::pair<double, double>>& points);

} // namespace mimp
