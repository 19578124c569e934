// Natural deduction derivations for the implicational fragment.
//
// A derivation is an immutable tree of three node kinds: Hyp (an assumption
// leaf), Intro (implication introduction, discharging hypotheses by label),
// and Elim (modus ponens; the left premise is the minor one, the right the
// major one).  Discharge labels are positive integers, unique per Intro; a
// Hyp with label 0 is open, a Hyp whose label matches no enclosing Intro is
// treated as open as well (this keeps subtrees of well-formed derivations
// themselves usable as derivations).
//
// Every node object appears at most once inside a derivation: duplicating a
// subderivation means deep-copying it.  That gives each formula occurrence a
// stable identity (the node pointer), which the branch and mapping machinery
// relies on.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimp/formula.hpp"

namespace mimp {

enum class RuleKind { Hyp, Intro, Elim };

// One step of a path from the root of a derivation to a node.
enum class Step { Premise, Minor, Major };

using OccAddress = std::vector<Step>;

std::string address_to_string(const OccAddress& a);  // "root", "root.major.minor", ...

class Deriv;
using DerivPtr = std::shared_ptr<const Deriv>;

class Deriv {
public:
    static DerivPtr hyp(FormulaPtr formula, int label = 0);
    static DerivPtr intro(int label, FormulaPtr discharged, DerivPtr premise);
    // Throws std::invalid_argument unless major concludes minor ⊃ something.
    static DerivPtr elim(DerivPtr minor, DerivPtr major);
    // For building deliberately broken derivations in tests: no shape check,
    // conclusion taken as given.
    static DerivPtr elim_unchecked(DerivPtr minor, DerivPtr major, FormulaPtr conclusion);

    RuleKind kind() const { return kind_; }
    const FormulaPtr& conclusion() const { return conclusion_; }
    bool is_hyp() const { return kind_ == RuleKind::Hyp; }
    bool is_intro() const { return kind_ == RuleKind::Intro; }
    bool is_elim() const { return kind_ == RuleKind::Elim; }

    int label() const;                  // Hyp: its discharge label; Intro: its binder label
    const FormulaPtr& discharged() const;  // Intro only
    const DerivPtr& premise() const;       // Intro only
    const DerivPtr& minor() const;         // Elim only
    const DerivPtr& major() const;         // Elim only

    int node_count() const { return node_count_; }
    int height() const { return height_; }           // leaf = 0
    long long size_symbols() const { return size_symbols_; }

private:
    Deriv() = default;

    RuleKind kind_ = RuleKind::Hyp;
    FormulaPtr conclusion_;
    FormulaPtr discharged_;  // Intro only
    DerivPtr first_;         // Intro premise / Elim minor
    DerivPtr second_;        // Elim major
    int label_ = 0;
    int node_count_ = 1;
    int height_ = 0;
    long long size_symbols_ = 0;
};

// Fresh node objects throughout; labels unchanged.
DerivPtr deep_copy(const DerivPtr& d);

// Fresh node objects; Intro labels inside the subtree (and the Hyps they
// bind) renumbered from *nextLabel; labels referring outside are kept.
DerivPtr deep_copy_fresh_labels(const DerivPtr& d, int& nextLabel);

int max_label(const DerivPtr& d);

struct Violation {
    OccAddress where;
    std::string reason;
};

struct CheckReport {
    bool ok = true;
    std::vector<Violation> violations;
};

// Validates rule shapes, conclusion arithmetic, label uniqueness and binding
// discipline, and node-object uniqueness.  Report-style: never throws.
CheckReport check_derivation(const DerivPtr& d);

// Formulas of Hyp nodes bound by no enclosing Intro, in preorder (a multiset).
std::vector<FormulaPtr> open_assumptions(const DerivPtr& d);

bool is_closed(const DerivPtr& d);

struct Metrics {
    long long sizeSymbols = 0;  // printed conclusion lengths plus one separator per inference
    int sizeNodes = 0;
    int height = 0;
};

Metrics metrics(const DerivPtr& d);

// Per-derivation cache of parents, levels (depth from the conclusion, root =
// 0) and preorder numbering.  Construction fails if a node object occurs
// twice.  Occurrences are identified by node pointer; addresses are derived
// on demand for reports.
class ProofView {
public:
    explicit ProofView(DerivPtr root);

    const DerivPtr& root() const { return root_; }
    const Deriv* parent(const Deriv* n) const;  // nullptr at the root
    int level(const Deriv* n) const;
    int preorder_index(const Deriv* n) const;
    const std::vector<const Deriv*>& preorder() const { return preorder_; }
    bool contains(const Deriv* n) const { return index_.count(n) != 0; }
    int max_level() const { return max_level_; }

    OccAddress address_of(const Deriv* n) const;
    const Deriv* resolve(const OccAddress& a) const;  // throws std::out_of_range on bad path

private:
    DerivPtr root_;
    std::vector<const Deriv*> preorder_;
    std::unordered_map<const Deriv*, int> index_;
    std::vector<const Deriv*> parent_;  // by preorder index
    std::vector<int> level_;
    int max_level_ = 0;
};

std::vector<std::pair<OccAddress, DerivPtr>> enumerate_subderivations(const DerivPtr& d);

// Instance equality: structural equality after canonical relabeling.  Intro
// labels are renumbered 1,2,... in preorder of the subtree; a Hyp bound
// within the subtree takes its binder's new number, any other Hyp label
// becomes 0 (open relative to the subtree).
std::string canonical_key(const DerivPtr& d);
std::uint64_t canonical_hash(const DerivPtr& d);
DerivPtr canonical_subtree(const DerivPtr& d);  // rebuilt with canonical labels
bool instance_equal(const DerivPtr& a, const DerivPtr& b);

int count_instances(const DerivPtr& d, const DerivPtr& s);
// Same, but only occurrences whose root sits at the given level.
int count_instances_at_level(const ProofView& view, const DerivPtr& s, int level);

// Rebinds every open-at-that-point occurrence of each discharged formula to
// the nearest enclosing matching Intro.  Requires a closed proof; throws
// std::invalid_argument otherwise.
DerivPtr greedy_discharge(const DerivPtr& d);

} // namespace mimp
