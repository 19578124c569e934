#pragma once
//
// Implicational formulas: parsing, canonical printing, spine decomposition,
// linear subformula orders and dependency-set bitstrings.
//
// Formulas are immutable trees shared through FormulaPtr.  The canonical
// renderer drops parentheses implied by right-associativity, so
// "A -> (B -> C)" prints as "A -> B -> C".
//
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mimp {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
    static FormulaPtr atom(std::string name);
    static FormulaPtr imp(FormulaPtr antecedent, FormulaPtr consequent);

    bool is_atom() const { return !ante_; }
    bool is_imp() const { return ante_ != nullptr; }
    const std::string& atom_name() const;
    const FormulaPtr& antecedent() const;
    const FormulaPtr& consequent() const;

    /// Number of syntax-tree vertices (atom and implication occurrences).
    std::size_t node_count() const { return node_count_; }
    /// Symbols of the canonical rendering counted as tokens:
    /// atom occurrences + implication signs + parentheses.
    std::size_t token_count() const { return token_count_; }
    /// Character length of the canonical rendering.
    std::size_t print_length() const { return print_len_; }
    std::uint64_t hash() const { return hash_; }

private:
    Formula() = default;
    std::string name_;
    FormulaPtr ante_, cons_;
    std::size_t node_count_ = 1, token_count_ = 1, print_len_ = 0;
    std::uint64_t hash_ = 0;
};

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string print_formula(const FormulaPtr& f);

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
    std::size_t position;
};

/// Parses "A -> B -> C" style text; "->" is right-associative, atoms match
/// [A-Za-z][A-Za-z0-9_]*, whitespace is insignificant.  Throws ParseError.
FormulaPtr parse_formula(std::string_view text);

/// alpha = a0 -> (a1 -> ... (ak -> head) ...) with atomic head.
struct Spine {
    std::vector<FormulaPtr> antecedents;
    FormulaPtr head;
};
Spine spine_decompose(const FormulaPtr& f);
FormulaPtr spine_compose(const std::vector<FormulaPtr>& antecedents, FormulaPtr head);

/// Distinct subformulas in the default linear order:
/// ascending (node count, canonical text).
std::vector<FormulaPtr> distinct_subformulas(const FormulaPtr& f);

/// A fixed enumeration of formulas used to position dependency bits.
class SubformulaOrder {
public:
    explicit SubformulaOrder(std::vector<FormulaPtr> sequence);
    static SubformulaOrder default_for(const FormulaPtr& f);

    std::size_t size() const { return seq_.size(); }
    const FormulaPtr& at(std::size_t i) const { return seq_.at(i); }
    /// Throws std::out_of_range if f is not in the order.
    std::size_t index_of(const FormulaPtr& f) const;
    bool contains(const FormulaPtr& f) const;

private:
    std::vector<FormulaPtr> seq_;
};

/// Bitstring with one position per order element, "1" where the formula is
/// in deps.  Throws std::invalid_argument if a dep is outside the order.
std::string encode_dependencies(const SubformulaOrder& order,
                                const std::vector<FormulaPtr>& deps);
/// Inverse of encode_dependencies; bits must have exactly order.size()
/// characters from {'0','1'}.
std::vector<FormulaPtr> decode_dependencies(const SubformulaOrder& order,
                                            const std::string& bits);

} // namespace mimp
