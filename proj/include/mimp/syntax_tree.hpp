// Syntax trees of implicational formulas.
//
// A formula's syntax tree has one vertex per subformula occurrence; an
// implication vertex has the antecedent as left child and the consequent as
// right child.  Vertices carry dense ids assigned in preorder (root = 0,
// left subtree before right), so ids are stable across rebuilds of the same
// formula and can be used in serialized maps.

#pragma once

#include <optional>
#include <vector>

#include "mimp/formula.hpp"

namespace mimp {

struct SyntaxTree {
    struct Vertex {
        FormulaPtr label;  // the subformula occurrence at this vertex
        int left = -1;     // antecedent child, -1 for leaves
        int right = -1;    // consequent child, -1 for leaves
        int parent = -1;   // -1 at the root
    };

    std::vector<Vertex> vertices;  // indexed by id, preorder
    int root = 0;

    const Vertex& at(int id) const;
    bool is_leaf(int id) const { return at(id).left < 0; }
    bool is_left_child(int id) const;
    bool is_right_child(int id) const;
    int size() const { return static_cast<int>(vertices.size()); }
};

SyntaxTree build_syntax_tree(const FormulaPtr& f);

// Follow consequent (right) edges downward from `id` to the end of its
// right spine; returns the sequence of vertex ids visited, starting at `id`
// itself and ending at the leaf head.
std::vector<int> right_spine(const SyntaxTree& tree, int id);

// The top formula vertex above a leaf: walk parent edges upward as long as
// the current vertex is a right (consequent) child, maximally.  If the walk
// ends at the root the leaf has no top formula vertex (nullopt); otherwise
// the result is a left child of its parent.  The leaf itself qualifies when
// it is already a left child.
std::optional<int> top_formula_vertex(const SyntaxTree& tree, int leaf);

} // namespace mimp
