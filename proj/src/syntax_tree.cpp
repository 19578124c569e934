#include "mimp/syntax_tree.hpp"

#include <stdexcept>

namespace mimp {

const SyntaxTree::Vertex& SyntaxTree::at(int id) const {
    if (id < 0 || id >= size())
        throw std::out_of_range("SyntaxTree: vertex id " + std::to_string(id) +
                                " out of range");
    return vertices[static_cast<std::size_t>(id)];
}

bool SyntaxTree::is_left_child(int id) const {
    const Vertex& v = at(id);
    return v.parent >= 0 && at(v.parent).left == id;
}

bool SyntaxTree::is_right_child(int id) const {
    const Vertex& v = at(id);
    return v.parent >= 0 && at(v.parent).right == id;
}

namespace {

int build_rec(SyntaxTree& tree, const FormulaPtr& f, int parent) {
    int id = tree.size();
    tree.vertices.push_back({f, -1, -1, parent});
    if (f->is_imp()) {
        int l = build_rec(tree, f->antecedent(), id);
        int r = build_rec(tree, f->consequent(), id);
        tree.vertices[static_cast<std::size_t>(id)].left = l;
        tree.vertices[static_cast<std::size_t>(id)].right = r;
    }
    return id;
}

} // namespace

SyntaxTree build_syntax_tree(const FormulaPtr& f) {
    if (!f) throw std::invalid_argument("build_syntax_tree: null formula");
    SyntaxTree tree;
    tree.vertices.reserve(static_cast<std::size_t>(f->node_count()));
    build_rec(tree, f, -1);
    return tree;
}

std::vector<int> right_spine(const SyntaxTree& tree, int id) {
    std::vector<int> path;
    int cur = id;
    path.push_back(cur);
    while (!tree.is_leaf(cur)) {
        cur = tree.at(cur).right;
        path.push_back(cur);
    }
    return path;
}

std::optional<int> top_formula_vertex(const SyntaxTree& tree, int leaf) {
    if (!tree.is_leaf(leaf))
        throw std::invalid_argument("top_formula_vertex: vertex " + std::to_string(leaf) +
                                    " is not a leaf");
    int cur = leaf;
    while (tree.is_right_child(cur)) cur = tree.at(cur).parent;
    if (tree.at(cur).parent < 0 && cur == tree.root) return std::nullopt;
    return cur;
}

} // namespace mimp
