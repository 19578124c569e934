#include <doctest.h>

#include <optional>
#include <string>

#include "mimp/formula.hpp"
#include "mimp/syntax_tree.hpp"

using namespace mimp;

namespace {

std::string label_at(const SyntaxTree& t, int id) { return print_formula(t.at(id).label); }

void check_structure(const SyntaxTree& t) {
    REQUIRE(t.size() > 0);
    CHECK(t.root == 0);
    CHECK(t.at(t.root).parent == -1);
    for (int v = 0; v < t.size(); ++v) {
        const auto& vx = t.at(v);
        CHECK((vx.left < 0) == (vx.right < 0));  // both children or none
        if (vx.left >= 0) {
            CHECK(t.at(vx.left).parent == v);
            CHECK(t.at(vx.right).parent == v);
            CHECK(formula_equal(t.at(vx.left).label, vx.label->antecedent()));
            CHECK(formula_equal(t.at(vx.right).label, vx.label->consequent()));
            CHECK(t.is_left_child(vx.left));
            CHECK(t.is_right_child(vx.right));
        } else {
            CHECK(vx.label->is_atom());
            CHECK(t.is_leaf(v));
        }
    }
}

} // namespace

TEST_SUITE("syntax-tree") {

TEST_CASE("single atom") {
    SyntaxTree t = build_syntax_tree(parse_formula("a"));
    CHECK(t.size() == 1);
    check_structure(t);
    CHECK(t.is_leaf(0));
}

TEST_CASE("A -> C shape and preorder ids") {
    SyntaxTree t = build_syntax_tree(parse_formula("A -> C"));
    REQUIRE(t.size() == 3);
    check_structure(t);
    CHECK(label_at(t, 0) == "A -> C");
    CHECK(label_at(t, 1) == "A");
    CHECK(label_at(t, 2) == "C");
    CHECK(t.at(0).left == 1);
    CHECK(t.at(0).right == 2);
}

TEST_CASE("vertices are numbered in preorder") {
    // (A -> B -> C -> q) -> ((A -> q) -> D -> q) -> D -> q, 19 vertices
    FormulaPtr f = parse_formula("(A -> B -> C -> q) -> ((A -> q) -> D -> q) -> D -> q");
    SyntaxTree t = build_syntax_tree(f);
    REQUIRE(t.size() == 19);
    check_structure(t);
    CHECK(label_at(t, 1) == "A -> B -> C -> q");
    CHECK(label_at(t, 2) == "A");
    CHECK(label_at(t, 3) == "B -> C -> q");
    CHECK(label_at(t, 7) == "q");
    CHECK(label_at(t, 8) == "((A -> q) -> D -> q) -> D -> q");
    CHECK(label_at(t, 9) == "(A -> q) -> D -> q");
    CHECK(label_at(t, 10) == "A -> q");
    CHECK(label_at(t, 13) == "D -> q");
    CHECK(label_at(t, 16) == "D -> q");
    CHECK(label_at(t, 18) == "q");
}

TEST_CASE("right spine walks consequents") {
    SyntaxTree t = build_syntax_tree(parse_formula("a -> (b -> c) -> d"));
    auto spine = right_spine(t, 0);
    REQUIRE(spine.size() == 3);
    CHECK(label_at(t, spine[0]) == "a -> (b -> c) -> d");
    CHECK(label_at(t, spine[1]) == "(b -> c) -> d");
    CHECK(label_at(t, spine[2]) == "d");
    auto leafSpine = right_spine(t, spine[2]);
    REQUIRE(leafSpine.size() == 1);
}

TEST_CASE("top_formula_vertex climbs right-child chains") {
    // ((a -> b) -> b): vertices 0:(a->b)->b 1:a->b 2:a 3:b 4:b
    SyntaxTree t = build_syntax_tree(parse_formula("(a -> b) -> b"));
    REQUIRE(t.size() == 5);
    // a leaf that is a left child is its own top-formula vertex
    CHECK(top_formula_vertex(t, 2) == std::optional<int>(2));
    // the b inside a->b reverses one right edge and stops at the left child
    CHECK(top_formula_vertex(t, 3) == std::optional<int>(1));
    // the final b climbs to the root: no top-formula vertex
    CHECK(top_formula_vertex(t, 4) == std::nullopt);
    CHECK_THROWS_AS(top_formula_vertex(t, 0), std::invalid_argument);
}

TEST_CASE("single-vertex tree has no top-formula vertex") {
    SyntaxTree t = build_syntax_tree(parse_formula("a"));
    CHECK(top_formula_vertex(t, 0) == std::nullopt);
}

} // TEST_SUITE
