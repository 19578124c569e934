#include "mimp/emap.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "mimp/transform.hpp"

namespace mimp {

int EMappedProof::vertex_of(const Deriv* occ) const {
    auto it = map.find(occ);
    if (it == map.end()) throw std::out_of_range("vertex_of: occurrence is not mapped");
    return it->second;
}

namespace {

struct Builder {
    EMappedProof e;
    BranchAnalysis ba;
    std::optional<EmapFailure> failure;
    std::vector<EmapChoice> choices;
    std::unordered_map<int, const Deriv*> binderOf;

    bool fail(const Deriv* at, std::string reason) {
        failure = EmapFailure{std::move(reason), e.view->address_of(at)};
        return false;
    }

    // Label-checked assignment; a second, different vertex for the same
    // occurrence is a conflict.
    bool assign(const Deriv* occ, int v) {
        auto it = e.map.find(occ);
        if (it != e.map.end()) {
            if (it->second != v)
                return fail(occ, "conflicting vertex assignment (" +
                                     std::to_string(it->second) + " vs " +
                                     std::to_string(v) + ")");
            return true;
        }
        if (!formula_equal(e.tree.at(v).label, occ->conclusion()))
            return fail(occ, "vertex " + std::to_string(v) + " is labeled " +
                                 print_formula(e.tree.at(v).label) + ", not " +
                                 print_formula(occ->conclusion()));
        e.map.emplace(occ, v);
        return true;
    }

    bool process(std::size_t bi) {
        const Branch& b = ba.branches[bi];
        BranchSplit s = split_branch(*e.view, b);
        const auto& el = b.elements;
        const std::size_t i = s.ePart.size();   // index of the minimal formula
        const std::size_t k = el.size() - 1;    // index of the end

        // End of the branch: the root, or the minor premise of an elim whose
        // conclusion was mapped while handling a branch of lower order.
        const Deriv* endNode = el[k];
        const Deriv* pe = e.view->parent(endNode);
        if (!pe) {
            if (!assign(endNode, e.tree.root)) return false;
        } else {
            auto it = e.map.find(pe);
            if (it == e.map.end())
                return fail(endNode, "enclosing elim conclusion is unmapped");
            int vpe = it->second;
            int p = e.tree.at(vpe).parent;
            if (p < 0 || e.tree.at(p).right != vpe)
                return fail(endNode,
                            "enclosing elim maps to a vertex that is not a right child");
            if (!assign(endNode, e.tree.at(p).left)) return false;
        }

        // I-part, walking from the end back toward (but not into) the minimal:
        // stripping an intro moves to the consequent, i.e. the right child.
        for (std::size_t j = k; j-- > i + 1;) {
            int above = e.map.at(el[j + 1]);
            int r = e.tree.at(above).right;
            if (r < 0) return fail(el[j], "I-part descends past a leaf vertex");
            if (!assign(el[j], r)) return false;
        }

        if (i == k) {
            // Minimal formula is the end itself; the E-part is forced upward.
            int cur = e.map.at(el[k]);
            for (std::size_t j = i; j-- > 0;) {
                int p = e.tree.at(cur).parent;
                if (p < 0 || e.tree.at(p).right != cur)
                    return fail(el[j], "E-part runs above the root of the tree");
                if (!assign(el[j], p)) return false;
                cur = p;
            }
            return true;
        }

        // Vertex of the top-formula: under a discharging intro it is the
        // antecedent (left child) of the intro conclusion's vertex; for an
        // open top-formula take the leftmost vertex that fits.
        const Deriv* top = el[0];
        const Deriv* binder = nullptr;
        if (top->label() > 0) {
            auto bit = binderOf.find(top->label());
            if (bit != binderOf.end()) binder = bit->second;
        }
        int u0 = -1;
        if (binder) {
            auto it = e.map.find(binder);
            if (it == e.map.end())
                return fail(top, "binder of the top-formula is unmapped");
            u0 = e.tree.at(it->second).left;
            if (u0 < 0) return fail(top, "binder maps to a leaf vertex");
        } else {
            std::vector<int> cands;
            for (int v = 0; v < e.tree.size(); ++v)
                if (e.tree.is_left_child(v) &&
                    formula_equal(e.tree.at(v).label, top->conclusion()))
                    cands.push_back(v);
            if (cands.empty())
                return fail(top, "no admissible vertex for the open top-formula " +
                                     print_formula(top->conclusion()));
            u0 = cands.front();
            choices.push_back({e.view->address_of(top), u0, std::move(cands)});
        }
        if (!assign(el[0], u0)) return false;
        int cur = u0;
        for (std::size_t j = 1; j <= i; ++j) {
            int r = e.tree.at(cur).right;
            if (r < 0) return fail(el[j], "E-part descends past a leaf vertex");
            if (!assign(el[j], r)) return false;
            cur = r;
        }
        return true;
    }
};

} // namespace

BuildEmapResult build_emap(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("build_emap: null derivation");
    if (!is_normal(d))
        throw std::invalid_argument("build_emap requires a normal derivation");
    if (!is_expanded(d))
        throw std::invalid_argument("build_emap requires an expanded derivation");

    Builder b;
    b.e.proof = d;
    b.e.view = std::make_shared<ProofView>(d);
    b.e.tree = build_syntax_tree(d->conclusion());
    b.ba = analyze_branches(*b.e.view);
    for (const Deriv* n : b.e.view->preorder())
        if (n->is_intro()) b.binderOf[n->label()] = n;

    // Lower order first so every branch end's enclosing elim is mapped
    // beforehand; end preorder as a deterministic tiebreak.
    std::vector<std::size_t> idx(b.ba.branches.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
        if (b.ba.orders[x] != b.ba.orders[y]) return b.ba.orders[x] < b.ba.orders[y];
        return b.e.view->preorder_index(b.ba.branches[x].end()) <
               b.e.view->preorder_index(b.ba.branches[y].end());
    });

    BuildEmapResult res;
    for (std::size_t bi : idx) {
        if (!b.process(bi)) {
            res.failure = std::move(b.failure);
            res.choices = std::move(b.choices);
            return res;
        }
    }

    EmapReport rep = verify_emap(b.e);
    if (!rep.ok) {
        const EmapViolation& v = rep.violations.front();
        res.failure = EmapFailure{v.check + ": " + v.detail, v.address};
        res.choices = std::move(b.choices);
        return res;
    }
    res.mapped = std::move(b.e);
    res.choices = std::move(b.choices);
    return res;
}

EmapReport verify_emap(const EMappedProof& e) {
    if (!e.proof || !e.view) throw std::invalid_argument("verify_emap: empty mapped proof");
    EmapReport rep;
    const ProofView& view = *e.view;
    const SyntaxTree& tree = e.tree;

    auto add = [&](std::string check, std::string detail, const Deriv* at, int v) {
        rep.violations.push_back(
            {std::move(check), std::move(detail), at ? view.address_of(at) : OccAddress{}, v});
    };
    auto vertexOk = [&](int v) { return v >= 0 && v < tree.size(); };

    for (const auto& [n, v] : e.map)
        if (!view.contains(n))
            add("label", "mapped node is not an occurrence of the proof", nullptr, v);
    for (const Deriv* n : view.preorder()) {
        auto it = e.map.find(n);
        if (it == e.map.end()) continue;
        if (!vertexOk(it->second)) {
            add("label", "vertex id out of range", n, it->second);
            continue;
        }
        if (!formula_equal(tree.at(it->second).label, n->conclusion()))
            add("label", "occurrence of " + print_formula(n->conclusion()) +
                             " mapped to a vertex labeled " +
                             print_formula(tree.at(it->second).label),
                n, it->second);
    }

    BranchAnalysis ba = analyze_branches(view);
    std::vector<BranchSplit> splits;
    splits.reserve(ba.branches.size());
    for (const Branch& b : ba.branches) splits.push_back(split_branch(view, b));

    for (std::size_t bi = 0; bi < ba.branches.size(); ++bi) {
        const BranchSplit& s = splits[bi];
        for (const Deriv* n : s.ePart)
            if (!e.map.count(n)) add("epart-coverage", "E-part element is unmapped", n, -1);
        if (!e.map.count(s.minimal))
            add("epart-coverage", "minimal formula is unmapped", s.minimal, -1);
    }

    for (const Deriv* n : view.preorder()) {
        if (!n->is_elim()) continue;
        auto it = e.map.find(n);
        if (it == e.map.end() || !vertexOk(it->second)) continue;
        int v = it->second;
        int p = tree.at(v).parent;
        if (p < 0 || tree.at(p).right != v) {
            add("elim-coherence", "conclusion vertex does not hang by a right edge", n, v);
            continue;
        }
        auto maj = e.map.find(n->major().get());
        if (maj == e.map.end())
            add("elim-coherence", "major premise is unmapped", n->major().get(), -1);
        else if (maj->second != p)
            add("elim-coherence", "major premise is not mapped to the parent vertex",
                n->major().get(), maj->second);
        auto mi = e.map.find(n->minor().get());
        if (mi == e.map.end())
            add("elim-coherence", "minor premise is unmapped", n->minor().get(), -1);
        else if (mi->second != tree.at(p).left)
            add("elim-coherence", "minor premise is not mapped to the left sibling",
                n->minor().get(), mi->second);
    }

    for (const Deriv* n : view.preorder()) {
        if (!n->is_intro()) continue;
        auto it = e.map.find(n);
        if (it == e.map.end() || !vertexOk(it->second)) continue;
        int v = it->second;
        int r = tree.at(v).right;
        if (r < 0)
            add("intro-coherence", "conclusion vertex is a leaf", n, v);
        else if (!formula_equal(tree.at(r).label, n->premise()->conclusion()))
            add("intro-coherence", "right child is labeled " +
                                       print_formula(tree.at(r).label) + ", not " +
                                       print_formula(n->premise()->conclusion()),
                n, v);
    }

    for (std::size_t bi = 0; bi < ba.branches.size(); ++bi) {
        const BranchSplit& s = splits[bi];
        std::vector<const Deriv*> seq = s.ePart;
        seq.push_back(s.minimal);
        for (std::size_t j = 0; j + 1 < seq.size(); ++j) {
            auto ia = e.map.find(seq[j]);
            auto ib = e.map.find(seq[j + 1]);
            if (ia == e.map.end() || ib == e.map.end()) continue;
            if (!vertexOk(ia->second) || !vertexOk(ib->second)) continue;
            if (tree.at(ia->second).right != ib->second)
                add("epart-chain",
                    "vertex " + std::to_string(ib->second) +
                        " is not the consequent child of vertex " +
                        std::to_string(ia->second),
                    seq[j + 1], ib->second);
        }
    }

    for (std::size_t bi = 0; bi < ba.branches.size(); ++bi) {
        const BranchSplit& s = splits[bi];
        const std::vector<const Deriv*>& el = ba.branches[bi].elements;
        auto im = e.map.find(s.minimal);
        if (im == e.map.end() || !vertexOk(im->second)) continue;
        int vmin = im->second;
        if (!tree.is_leaf(vmin)) {
            add("top-vertex", "minimal formula mapped to an internal vertex", s.minimal, vmin);
            continue;
        }
        std::optional<int> tv = top_formula_vertex(tree, vmin);
        if (!tv) {
            add("top-vertex", "no top-formula vertex above the minimal formula's vertex",
                s.minimal, vmin);
            continue;
        }
        auto itop = e.map.find(el[0]);
        if (itop == e.map.end()) continue;  // reported as epart-coverage
        if (itop->second != *tv)
            add("top-vertex",
                "top-formula is mapped to vertex " + std::to_string(itop->second) +
                    ", expected " + std::to_string(*tv),
                el[0], itop->second);
    }

    for (std::size_t bi = 0; bi < ba.branches.size(); ++bi) {
        const BranchSplit& s = splits[bi];
        const std::vector<const Deriv*>& el = ba.branches[bi].elements;
        if (el.size() < 2 || !e.map.count(s.minimal)) continue;
        std::size_t i = s.ePart.size();
        const Deriv* pred = i > 0 ? el[i - 1] : nullptr;
        const Deriv* succ = i + 1 < el.size() ? el[i + 1] : nullptr;
        bool ok = (pred && e.map.count(pred)) || (succ && e.map.count(succ));
        if (!ok)
            add("neighborhood", "no branch neighbour of the minimal formula is mapped",
                s.minimal, e.map.at(s.minimal));
    }

    rep.ok = rep.violations.empty();
    return rep;
}

std::vector<int> epart_path(const EMappedProof& e, const Branch& b) {
    if (!e.view) throw std::invalid_argument("epart_path: empty mapped proof");
    BranchSplit s = split_branch(*e.view, b);
    std::vector<int> path;
    path.reserve(s.ePart.size() + 1);
    for (const Deriv* n : s.ePart) {
        auto it = e.map.find(n);
        if (it == e.map.end())
            throw std::invalid_argument("epart_path: E-part element is unmapped");
        path.push_back(it->second);
    }
    auto it = e.map.find(s.minimal);
    if (it == e.map.end())
        throw std::invalid_argument("epart_path: minimal formula is unmapped");
    path.push_back(it->second);
    return path;
}

int count_epart_types(const EMappedProof& e) {
    if (!e.view) throw std::invalid_argument("count_epart_types: empty mapped proof");
    std::set<std::vector<int>> types;
    for (const Branch& b : enumerate_branches(*e.view)) types.insert(epart_path(e, b));
    return static_cast<int>(types.size());
}

} // namespace mimp
