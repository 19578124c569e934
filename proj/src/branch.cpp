#include "mimp/branch.hpp"

#include <functional>
#include <stdexcept>

namespace mimp {

std::vector<Branch> enumerate_branches(const ProofView& view) {
    std::vector<Branch> out;
    for (const Deriv* n : view.preorder()) {
        if (!n->is_hyp()) continue;
        Branch b;
        const Deriv* cur = n;
        b.elements.push_back(cur);
        for (;;) {
            const Deriv* p = view.parent(cur);
            if (!p) break;
            if (p->is_elim() && p->major().get() != cur) break;  // cur is a minor premise
            b.elements.push_back(p);
            cur = p;
        }
        out.push_back(std::move(b));
    }
    return out;
}

BranchSplit split_branch(const ProofView&, const Branch& b) {
    const auto& el = b.elements;
    std::size_t i = 0;
    while (i + 1 < el.size() && el[i + 1]->is_elim()) ++i;
    BranchSplit s;
    s.ePart.assign(el.begin(), el.begin() + static_cast<std::ptrdiff_t>(i));
    s.minimal = el[i];
    for (std::size_t j = i + 1; j < el.size(); ++j) {
        if (!el[j]->is_intro())
            throw std::invalid_argument(
                "split_branch: intro conclusion used as a major premise "
                "(derivation is not normal)");
        s.iPart.push_back(el[j]);
    }
    return s;
}

BranchAnalysis analyze_branches(const ProofView& view) {
    BranchAnalysis a;
    a.branches = enumerate_branches(view);
    for (std::size_t i = 0; i < a.branches.size(); ++i)
        for (const Deriv* n : a.branches[i].elements)
            a.branchOf[n] = static_cast<int>(i);

    const int nb = static_cast<int>(a.branches.size());
    a.orders.assign(nb, -1);
    std::function<int(int)> orderOf = [&](int i) -> int {
        if (a.orders[i] >= 0) return a.orders[i];
        const Deriv* end = a.branches[static_cast<std::size_t>(i)].end();
        const Deriv* p = view.parent(end);
        int o = p ? orderOf(a.branchOf.at(p)) + 1 : 0;
        return a.orders[i] = o;
    };
    for (int i = 0; i < nb; ++i) orderOf(i);

    a.reverseRanks.assign(nb, -1);
    std::function<int(int)> rankOf = [&](int i) -> int {
        if (a.reverseRanks[i] >= 0) return a.reverseRanks[i];
        a.reverseRanks[i] = 0;  // settled before recursing; ends only go deeper
        int r = 0;
        for (const Deriv* n : a.branches[static_cast<std::size_t>(i)].elements) {
            if (!n->is_elim()) continue;
            int sub = rankOf(a.branchOf.at(n->minor().get())) + 1;
            if (sub > r) r = sub;
        }
        return a.reverseRanks[i] = r;
    };
    for (int i = 0; i < nb; ++i) rankOf(i);

    return a;
}

std::vector<FormulaPtr> epart_from_top(const FormulaPtr& top) {
    if (!top) throw std::invalid_argument("epart_from_top: null formula");
    std::vector<FormulaPtr> seq;
    FormulaPtr cur = top;
    seq.push_back(cur);
    while (cur->is_imp()) {
        cur = cur->consequent();
        seq.push_back(cur);
    }
    return seq;
}

} // namespace mimp
