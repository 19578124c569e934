#include "mimp/transform.hpp"

#include <stdexcept>

namespace mimp {

namespace {

void find_max_rec(const DerivPtr& d, OccAddress& path, std::vector<MaximalFormulaSite>& out) {
    switch (d->kind()) {
        case RuleKind::Hyp: return;
        case RuleKind::Intro:
            path.push_back(Step::Premise);
            find_max_rec(d->premise(), path, out);
            path.pop_back();
            return;
        case RuleKind::Elim:
            if (d->major()->is_intro()) out.push_back({path, d->major()->conclusion()});
            path.push_back(Step::Minor);
            find_max_rec(d->minor(), path, out);
            path.back() = Step::Major;
            find_max_rec(d->major(), path, out);
            path.pop_back();
            return;
    }
}

bool normal_rec(const Deriv* n) {
    switch (n->kind()) {
        case RuleKind::Hyp: return true;
        case RuleKind::Intro: return normal_rec(n->premise().get());
        case RuleKind::Elim:
            if (n->major()->is_intro()) return false;
            return normal_rec(n->minor().get()) && normal_rec(n->major().get());
    }
    return true;
}

bool expanded_rec(const Deriv* n, bool isMajor) {
    if (!isMajor && !n->is_intro() && n->conclusion()->is_imp()) return false;
    switch (n->kind()) {
        case RuleKind::Hyp: return true;
        case RuleKind::Intro: return expanded_rec(n->premise().get(), false);
        case RuleKind::Elim:
            return expanded_rec(n->minor().get(), false) && expanded_rec(n->major().get(), true);
    }
    return true;
}

DerivPtr subst_rec(const DerivPtr& d, int label, const DerivPtr& rep, int& nextLabel) {
    switch (d->kind()) {
        case RuleKind::Hyp:
            if (d->label() != label) return d;
            if (!formula_equal(d->conclusion(), rep->conclusion()))
                throw std::invalid_argument(
                    "substitute_hyp: hypothesis " + print_formula(d->conclusion()) +
                    " cannot be replaced by a derivation of " +
                    print_formula(rep->conclusion()));
            return deep_copy_fresh_labels(rep, nextLabel);
        case RuleKind::Intro: {
            DerivPtr p = subst_rec(d->premise(), label, rep, nextLabel);
            if (p == d->premise()) return d;
            return Deriv::intro(d->label(), d->discharged(), std::move(p));
        }
        case RuleKind::Elim: {
            DerivPtr mi = subst_rec(d->minor(), label, rep, nextLabel);
            DerivPtr ma = subst_rec(d->major(), label, rep, nextLabel);
            if (mi == d->minor() && ma == d->major()) return d;
            return Deriv::elim_unchecked(std::move(mi), std::move(ma), d->conclusion());
        }
    }
    throw std::logic_error("subst_rec: bad kind");
}

DerivPtr reduce_rec(const DerivPtr& d, const OccAddress& site, std::size_t i, int& nextLabel) {
    if (i == site.size()) {
        if (!d->is_elim() || !d->major()->is_intro())
            throw std::invalid_argument("reduce_step: address does not name a redex");
        const DerivPtr& intro = d->major();
        return subst_rec(intro->premise(), intro->label(), d->minor(), nextLabel);
    }
    switch (site[i]) {
        case Step::Premise:
            if (!d->is_intro())
                throw std::invalid_argument("reduce_step: stale address (premise of non-intro)");
            return Deriv::intro(d->label(), d->discharged(),
                                reduce_rec(d->premise(), site, i + 1, nextLabel));
        case Step::Minor:
            if (!d->is_elim())
                throw std::invalid_argument("reduce_step: stale address (minor of non-elim)");
            return Deriv::elim_unchecked(reduce_rec(d->minor(), site, i + 1, nextLabel),
                                         d->major(), d->conclusion());
        case Step::Major:
            if (!d->is_elim())
                throw std::invalid_argument("reduce_step: stale address (major of non-elim)");
            return Deriv::elim_unchecked(d->minor(),
                                         reduce_rec(d->major(), site, i + 1, nextLabel),
                                         d->conclusion());
    }
    throw std::logic_error("reduce_rec: bad step");
}

// Address of the first redex in postorder (minor before major before node),
// i.e. leftmost-innermost.
bool first_redex(const DerivPtr& d, OccAddress& path) {
    switch (d->kind()) {
        case RuleKind::Hyp: return false;
        case RuleKind::Intro:
            path.push_back(Step::Premise);
            if (first_redex(d->premise(), path)) return true;
            path.pop_back();
            return false;
        case RuleKind::Elim:
            path.push_back(Step::Minor);
            if (first_redex(d->minor(), path)) return true;
            path.back() = Step::Major;
            if (first_redex(d->major(), path)) return true;
            path.pop_back();
            return d->major()->is_intro();
    }
    return false;
}

const Deriv* resolve_raw(const DerivPtr& d, const OccAddress& a) {
    const Deriv* cur = d.get();
    for (Step s : a) {
        switch (s) {
            case Step::Premise: cur = cur->premise().get(); break;
            case Step::Minor: cur = cur->minor().get(); break;
            case Step::Major: cur = cur->major().get(); break;
        }
    }
    return cur;
}

DerivPtr eta_wrap(DerivPtr node, int& nextLabel) {
    if (node->conclusion()->is_atom()) return node;
    FormulaPtr phi1 = node->conclusion()->antecedent();
    int label = nextLabel++;
    DerivPtr minor = eta_wrap(Deriv::hyp(phi1, label), nextLabel);
    DerivPtr body = eta_wrap(Deriv::elim(std::move(minor), std::move(node)), nextLabel);
    return Deriv::intro(label, std::move(phi1), std::move(body));
}

DerivPtr expand_rec(const DerivPtr& d, bool isMajor, int& nextLabel) {
    DerivPtr base;
    switch (d->kind()) {
        case RuleKind::Hyp: base = d; break;
        case RuleKind::Intro: {
            DerivPtr p = expand_rec(d->premise(), false, nextLabel);
            base = (p == d->premise()) ? d : Deriv::intro(d->label(), d->discharged(),
                                                          std::move(p));
            break;
        }
        case RuleKind::Elim: {
            DerivPtr mi = expand_rec(d->minor(), false, nextLabel);
            DerivPtr ma = expand_rec(d->major(), true, nextLabel);
            base = (mi == d->minor() && ma == d->major())
                       ? d
                       : Deriv::elim_unchecked(std::move(mi), std::move(ma), d->conclusion());
            break;
        }
    }
    if (!isMajor && !base->is_intro() && base->conclusion()->is_imp())
        base = eta_wrap(std::move(base), nextLabel);
    return base;
}

} // namespace

std::vector<MaximalFormulaSite> find_maximal_formulas(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("find_maximal_formulas: null derivation");
    std::vector<MaximalFormulaSite> out;
    OccAddress path;
    find_max_rec(d, path, out);
    return out;
}

bool is_normal(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("is_normal: null derivation");
    return normal_rec(d.get());
}

bool is_expanded(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("is_expanded: null derivation");
    return expanded_rec(d.get(), false);
}

DerivPtr substitute_hyp(const DerivPtr& d, int label, const DerivPtr& replacement,
                        int& nextLabel) {
    if (!d || !replacement) throw std::invalid_argument("substitute_hyp: null derivation");
    return subst_rec(d, label, replacement, nextLabel);
}

DerivPtr reduce_step(const DerivPtr& d, const OccAddress& site) {
    if (!d) throw std::invalid_argument("reduce_step: null derivation");
    int nextLabel = max_label(d) + 1;
    return reduce_rec(d, site, 0, nextLabel);
}

NormalizeResult normalize(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("normalize: null derivation");
    NormalizeResult r;
    r.result = d;
    int nextLabel = max_label(d) + 1;
    for (;;) {
        OccAddress site;
        if (!first_redex(r.result, site)) break;
        NormalizeStep step;
        step.index = r.steps;
        step.site = site;
        step.maximalFormula = resolve_raw(r.result, site)->major()->conclusion();
        step.nodesBefore = r.result->node_count();
        r.result = reduce_rec(r.result, site, 0, nextLabel);
        step.nodesAfter = r.result->node_count();
        r.trace.push_back(std::move(step));
        ++r.steps;
    }
    return r;
}

DerivPtr expand(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("expand: null derivation");
    if (!is_normal(d)) throw std::invalid_argument("expand requires a normal derivation");
    int nextLabel = max_label(d) + 1;
    return expand_rec(d, false, nextLabel);
}

} // namespace mimp
