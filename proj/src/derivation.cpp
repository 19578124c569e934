#include "mimp/derivation.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace mimp {

std::string address_to_string(const OccAddress& a) {
    std::string out = "root";
    for (Step s : a) {
        switch (s) {
            case Step::Premise: out += ".premise"; break;
            case Step::Minor: out += ".minor"; break;
            case Step::Major: out += ".major"; break;
        }
    }
    return out;
}

// ── Constructors ────────────────────────────────────────────────────────

DerivPtr Deriv::hyp(FormulaPtr formula, int label) {
    if (!formula) throw std::invalid_argument("hyp: null formula");
    if (label < 0) throw std::invalid_argument("hyp: negative label");
    auto d = std::shared_ptr<Deriv>(new Deriv());
    d->kind_ = RuleKind::Hyp;
    d->size_symbols_ = static_cast<long long>(formula->print_length());
    d->conclusion_ = std::move(formula);
    d->label_ = label;
    return d;
}

DerivPtr Deriv::intro(int label, FormulaPtr discharged, DerivPtr premise) {
    if (!discharged || !premise) throw std::invalid_argument("intro: null argument");
    if (label <= 0) throw std::invalid_argument("intro: discharge label must be positive");
    auto d = std::shared_ptr<Deriv>(new Deriv());
    d->kind_ = RuleKind::Intro;
    d->conclusion_ = Formula::imp(discharged, premise->conclusion());
    d->node_count_ = 1 + premise->node_count();
    d->height_ = 1 + premise->height();
    d->size_symbols_ =
        premise->size_symbols() + static_cast<long long>(d->conclusion_->print_length()) + 1;
    d->discharged_ = std::move(discharged);
    d->first_ = std::move(premise);
    d->label_ = label;
    return d;
}

DerivPtr Deriv::elim(DerivPtr minor, DerivPtr major) {
    if (!minor || !major) throw std::invalid_argument("elim: null premise");
    const FormulaPtr& mc = major->conclusion();
    if (mc->is_atom() || !formula_equal(mc->antecedent(), minor->conclusion()))
        throw std::invalid_argument(
            "elim: major premise concludes " + print_formula(mc) +
            ", which does not match minor premise " + print_formula(minor->conclusion()));
    return elim_unchecked(std::move(minor), std::move(major), mc->consequent());
}

DerivPtr Deriv::elim_unchecked(DerivPtr minor, DerivPtr major, FormulaPtr conclusion) {
    if (!minor || !major || !conclusion)
        throw std::invalid_argument("elim_unchecked: null argument");
    auto d = std::shared_ptr<Deriv>(new Deriv());
    d->kind_ = RuleKind::Elim;
    d->node_count_ = 1 + minor->node_count() + major->node_count();
    d->height_ = 1 + std::max(minor->height(), major->height());
    d->size_symbols_ =
        minor->size_symbols() + major->size_symbols() +
        static_cast<long long>(conclusion->print_length()) + 1;
    d->conclusion_ = std::move(conclusion);
    d->first_ = std::move(minor);
    d->second_ = std::move(major);
    return d;
}

int Deriv::label() const {
    if (kind_ == RuleKind::Elim) throw std::logic_error("label of an elim node");
    return label_;
}

const FormulaPtr& Deriv::discharged() const {
    if (kind_ != RuleKind::Intro) throw std::logic_error("discharged of a non-intro node");
    return discharged_;
}

const DerivPtr& Deriv::premise() const {
    if (kind_ != RuleKind::Intro) throw std::logic_error("premise of a non-intro node");
    return first_;
}

const DerivPtr& Deriv::minor() const {
    if (kind_ != RuleKind::Elim) throw std::logic_error("minor of a non-elim node");
    return first_;
}

const DerivPtr& Deriv::major() const {
    if (kind_ != RuleKind::Elim) throw std::logic_error("major of a non-elim node");
    return second_;
}

// ── Copying ─────────────────────────────────────────────────────────────

DerivPtr deep_copy(const DerivPtr& d) {
    switch (d->kind()) {
        case RuleKind::Hyp: return Deriv::hyp(d->conclusion(), d->label());
        case RuleKind::Intro:
            return Deriv::intro(d->label(), d->discharged(), deep_copy(d->premise()));
        case RuleKind::Elim:
            return Deriv::elim_unchecked(deep_copy(d->minor()), deep_copy(d->major()),
                                         d->conclusion());
    }
    throw std::logic_error("deep_copy: bad kind");
}

namespace {

DerivPtr copy_fresh_rec(const DerivPtr& d, std::vector<std::pair<int, int>>& renames,
                        int& nextLabel) {
    switch (d->kind()) {
        case RuleKind::Hyp: {
            int label = d->label();
            for (auto it = renames.rbegin(); it != renames.rend(); ++it)
                if (it->first == label) {
                    label = it->second;
                    break;
                }
            return Deriv::hyp(d->conclusion(), label);
        }
        case RuleKind::Intro: {
            int fresh = nextLabel++;
            renames.emplace_back(d->label(), fresh);
            DerivPtr prem = copy_fresh_rec(d->premise(), renames, nextLabel);
            renames.pop_back();
            return Deriv::intro(fresh, d->discharged(), std::move(prem));
        }
        case RuleKind::Elim:
            return Deriv::elim_unchecked(copy_fresh_rec(d->minor(), renames, nextLabel),
                                         copy_fresh_rec(d->major(), renames, nextLabel),
                                         d->conclusion());
    }
    throw std::logic_error("copy_fresh_rec: bad kind");
}

} // namespace

DerivPtr deep_copy_fresh_labels(const DerivPtr& d, int& nextLabel) {
    std::vector<std::pair<int, int>> renames;
    return copy_fresh_rec(d, renames, nextLabel);
}

int max_label(const DerivPtr& d) {
    int best = 0;
    switch (d->kind()) {
        case RuleKind::Hyp: return d->label();
        case RuleKind::Intro:
            best = std::max(d->label(), max_label(d->premise()));
            break;
        case RuleKind::Elim:
            best = std::max(max_label(d->minor()), max_label(d->major()));
            break;
    }
    return best;
}

// ── Checking ────────────────────────────────────────────────────────────

namespace {

void collect_intro_labels(const Deriv* n, OccAddress& path,
                          std::unordered_map<int, int>& labelCount,
                          std::vector<Violation>& out) {
    if (n->is_intro()) {
        if (++labelCount[n->label()] == 2)
            out.push_back({path, "discharge label " + std::to_string(n->label()) +
                                     " is used by more than one intro"});
        path.push_back(Step::Premise);
        collect_intro_labels(n->premise().get(), path, labelCount, out);
        path.pop_back();
    } else if (n->is_elim()) {
        path.push_back(Step::Minor);
        collect_intro_labels(n->minor().get(), path, labelCount, out);
        path.back() = Step::Major;
        collect_intro_labels(n->major().get(), path, labelCount, out);
        path.pop_back();
    }
}

} // namespace

CheckReport check_derivation(const DerivPtr& d) {
    CheckReport report;
    if (!d) {
        report.ok = false;
        report.violations.push_back({{}, "null derivation"});
        return report;
    }
    OccAddress path;
    std::unordered_map<int, int> labelCount;
    collect_intro_labels(d.get(), path, labelCount, report.violations);

    // Main walk: shapes, label binding, aliasing.
    std::unordered_set<const Deriv*> seen;
    std::vector<std::pair<int, FormulaPtr>> env;

    // Recursive lambda keeps the discharge environment as a stack.
    auto walk = [&](auto&& self, const Deriv* n, OccAddress& p) -> void {
        if (!seen.insert(n).second) {
            report.violations.push_back(
                {p, "node object occurs twice (subderivations must be copies)"});
            return;
        }
        switch (n->kind()) {
            case RuleKind::Hyp: {
                int label = n->label();
                if (label > 0) {
                    const FormulaPtr* bound = nullptr;
                    for (auto it = env.rbegin(); it != env.rend(); ++it)
                        if (it->first == label) {
                            bound = &it->second;
                            break;
                        }
                    if (bound) {
                        if (!formula_equal(*bound, n->conclusion()))
                            report.violations.push_back(
                                {p, "hypothesis " + print_formula(n->conclusion()) +
                                        " does not match formula " + print_formula(*bound) +
                                        " discharged under label " + std::to_string(label)});
                    } else if (labelCount.count(label)) {
                        report.violations.push_back(
                            {p, "hypothesis label " + std::to_string(label) +
                                    " refers to an intro that is not on its path"});
                    }
                    // A label unused by any intro leaves the hypothesis open.
                }
                break;
            }
            case RuleKind::Intro: {
                FormulaPtr expect = Formula::imp(n->discharged(), n->premise()->conclusion());
                if (!formula_equal(expect, n->conclusion()))
                    report.violations.push_back(
                        {p, "intro concludes " + print_formula(n->conclusion()) +
                                " instead of " + print_formula(expect)});
                env.emplace_back(n->label(), n->discharged());
                p.push_back(Step::Premise);
                self(self, n->premise().get(), p);
                p.pop_back();
                env.pop_back();
                break;
            }
            case RuleKind::Elim: {
                const FormulaPtr& mc = n->major()->conclusion();
                if (mc->is_atom() || !formula_equal(mc->antecedent(), n->minor()->conclusion()) ||
                    !formula_equal(mc->consequent(), n->conclusion()))
                    report.violations.push_back(
                        {p, "elim with minor " + print_formula(n->minor()->conclusion()) +
                                " and major " + print_formula(mc) + " cannot conclude " +
                                print_formula(n->conclusion())});
                p.push_back(Step::Minor);
                self(self, n->minor().get(), p);
                p.back() = Step::Major;
                self(self, n->major().get(), p);
                p.pop_back();
                break;
            }
        }
    };
    OccAddress p2;
    walk(walk, d.get(), p2);

    report.ok = report.violations.empty();
    return report;
}

// ── Open assumptions ────────────────────────────────────────────────────

namespace {

void opens_rec(const Deriv* n, std::vector<std::pair<int, const FormulaPtr*>>& env,
               std::vector<FormulaPtr>& out) {
    switch (n->kind()) {
        case RuleKind::Hyp: {
            int label = n->label();
            bool bound = false;
            if (label > 0)
                for (auto it = env.rbegin(); it != env.rend(); ++it)
                    if (it->first == label) {
                        bound = true;
                        break;
                    }
            if (!bound) out.push_back(n->conclusion());
            break;
        }
        case RuleKind::Intro:
            env.emplace_back(n->label(), &n->discharged());
            opens_rec(n->premise().get(), env, out);
            env.pop_back();
            break;
        case RuleKind::Elim:
            opens_rec(n->minor().get(), env, out);
            opens_rec(n->major().get(), env, out);
            break;
    }
}

} // namespace

std::vector<FormulaPtr> open_assumptions(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("open_assumptions: null derivation");
    std::vector<FormulaPtr> out;
    std::vector<std::pair<int, const FormulaPtr*>> env;
    opens_rec(d.get(), env, out);
    return out;
}

bool is_closed(const DerivPtr& d) { return open_assumptions(d).empty(); }

Metrics metrics(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("metrics: null derivation");
    return Metrics{d->size_symbols(), d->node_count(), d->height()};
}

// ── ProofView ───────────────────────────────────────────────────────────

ProofView::ProofView(DerivPtr root) : root_(std::move(root)) {
    if (!root_) throw std::invalid_argument("ProofView: null derivation");
    preorder_.reserve(static_cast<std::size_t>(root_->node_count()));
    parent_.reserve(preorder_.capacity());
    level_.reserve(preorder_.capacity());

    struct Item {
        const Deriv* node;
        const Deriv* parent;
        int level;
    };
    std::vector<Item> stack;
    stack.push_back({root_.get(), nullptr, 0});
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        int idx = static_cast<int>(preorder_.size());
        if (!index_.emplace(it.node, idx).second)
            throw std::invalid_argument(
                "ProofView: node object occurs twice (subderivations must be copies)");
        preorder_.push_back(it.node);
        parent_.push_back(it.parent);
        level_.push_back(it.level);
        max_level_ = std::max(max_level_, it.level);
        switch (it.node->kind()) {
            case RuleKind::Hyp: break;
            case RuleKind::Intro:
                stack.push_back({it.node->premise().get(), it.node, it.level + 1});
                break;
            case RuleKind::Elim:
                // Push the major first so the minor is visited first (preorder).
                stack.push_back({it.node->major().get(), it.node, it.level + 1});
                stack.push_back({it.node->minor().get(), it.node, it.level + 1});
                break;
        }
    }
}

const Deriv* ProofView::parent(const Deriv* n) const {
    return parent_[static_cast<std::size_t>(preorder_index(n))];
}

int ProofView::level(const Deriv* n) const {
    return level_[static_cast<std::size_t>(preorder_index(n))];
}

int ProofView::preorder_index(const Deriv* n) const {
    auto it = index_.find(n);
    if (it == index_.end())
        throw std::out_of_range("ProofView: node not part of this derivation");
    return it->second;
}

OccAddress ProofView::address_of(const Deriv* n) const {
    OccAddress rev;
    const Deriv* cur = n;
    const Deriv* par = parent(cur);
    while (par) {
        switch (par->kind()) {
            case RuleKind::Intro: rev.push_back(Step::Premise); break;
            case RuleKind::Elim:
                rev.push_back(par->minor().get() == cur ? Step::Minor : Step::Major);
                break;
            case RuleKind::Hyp: throw std::logic_error("hyp as parent");
        }
        cur = par;
        par = parent(cur);
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

const Deriv* ProofView::resolve(const OccAddress& a) const {
    const Deriv* cur = root_.get();
    for (Step s : a) {
        switch (s) {
            case Step::Premise:
                if (!cur->is_intro()) throw std::out_of_range("address: premise of non-intro");
                cur = cur->premise().get();
                break;
            case Step::Minor:
                if (!cur->is_elim()) throw std::out_of_range("address: minor of non-elim");
                cur = cur->minor().get();
                break;
            case Step::Major:
                if (!cur->is_elim()) throw std::out_of_range("address: major of non-elim");
                cur = cur->major().get();
                break;
        }
    }
    return cur;
}

// ── Subderivations and instances ────────────────────────────────────────

namespace {

void enumerate_rec(const DerivPtr& d, OccAddress& path,
                   std::vector<std::pair<OccAddress, DerivPtr>>& out) {
    out.emplace_back(path, d);
    switch (d->kind()) {
        case RuleKind::Hyp: break;
        case RuleKind::Intro:
            path.push_back(Step::Premise);
            enumerate_rec(d->premise(), path, out);
            path.pop_back();
            break;
        case RuleKind::Elim:
            path.push_back(Step::Minor);
            enumerate_rec(d->minor(), path, out);
            path.back() = Step::Major;
            enumerate_rec(d->major(), path, out);
            path.pop_back();
            break;
    }
}

struct LabelEnv {
    std::vector<std::pair<int, int>> stack;  // original label -> canonical id
    int next = 1;

    int lookup(int label) const {
        for (auto it = stack.rbegin(); it != stack.rend(); ++it)
            if (it->first == label) return it->second;
        return 0;
    }
};

void key_rec(const Deriv* n, LabelEnv& env, std::string& out) {
    switch (n->kind()) {
        case RuleKind::Hyp:
            out += 'H';
            out += std::to_string(env.lookup(n->label()));
            out += '[';
            out += print_formula(n->conclusion());
            out += ']';
            break;
        case RuleKind::Intro: {
            int cid = env.next++;
            env.stack.emplace_back(n->label(), cid);
            out += 'I';
            out += std::to_string(cid);
            out += '[';
            out += print_formula(n->discharged());
            out += "](";
            key_rec(n->premise().get(), env, out);
            out += ')';
            env.stack.pop_back();
            break;
        }
        case RuleKind::Elim:
            out += "E(";
            key_rec(n->minor().get(), env, out);
            out += ',';
            key_rec(n->major().get(), env, out);
            out += ')';
            break;
    }
}

std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

std::uint64_t hash_rec(const Deriv* n, LabelEnv& env) {
    switch (n->kind()) {
        case RuleKind::Hyp:
            return hash_mix(hash_mix(0x11, static_cast<std::uint64_t>(env.lookup(n->label()))),
                            n->conclusion()->hash());
        case RuleKind::Intro: {
            int cid = env.next++;
            env.stack.emplace_back(n->label(), cid);
            std::uint64_t h = hash_rec(n->premise().get(), env);
            env.stack.pop_back();
            return hash_mix(hash_mix(hash_mix(0x22, static_cast<std::uint64_t>(cid)),
                                     n->discharged()->hash()),
                            h);
        }
        case RuleKind::Elim:
            return hash_mix(hash_mix(0x33, hash_rec(n->minor().get(), env)),
                            hash_rec(n->major().get(), env));
    }
    throw std::logic_error("hash_rec: bad kind");
}

DerivPtr canonical_rec(const Deriv* n, LabelEnv& env) {
    switch (n->kind()) {
        case RuleKind::Hyp:
            return Deriv::hyp(n->conclusion(), env.lookup(n->label()));
        case RuleKind::Intro: {
            int cid = env.next++;
            env.stack.emplace_back(n->label(), cid);
            DerivPtr prem = canonical_rec(n->premise().get(), env);
            env.stack.pop_back();
            return Deriv::intro(cid, n->discharged(), std::move(prem));
        }
        case RuleKind::Elim:
            return Deriv::elim_unchecked(canonical_rec(n->minor().get(), env),
                                         canonical_rec(n->major().get(), env), n->conclusion());
    }
    throw std::logic_error("canonical_rec: bad kind");
}

} // namespace

std::vector<std::pair<OccAddress, DerivPtr>> enumerate_subderivations(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("enumerate_subderivations: null derivation");
    std::vector<std::pair<OccAddress, DerivPtr>> out;
    out.reserve(static_cast<std::size_t>(d->node_count()));
    OccAddress path;
    enumerate_rec(d, path, out);
    return out;
}

std::string canonical_key(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("canonical_key: null derivation");
    std::string out;
    LabelEnv env;
    key_rec(d.get(), env, out);
    return out;
}

std::uint64_t canonical_hash(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("canonical_hash: null derivation");
    LabelEnv env;
    return hash_rec(d.get(), env);
}

DerivPtr canonical_subtree(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("canonical_subtree: null derivation");
    LabelEnv env;
    return canonical_rec(d.get(), env);
}

bool instance_equal(const DerivPtr& a, const DerivPtr& b) {
    if (!a || !b) return false;
    if (a->node_count() != b->node_count()) return false;
    return canonical_key(a) == canonical_key(b);
}

int count_instances(const DerivPtr& d, const DerivPtr& s) {
    if (!d || !s) throw std::invalid_argument("count_instances: null derivation");
    const int sn = s->node_count();
    const std::string skey = canonical_key(s);
    int count = 0;
    auto walk = [&](auto&& self, const DerivPtr& n) -> void {
        if (n->node_count() == sn && canonical_key(n) == skey) ++count;
        switch (n->kind()) {
            case RuleKind::Hyp: break;
            case RuleKind::Intro: self(self, n->premise()); break;
            case RuleKind::Elim:
                self(self, n->minor());
                self(self, n->major());
                break;
        }
    };
    walk(walk, d);
    return count;
}

int count_instances_at_level(const ProofView& view, const DerivPtr& s, int level) {
    if (!s) throw std::invalid_argument("count_instances_at_level: null derivation");
    const int sn = s->node_count();
    const std::string skey = canonical_key(s);
    int count = 0;
    for (const Deriv* n : view.preorder()) {
        if (view.level(n) != level || n->node_count() != sn) continue;
        std::string key;
        LabelEnv env;
        key_rec(n, env, key);
        if (key == skey) ++count;
    }
    return count;
}

// ── Greedy discharge ────────────────────────────────────────────────────

namespace {

DerivPtr greedy_rec(const DerivPtr& d, std::vector<std::pair<const FormulaPtr*, int>>& env) {
    switch (d->kind()) {
        case RuleKind::Hyp: {
            for (auto it = env.rbegin(); it != env.rend(); ++it)
                if (formula_equal(*it->first, d->conclusion()))
                    return Deriv::hyp(d->conclusion(), it->second);
            throw std::logic_error("greedy_discharge: unbound hypothesis in closed proof");
        }
        case RuleKind::Intro: {
            env.emplace_back(&d->discharged(), d->label());
            DerivPtr prem = greedy_rec(d->premise(), env);
            env.pop_back();
            return Deriv::intro(d->label(), d->discharged(), std::move(prem));
        }
        case RuleKind::Elim:
            return Deriv::elim_unchecked(greedy_rec(d->minor(), env), greedy_rec(d->major(), env),
                                         d->conclusion());
    }
    throw std::logic_error("greedy_rec: bad kind");
}

} // namespace

DerivPtr greedy_discharge(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("greedy_discharge: null derivation");
    if (!is_closed(d))
        throw std::invalid_argument("greedy_discharge requires a closed proof");
    std::vector<std::pair<const FormulaPtr*, int>> env;
    return greedy_rec(d, env);
}

} // namespace mimp
