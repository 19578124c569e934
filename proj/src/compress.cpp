#include "mimp/compress.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace mimp {

namespace {

struct DagBuilder {
    ProofDag dag;
    std::unordered_map<std::string, int> ids;

    int intern(const std::string& key, ProofDag::Node node) {
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(dag.nodes.size());
        dag.nodes.push_back(std::move(node));
        ids.emplace(key, id);
        return id;
    }

    // Returns the node id and the labels of the subtree's locally-open
    // hypothesis occurrences (preorder).  The labels never enter the dag;
    // they only drive capture-index computation.
    std::pair<int, std::vector<int>> encode(const DerivPtr& d) {
        switch (d->kind()) {
            case RuleKind::Hyp: {
                ProofDag::Node n;
                n.kind = RuleKind::Hyp;
                n.formula = d->conclusion();
                std::string key = "H|" + print_formula(n.formula);
                int id = intern(key, std::move(n));
                return {id, {d->label()}};
            }
            case RuleKind::Intro: {
                auto [pid, pslots] = encode(d->premise());
                ProofDag::Node n;
                n.kind = RuleKind::Intro;
                n.discharged = d->discharged();
                n.premise = pid;
                std::vector<int> slots;
                std::string caps;
                for (std::size_t i = 0; i < pslots.size(); ++i) {
                    if (pslots[i] == d->label()) {
                        n.captures.push_back(static_cast<int>(i));
                        if (!caps.empty()) caps += ',';
                        caps += std::to_string(i);
                    } else {
                        slots.push_back(pslots[i]);
                    }
                }
                std::string key =
                    "I|" + print_formula(n.discharged) + "|" + std::to_string(pid) + "|" + caps;
                int id = intern(key, std::move(n));
                return {id, std::move(slots)};
            }
            case RuleKind::Elim: {
                auto [mi, mislots] = encode(d->minor());
                auto [ma, maslots] = encode(d->major());
                ProofDag::Node n;
                n.kind = RuleKind::Elim;
                n.minor = mi;
                n.major = ma;
                int id = intern("E|" + std::to_string(mi) + "|" + std::to_string(ma),
                                std::move(n));
                mislots.insert(mislots.end(), maslots.begin(), maslots.end());
                return {id, std::move(mislots)};
            }
        }
        throw std::logic_error("encode: bad kind");
    }
};

struct Bind {
    int slot = 0;  // index into the target node's open-slot sequence
    int label = 0;
    FormulaPtr formula;
};

struct DagReader {
    const ProofDag& g;
    std::vector<long long> openCount;
    int nextLabel = 1;

    explicit DagReader(const ProofDag& dag) : g(dag) {}

    [[noreturn]] static void bad(const std::string& what) {
        throw std::invalid_argument("from_dag: " + what);
    }

    void validate() {
        if (g.nodes.empty()) bad("empty node list");
        if (g.root < 0 || g.root >= g.size()) bad("root id out of range");
        for (int i = 0; i < g.size(); ++i) {
            const ProofDag::Node& n = g.nodes[static_cast<std::size_t>(i)];
            switch (n.kind) {
                case RuleKind::Hyp:
                    if (!n.formula) bad("hyp node " + std::to_string(i) + " has no formula");
                    break;
                case RuleKind::Intro:
                    if (!n.discharged)
                        bad("intro node " + std::to_string(i) + " has no discharged formula");
                    if (n.premise < 0 || n.premise >= g.size())
                        bad("intro node " + std::to_string(i) + " has a bad premise id");
                    break;
                case RuleKind::Elim:
                    if (n.minor < 0 || n.minor >= g.size() || n.major < 0 ||
                        n.major >= g.size())
                        bad("elim node " + std::to_string(i) + " has a bad premise id");
                    break;
            }
        }
        // Cycle check plus per-node open-slot counts, reachable part only.
        openCount.assign(static_cast<std::size_t>(g.size()), -1);
        std::vector<int> color(static_cast<std::size_t>(g.size()), 0);  // 0 new, 1 open, 2 done
        std::vector<std::pair<int, bool>> stack{{g.root, false}};
        while (!stack.empty()) {
            auto [id, leaving] = stack.back();
            stack.pop_back();
            const ProofDag::Node& n = g.nodes[static_cast<std::size_t>(id)];
            if (leaving) {
                color[static_cast<std::size_t>(id)] = 2;
                switch (n.kind) {
                    case RuleKind::Hyp: openCount[static_cast<std::size_t>(id)] = 1; break;
                    case RuleKind::Intro: {
                        long long pc = openCount[static_cast<std::size_t>(n.premise)];
                        int prev = -1;
                        for (int c : n.captures) {
                            if (c <= prev)
                                bad("captures of node " + std::to_string(id) +
                                    " are not strictly increasing");
                            if (c < 0 || c >= pc)
                                bad("capture index out of range in node " +
                                    std::to_string(id));
                            prev = c;
                        }
                        openCount[static_cast<std::size_t>(id)] =
                            pc - static_cast<long long>(n.captures.size());
                        break;
                    }
                    case RuleKind::Elim:
                        openCount[static_cast<std::size_t>(id)] =
                            openCount[static_cast<std::size_t>(n.minor)] +
                            openCount[static_cast<std::size_t>(n.major)];
                        break;
                }
                continue;
            }
            if (color[static_cast<std::size_t>(id)] == 2) continue;
            if (color[static_cast<std::size_t>(id)] == 1)
                bad("node graph is cyclic at node " + std::to_string(id));
            color[static_cast<std::size_t>(id)] = 1;
            stack.push_back({id, true});
            switch (n.kind) {
                case RuleKind::Hyp: break;
                case RuleKind::Intro: stack.push_back({n.premise, false}); break;
                case RuleKind::Elim:
                    stack.push_back({n.minor, false});
                    stack.push_back({n.major, false});
                    break;
            }
        }
    }

    DerivPtr materialize(int id, const std::vector<Bind>& binds) {
        const ProofDag::Node& n = g.nodes[static_cast<std::size_t>(id)];
        switch (n.kind) {
            case RuleKind::Hyp: {
                if (binds.empty()) return Deriv::hyp(n.formula, 0);
                const Bind& b = binds.front();
                if (!formula_equal(b.formula, n.formula))
                    bad("capture formula mismatch at node " + std::to_string(id) + ": " +
                        print_formula(b.formula) + " vs " + print_formula(n.formula));
                return Deriv::hyp(n.formula, b.label);
            }
            case RuleKind::Intro: {
                const int label = nextLabel++;
                const long long pc = openCount[static_cast<std::size_t>(n.premise)];
                std::vector<Bind> sub;
                sub.reserve(n.captures.size() + binds.size());
                std::size_t ci = 0, bi = 0;
                int passed = 0;  // premise slots not captured here, so far
                for (long long idx = 0; idx < pc; ++idx) {
                    if (ci < n.captures.size() && n.captures[ci] == idx) {
                        sub.push_back({static_cast<int>(idx), label, n.discharged});
                        ++ci;
                        continue;
                    }
                    if (bi < binds.size() && binds[bi].slot == passed) {
                        sub.push_back({static_cast<int>(idx), binds[bi].label,
                                       binds[bi].formula});
                        ++bi;
                    }
                    ++passed;
                }
                DerivPtr premise = materialize(n.premise, sub);
                return Deriv::intro(label, n.discharged, std::move(premise));
            }
            case RuleKind::Elim: {
                const long long mc = openCount[static_cast<std::size_t>(n.minor)];
                std::vector<Bind> mib, mab;
                for (const Bind& b : binds) {
                    if (b.slot < mc) {
                        mib.push_back(b);
                    } else {
                        Bind shifted = b;
                        shifted.slot = static_cast<int>(b.slot - mc);
                        mab.push_back(shifted);
                    }
                }
                DerivPtr minor = materialize(n.minor, mib);
                DerivPtr major = materialize(n.major, mab);
                return Deriv::elim(std::move(minor), std::move(major));
            }
        }
        throw std::logic_error("materialize: bad kind");
    }
};

} // namespace

ProofDag to_dag(const DerivPtr& d) {
    if (!d) throw std::invalid_argument("to_dag: null derivation");
    DagBuilder b;
    auto [rootId, slots] = b.encode(d);
    (void)slots;
    b.dag.root = rootId;
    b.dag.refcount.assign(b.dag.nodes.size(), 0);
    for (const ProofDag::Node& n : b.dag.nodes) {
        switch (n.kind) {
            case RuleKind::Hyp: break;
            case RuleKind::Intro: ++b.dag.refcount[static_cast<std::size_t>(n.premise)]; break;
            case RuleKind::Elim:
                ++b.dag.refcount[static_cast<std::size_t>(n.minor)];
                ++b.dag.refcount[static_cast<std::size_t>(n.major)];
                break;
        }
    }
    ++b.dag.refcount[static_cast<std::size_t>(rootId)];
    return b.dag;
}

DerivPtr from_dag(const ProofDag& g) {
    DagReader r(g);
    r.validate();
    return r.materialize(g.root, {});
}

} // namespace mimp
