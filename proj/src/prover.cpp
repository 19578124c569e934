#include "mimp/prover.hpp"

#include <functional>
#include <random>
#include <stdexcept>

#include "mimp/redundancy.hpp"
#include "mimp/transform.hpp"

namespace mimp {

namespace {

struct BudgetHit {};

// Contraction-free backward search (G4ip style, implicational fragment).
// Right implication and the atomic-antecedent left rule are invertible and
// applied committed; the nested-antecedent left rule backtracks over
// context entries.  Terminates without loop checking.
struct Searcher {
    long long budget;
    long long calls = 0;

    struct CtxEntry {
        FormulaPtr formula;
        int label;
    };

    DerivPtr prove(const FormulaPtr& goal, std::vector<CtxEntry>& ctx, int& next) {
        if (++calls > budget) throw BudgetHit{};

        if (goal->is_imp()) {
            const int x = next++;
            ctx.push_back({goal->antecedent(), x});
            DerivPtr sub = prove(goal->consequent(), ctx, next);
            ctx.pop_back();
            if (!sub) return nullptr;
            return Deriv::intro(x, goal->antecedent(), std::move(sub));
        }

        for (std::size_t i = ctx.size(); i-- > 0;)
            if (formula_equal(ctx[i].formula, goal))
                return Deriv::hyp(ctx[i].formula, ctx[i].label);

        // A -> B in context with atomic A also in context: descend to B.
        for (std::size_t i = ctx.size(); i-- > 0;) {
            const FormulaPtr f = ctx[i].formula;
            if (!f->is_imp() || !f->antecedent()->is_atom()) continue;
            std::size_t j = ctx.size();
            for (std::size_t t = ctx.size(); t-- > 0;)
                if (formula_equal(ctx[t].formula, f->antecedent())) {
                    j = t;
                    break;
                }
            if (j == ctx.size()) continue;
            const int xLab = ctx[i].label, jLab = ctx[j].label;
            const int z = next++;
            std::vector<CtxEntry> ctx2 = ctx;
            ctx2.erase(ctx2.begin() + static_cast<std::ptrdiff_t>(i));
            ctx2.push_back({f->consequent(), z});
            DerivPtr t0 = prove(goal, ctx2, next);
            if (!t0) return nullptr;
            DerivPtr rep =
                Deriv::elim(Deriv::hyp(f->antecedent(), jLab), Deriv::hyp(f, xLab));
            return substitute_hyp(t0, z, rep, next);
        }

        // (C -> D) -> B in context: prove C -> D with D -> B available, then
        // continue with B.
        for (std::size_t i = ctx.size(); i-- > 0;) {
            const FormulaPtr f = ctx[i].formula;
            if (!f->is_imp() || !f->antecedent()->is_imp()) continue;
            const FormulaPtr CD = f->antecedent();
            const FormulaPtr C = CD->antecedent(), D = CD->consequent();
            const FormulaPtr B = f->consequent();
            const int xLab = ctx[i].label;

            const int w = next++;
            std::vector<CtxEntry> ctx1 = ctx;
            ctx1.erase(ctx1.begin() + static_cast<std::ptrdiff_t>(i));
            ctx1.push_back({Formula::imp(D, B), w});
            DerivPtr t1 = prove(CD, ctx1, next);
            if (!t1) continue;

            const int z = next++;
            std::vector<CtxEntry> ctx2 = ctx;
            ctx2.erase(ctx2.begin() + static_cast<std::ptrdiff_t>(i));
            ctx2.push_back({B, z});
            DerivPtr t2 = prove(goal, ctx2, next);
            if (!t2) continue;

            const int ld = next++, lc = next++;
            DerivPtr dToB = Deriv::intro(
                ld, D,
                Deriv::elim(Deriv::intro(lc, C, Deriv::hyp(D, ld)), Deriv::hyp(f, xLab)));
            DerivPtr t1s = substitute_hyp(t1, w, dToB, next);
            return substitute_hyp(t2, z, Deriv::elim(std::move(t1s), Deriv::hyp(f, xLab)),
                                  next);
        }

        return nullptr;
    }
};

} // namespace

ProverResult decide_and_prove(const FormulaPtr& goal, long long budget) {
    if (!goal) throw std::invalid_argument("decide_and_prove: null formula");
    if (budget < 1) throw std::invalid_argument("decide_and_prove: budget must be >= 1");

    ProverResult r;
    Searcher s{budget};
    std::vector<Searcher::CtxEntry> ctx;
    int next = 1;
    DerivPtr t;
    try {
        t = s.prove(goal, ctx, next);
    } catch (const BudgetHit&) {
        r.status = ProverStatus::BudgetExceeded;
        r.nodesExplored = s.calls;
        return r;
    }
    r.nodesExplored = s.calls;
    if (!t) {
        r.status = ProverStatus::NotProvable;
        return r;
    }

    CheckReport cr = check_derivation(t);
    if (!cr.ok)
        throw std::logic_error("decide_and_prove: extracted derivation is invalid: " +
                               cr.violations.front().reason);
    t = expand(normalize(t).result);
    cr = check_derivation(t);
    if (!cr.ok)
        throw std::logic_error("decide_and_prove: post-processed derivation is invalid: " +
                               cr.violations.front().reason);
    r.status = ProverStatus::Proved;
    r.proof = std::move(t);
    return r;
}

std::vector<FormulaPtr> gen_random_formulas(int maxNodes, int count, std::uint64_t seed) {
    if (maxNodes < 1)
        throw std::invalid_argument("gen_random_formulas: size bound must be >= 1");
    if (maxNodes > 63)
        throw std::invalid_argument(
            "gen_random_formulas: size bound above 63 is unsupported (shape counts "
            "overflow)");
    if (count < 0) throw std::invalid_argument("gen_random_formulas: negative count");

    static const char* const kAtoms[] = {"a", "b", "c", "d", "e"};
    std::mt19937_64 rng(seed);

    const int kMax = (maxNodes + 1) / 2;  // leaf count bound
    std::vector<unsigned long long> shapes(static_cast<std::size_t>(kMax) + 1, 0);
    shapes[1] = 1;
    for (int k = 2; k <= kMax; ++k)
        for (int i = 1; i < k; ++i)
            shapes[static_cast<std::size_t>(k)] +=
                shapes[static_cast<std::size_t>(i)] * shapes[static_cast<std::size_t>(k - i)];

    std::function<FormulaPtr(int)> gen = [&](int k) -> FormulaPtr {
        if (k == 1) {
            std::uniform_int_distribution<int> pick(0, 4);
            return Formula::atom(kAtoms[pick(rng)]);
        }
        std::uniform_int_distribution<unsigned long long> pick(
            0, shapes[static_cast<std::size_t>(k)] - 1);
        const unsigned long long u = pick(rng);
        unsigned long long acc = 0;
        for (int i = 1; i < k; ++i) {
            acc += shapes[static_cast<std::size_t>(i)] *
                   shapes[static_cast<std::size_t>(k - i)];
            if (u < acc) {
                FormulaPtr left = gen(i);
                FormulaPtr right = gen(k - i);
                return Formula::imp(std::move(left), std::move(right));
            }
        }
        throw std::logic_error("gen_random_formulas: split selection failed");
    };

    std::vector<FormulaPtr> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uniform_int_distribution<int> half(0, (maxNodes - 1) / 2);
    for (int c = 0; c < count; ++c) out.push_back(gen(half(rng) + 1));
    return out;
}

std::vector<FamilyMember> gen_redundant_family(const FamilySpec& spec) {
    if (spec.family != "blowup")
        throw std::invalid_argument("gen_redundant_family: unknown family " + spec.family);
    if (spec.m < 2) throw std::invalid_argument("gen_redundant_family: m must be >= 2");
    if (spec.p < 1) throw std::invalid_argument("gen_redundant_family: p must be >= 1");
    if (spec.q < 1) throw std::invalid_argument("gen_redundant_family: q must be >= 1");
    if (spec.heightCoeff < 1)
        throw std::invalid_argument("gen_redundant_family: height coefficient must be >= 1");

    const FormulaPtr a = Formula::atom("a");
    const FormulaPtr bb = Formula::imp(a, a);
    const FormulaPtr gf = Formula::imp(bb, Formula::imp(bb, bb));
    const FormulaPtr base = Formula::imp(gf, bb);

    std::vector<FormulaPtr> padded{base};
    for (int i = spec.m; i >= 1; --i)
        padded.push_back(Formula::imp(Formula::atom("p" + std::to_string(i)), padded.back()));
    const FormulaPtr alpha = padded.back();
    const long long mPrime = static_cast<long long>(alpha->node_count());

    long long sizeThreshold = 0, heightBound = 0;
    try {
        sizeThreshold = ipow(mPrime, spec.p);
        heightBound = static_cast<long long>(spec.heightCoeff) * ipow(mPrime, spec.q);
    } catch (const std::overflow_error&) {
        throw FamilyInfeasible("gen_redundant_family: thresholds overflow for m=" +
                               std::to_string(spec.m) + ", p=" + std::to_string(spec.p) +
                               ", q=" + std::to_string(spec.q));
    }

    const long long lenA = static_cast<long long>(a->print_length());
    const long long lenB = static_cast<long long>(bb->print_length());
    const long long unitInc =
        lenA + static_cast<long long>(gf->print_length()) +
        (static_cast<long long>(Formula::imp(bb, bb)->print_length()) + 1) + (lenB + 1) +
        (lenA + 1) + (lenB + 1);
    long long wrapExtra = 0;
    for (const FormulaPtr& f : padded)
        wrapExtra += static_cast<long long>(f->print_length()) + 1;

    int d = -1;
    {
        long long sw = lenA + lenB + 1;  // identity unit
        for (int cand = 0; cand <= 18; ++cand) {
            bool ok = sw + wrapExtra > sizeThreshold;
            if (ok && spec.p <= 2) ok = (1LL << cand) - 2 > sizeThreshold;
            if (ok) {
                d = cand;
                break;
            }
            sw = 2 * sw + unitInc;
        }
    }
    if (d < 0)
        throw FamilyInfeasible(
            "gen_redundant_family: no duplication depth up to 18 meets the size "
            "threshold for m=" +
            std::to_string(spec.m) + ", p=" + std::to_string(spec.p));
    const long long height = 4LL * d + 2 + spec.m;
    if (height > heightBound)
        throw FamilyInfeasible("gen_redundant_family: height " + std::to_string(height) +
                               " at the required depth " + std::to_string(d) +
                               " exceeds the bound " + std::to_string(heightBound));

    int next = 1;
    const int hLab = next++;
    std::function<DerivPtr(int)> build = [&](int depth) -> DerivPtr {
        if (depth == 0) {
            const int x = next++;
            return Deriv::intro(x, a, Deriv::hyp(a, x));
        }
        const int x = next++;
        DerivPtr inner1 = build(depth - 1);
        DerivPtr inner2 = build(depth - 1);
        DerivPtr e3 = Deriv::elim(std::move(inner2), Deriv::hyp(gf, hLab));
        DerivPtr e2 = Deriv::elim(std::move(inner1), std::move(e3));
        DerivPtr e1 = Deriv::elim(Deriv::hyp(a, x), std::move(e2));
        return Deriv::intro(x, a, std::move(e1));
    };

    DerivPtr proof = Deriv::intro(hLab, gf, build(d));
    for (int i = spec.m; i >= 1; --i)
        proof = Deriv::intro(next++, Formula::atom("p" + std::to_string(i)),
                             std::move(proof));

    long long sw = lenA + lenB + 1;
    for (int i = 0; i < d; ++i) sw = 2 * sw + unitInc;
    if (!formula_equal(proof->conclusion(), alpha) ||
        proof->size_symbols() != sw + wrapExtra || proof->height() != height)
        throw std::logic_error("gen_redundant_family: construction arithmetic mismatch");
    if (!is_normal(proof) || !is_expanded(proof))
        throw std::logic_error("gen_redundant_family: construction is not in normal "
                               "expanded form");

    FamilyMember member;
    member.formula = alpha;
    member.proof = std::move(proof);
    member.depth = d;
    member.mPrime = mPrime;
    std::vector<FamilyMember> out;
    out.push_back(std::move(member));
    return out;
}

} // namespace mimp
