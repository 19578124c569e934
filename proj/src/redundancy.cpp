#include "mimp/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace mimp {

long long ipow(long long base, int exp) {
    if (exp < 0) throw std::invalid_argument("ipow: negative exponent");
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r != 0 &&
            std::abs(r) > std::numeric_limits<long long>::max() / std::abs(base))
            throw std::overflow_error("ipow: overflow");
        r *= base;
    }
    return r;
}

LevelHistogram level_histogram(const EMappedProof& e) {
    if (!e.view) throw std::invalid_argument("level_histogram: empty mapped proof");
    LevelHistogram h;
    for (const Deriv* n : e.view->preorder()) {
        auto it = e.map.find(n);
        if (it == e.map.end()) continue;
        h.cells[{it->second, e.view->level(n)}].push_back(n);
        ++h.mappedOccurrences;
    }
    return h;
}

TUDPartition partition_tud(const std::vector<const Deriv*>& cell) {
    if (cell.empty()) throw std::invalid_argument("partition_tud: empty cell");
    TUDPartition p;
    for (const Deriv* n : cell) {
        switch (n->kind()) {
            case RuleKind::Hyp: p.top.push_back(n); break;
            case RuleKind::Intro: p.uno.push_back(n); break;
            case RuleKind::Elim: p.duo.push_back(n); break;
        }
    }
    return p;
}

namespace {

std::string branch_signature(const Branch& b) {
    std::string s;
    for (const Deriv* n : b.elements) {
        s += print_formula(n->conclusion());
        s += '|';
    }
    return s;
}

} // namespace

std::optional<SpreadResult> spread_check(const EMappedProof& e, const Branch& b, int p,
                                         int heightCoeff) {
    if (!e.view) throw std::invalid_argument("spread_check: empty mapped proof");
    if (p < 1) throw std::invalid_argument("spread_check: p must be >= 1");
    const long long m = e.tree.size();
    if (e.proof->height() > heightCoeff * m)
        throw std::invalid_argument(
            "spread_check: proof height " + std::to_string(e.proof->height()) +
            " exceeds " + std::to_string(heightCoeff) + " * m = " +
            std::to_string(heightCoeff * m));

    const std::string want = branch_signature(b);
    std::vector<Branch> all = enumerate_branches(*e.view);
    std::vector<const Branch*> instances;
    for (const Branch& br : all)
        if (branch_signature(br) == want) instances.push_back(&br);

    if (static_cast<long long>(instances.size()) <= ipow(m, p)) return std::nullopt;

    std::map<int, std::vector<const Deriv*>> byLevel;
    for (const Branch* br : instances) {
        BranchSplit s = split_branch(*e.view, *br);
        byLevel[e.view->level(s.minimal)].push_back(s.minimal);
    }
    int bestLevel = -1;
    std::size_t bestCount = 0;
    for (const auto& [lvl, occs] : byLevel) {
        if (occs.size() > bestCount) {
            bestCount = occs.size();
            bestLevel = lvl;
        }
    }
    SpreadResult r;
    r.level = bestLevel;
    r.count = static_cast<int>(bestCount);
    r.minimalOccs = byLevel[bestLevel];
    std::sort(r.minimalOccs.begin(), r.minimalOccs.end(), [&](const Deriv* a, const Deriv* c) {
        return e.view->preorder_index(a) < e.view->preorder_index(c);
    });
    r.threshold = ipow(m, p - 1);
    r.meetsThreshold = static_cast<long long>(bestCount) >= r.threshold;
    return r;
}

PumpResult pump_subderivation(const EMappedProof& e, const Branch& b,
                              const std::vector<const Deriv*>& instances) {
    if (!e.view) throw std::invalid_argument("pump_subderivation: empty mapped proof");
    if (instances.empty())
        throw std::invalid_argument("pump_subderivation: no instance occurrences");
    const int lvl = e.view->level(instances.front());
    for (const Deriv* n : instances) {
        if (!e.view->contains(n))
            throw std::invalid_argument("pump_subderivation: instance outside the proof");
        if (e.view->level(n) != lvl)
            throw std::invalid_argument("pump_subderivation: instances span several levels");
    }
    const Deriv* endRaw = b.end();
    DerivPtr sub(e.proof, endRaw);
    PumpResult r;
    r.subderivation = canonical_subtree(sub);
    r.level = e.view->level(endRaw);
    r.multiplicity = count_instances_at_level(*e.view, sub, r.level);
    return r;
}

RedundancyReport find_redundant(const EMappedProof& e, int p, int q, int heightCoeff,
                                const std::string& caseFilter) {
    if (!e.view) throw std::invalid_argument("find_redundant: empty mapped proof");
    if (q < 1) throw std::invalid_argument("find_redundant: q must be >= 1");
    if (p < q + 3) throw std::invalid_argument("find_redundant: requires p >= q + 3");
    if (!caseFilter.empty() && caseFilter != "Top" && caseFilter != "Uno" &&
        caseFilter != "Duo")
        throw std::invalid_argument("find_redundant: unknown case filter " + caseFilter);

    RedundancyReport rep;
    rep.p = p;
    rep.q = q;
    rep.m = e.tree.size();
    rep.sizeThreshold = ipow(rep.m, p);
    rep.heightBound = heightCoeff * ipow(rep.m, q);
    rep.multiplicityThreshold = q == 1 ? ipow(rep.m, p - 3) : ipow(rep.m, p - (q + 3));
    rep.notes.push_back("levels count depth below the conclusion; the root sits at level 0");

    rep.hypothesesMet = true;
    if (e.proof->size_symbols() <= rep.sizeThreshold) {
        rep.hypothesesMet = false;
        rep.unmetReason = "proof size " + std::to_string(e.proof->size_symbols()) +
                          " does not exceed m^p = " + std::to_string(rep.sizeThreshold);
    } else if (e.proof->height() > rep.heightBound) {
        rep.hypothesesMet = false;
        rep.unmetReason = "proof height " + std::to_string(e.proof->height()) +
                          " exceeds the bound " + std::to_string(rep.heightBound);
    }

    const ProofView& view = *e.view;
    BranchAnalysis ba = analyze_branches(view);
    LevelHistogram hist = level_histogram(e);

    struct CellRef {
        int vertex, level;
        const std::vector<const Deriv*>* occs;
    };
    std::vector<CellRef> cells;
    cells.reserve(hist.cells.size());
    for (const auto& [key, occs] : hist.cells) cells.push_back({key.first, key.second, &occs});
    std::stable_sort(cells.begin(), cells.end(), [](const CellRef& a, const CellRef& b) {
        return a.occs->size() > b.occs->size();
    });

    const long long bigCell = (q == 1 && p >= 2) ? ipow(rep.m, p - 2) : -1;

    std::unordered_map<const Deriv*, std::uint64_t> hashMemo;
    auto hashOf = [&](const Deriv* n) -> std::uint64_t {
        auto it = hashMemo.find(n);
        if (it != hashMemo.end()) return it->second;
        std::uint64_t h = canonical_hash(DerivPtr(e.proof, n));
        hashMemo.emplace(n, h);
        return h;
    };

    struct Candidate {
        DerivPtr sub;
        long long multiplicity = 0;
        int level = 0;
        int cellVertex = -1, cellLevel = -1;
        std::string caseTag;
        bool valid = false;
    };
    Candidate best;

    auto commit = [&](const Candidate& c, bool found) {
        rep.found = found;
        rep.subderivation = c.sub;
        rep.multiplicity = c.multiplicity;
        rep.level = c.level;
        rep.cellVertex = c.cellVertex;
        rep.cellLevel = c.cellLevel;
        rep.caseTag = c.caseTag;
    };

    for (const CellRef& cell : cells) {
        if (bigCell >= 0 && static_cast<long long>(cell.occs->size()) > bigCell)
            rep.notes.push_back("cell (vertex " + std::to_string(cell.vertex) + ", level " +
                                std::to_string(cell.level) + ") holds " +
                                std::to_string(cell.occs->size()) +
                                " occurrences, above m^(p-2) = " + std::to_string(bigCell));
        TUDPartition parts = partition_tud(*cell.occs);
        struct CaseRef {
            const std::vector<const Deriv*>* occs;
            const char* tag;
            int pri;
        };
        std::vector<CaseRef> caseList = {
            {&parts.top, "Top", 0}, {&parts.uno, "Uno", 1}, {&parts.duo, "Duo", 2}};
        std::sort(caseList.begin(), caseList.end(), [](const CaseRef& a, const CaseRef& b) {
            if (a.occs->size() != b.occs->size()) return a.occs->size() > b.occs->size();
            return a.pri < b.pri;
        });

        for (const CaseRef& cr : caseList) {
            if (cr.occs->empty()) continue;
            if (!caseFilter.empty() && caseFilter != cr.tag) continue;

            Candidate c;
            c.cellVertex = cell.vertex;
            c.cellLevel = cell.level;
            c.caseTag = cr.tag;
            if (cr.tag == std::string("Top")) {
                c.sub = Deriv::hyp(cr.occs->front()->conclusion(), 0);
                c.level = cell.level;
                c.multiplicity = count_instances_at_level(view, c.sub, c.level);
            } else {
                // Lift each occurrence to the end of its branch and take the
                // most repeated subtree class hanging there.
                std::map<std::tuple<std::uint64_t, int, int>, std::vector<const Deriv*>>
                    groups;
                for (const Deriv* occ : *cr.occs) {
                    int bi = ba.branchOf.at(occ);
                    const Deriv* end = ba.branches[static_cast<std::size_t>(bi)].end();
                    groups[{hashOf(end), end->node_count(), view.level(end)}].push_back(end);
                }
                const std::vector<const Deriv*>* bestGroup = nullptr;
                const Deriv* bestRep = nullptr;
                for (const auto& [key, ends] : groups) {
                    const Deriv* rep0 = *std::min_element(
                        ends.begin(), ends.end(), [&](const Deriv* a, const Deriv* b2) {
                            return view.preorder_index(a) < view.preorder_index(b2);
                        });
                    if (!bestGroup || ends.size() > bestGroup->size() ||
                        (ends.size() == bestGroup->size() &&
                         view.preorder_index(rep0) < view.preorder_index(bestRep))) {
                        bestGroup = &ends;
                        bestRep = rep0;
                    }
                }
                DerivPtr endSub(e.proof, bestRep);
                c.sub = canonical_subtree(endSub);
                c.level = view.level(bestRep);
                c.multiplicity = count_instances_at_level(view, endSub, c.level);
            }
            c.valid = true;
            if (!best.valid || c.multiplicity > best.multiplicity) best = c;
            if (c.multiplicity >= rep.multiplicityThreshold) {
                commit(c, true);
                return rep;
            }
        }
    }
    if (best.valid) commit(best, false);
    return rep;
}

BruteForceResult brute_force_max_repeats(const DerivPtr& d, bool perLevel, int nodeLimit) {
    if (!d) throw std::invalid_argument("brute_force_max_repeats: null derivation");
    if (d->node_count() > nodeLimit)
        throw std::invalid_argument("brute_force_max_repeats: derivation has " +
                                    std::to_string(d->node_count()) + " nodes, limit " +
                                    std::to_string(nodeLimit));
    ProofView view(d);

    struct Bucket {
        int total = 0;
        std::map<int, int> perLevelCounts;
        const Deriv* exemplar = nullptr;
        int sizeNodes = 0;
    };
    std::map<std::pair<std::uint64_t, int>, Bucket> buckets;
    for (const Deriv* n : view.preorder()) {
        Bucket& bk = buckets[{canonical_hash(DerivPtr(d, n)), n->node_count()}];
        if (!bk.exemplar) {
            bk.exemplar = n;
            bk.sizeNodes = n->node_count();
        }
        ++bk.total;
        ++bk.perLevelCounts[view.level(n)];
    }

    const Bucket* win = nullptr;
    int winCount = 0, winLevel = -1;
    for (const auto& [key, bk] : buckets) {
        int count = bk.total, lvl = -1;
        if (perLevel) {
            count = 0;
            for (const auto& [l, c] : bk.perLevelCounts)
                if (c > count) {
                    count = c;
                    lvl = l;
                }
        }
        bool better;
        if (!win)
            better = true;
        else if (count != winCount)
            better = count > winCount;
        else if (bk.sizeNodes != win->sizeNodes)
            better = bk.sizeNodes > win->sizeNodes;
        else
            better = view.preorder_index(bk.exemplar) < view.preorder_index(win->exemplar);
        if (better) {
            win = &bk;
            winCount = count;
            winLevel = lvl;
        }
    }

    BruteForceResult r;
    if (!win) return r;
    DerivPtr sub(d, win->exemplar);
    r.subderivation = canonical_subtree(sub);
    r.sizeNodes = win->sizeNodes;
    if (perLevel) {
        r.level = winLevel;
        r.multiplicity = count_instances_at_level(view, sub, winLevel);
    } else {
        r.level = -1;
        r.multiplicity = count_instances(d, sub);
    }
    return r;
}

GrowthFit growth_fit(const std::vector<std::pair<double, double>>& points) {
    std::vector<std::pair<double, double>> pts = points;
    std::sort(pts.begin(), pts.end());
    std::set<double> xs;
    for (const auto& [x, y] : pts) {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("growth_fit: points must be strictly positive");
        xs.insert(x);
    }
    if (xs.size() < 3)
        throw std::invalid_argument("growth_fit: needs at least 3 points with distinct m");

    const int n = static_cast<int>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    GrowthFit g;
    g.points = pts;
    g.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    g.constant = std::exp((sy - g.exponent * sx) / n);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lx1 = std::log(pts[i].first), lx2 = std::log(pts[i + 1].first);
        if (lx2 > lx1)
            g.windowSlopes.push_back(
                (std::log(pts[i + 1].second) - std::log(pts[i].second)) / (lx2 - lx1));
    }
    double mn = g.exponent, mx = g.exponent;
    if (!g.windowSlopes.empty()) {
        mn = *std::min_element(g.windowSlopes.begin(), g.windowSlopes.end());
        mx = *std::max_element(g.windowSlopes.begin(), g.windowSlopes.end());
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "size grows like %.3g * m^%.2f over the sampled range (window slopes "
                  "%.2f..%.2f); a finite sample cannot certify an asymptotic rate",
                  g.constant, g.exponent, mn, mx);
    g.verdict = buf;
    return g;
}

} // namespace mimp
