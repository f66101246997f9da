#pragma once

// Monochromatic clique search for covering (possibly overlapping) relation
// families: the recursive cutting argument with a most-populous cell, the
// minimum-index coloring of the untouched outside points, and both branches
// explored; an exhaustive backtracking search is the base case and the
// completeness fallback, so found/NOT_FOUND matches the brute-force oracle
// at desk scale.

#include <algorithm>
#include <optional>
#include <vector>

#include "sareg/cutting.hpp"
#include "sareg/regularity.hpp"
#include "sareg/relation.hpp"

namespace sareg {

struct CliqueQuery {
    std::vector<std::size_t> targets;  // clique size per relation, each >= 2
    RelationFamily family;             // covering on the query's point set

    void validate() const {
        if (targets.size() != family.size())
            throw input_error("CliqueQuery: one target per relation required");
        for (std::size_t p : targets)
            if (p < 2) throw input_error("CliqueQuery: targets must be at least 2");
        if (!family.covering) throw input_error("CliqueQuery: family must declare covering");
    }
};

struct MonoClique {
    std::size_t relation = 0;
    std::vector<std::size_t> clique;  // point indices
};

namespace detail {

// Lexicographically-first clique of size k inside `universe` restricted to
// one relation, by direct backtracking on relation_holds.
inline bool mono_clique_rec(const PointSet& pts, const SemiAlgebraicRelation& rel,
                            const std::vector<std::size_t>& universe, std::size_t k,
                            std::size_t start, std::vector<std::size_t>& cur) {
    if (cur.size() == k) return true;
    for (std::size_t i = start; i < universe.size(); ++i) {
        if (universe.size() - i < k - cur.size()) return false;
        bool ok = true;
        for (std::size_t v : cur)
            if (!rel.holds(pts[v], pts[universe[i]])) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(universe[i]);
        if (mono_clique_rec(pts, rel, universe, k, i + 1, cur)) return true;
        cur.pop_back();
    }
    return false;
}

inline std::optional<MonoClique> exhaustive_search(const PointSet& pts, const CliqueQuery& q,
                                                   const std::vector<std::size_t>& universe,
                                                   const std::vector<std::size_t>& targets) {
    for (std::size_t rel = 0; rel < targets.size(); ++rel) {
        if (targets[rel] > universe.size()) continue;
        std::vector<std::size_t> cur;
        if (targets[rel] == 0) return MonoClique{rel, {}};
        if (mono_clique_rec(pts, q.family[rel], universe, targets[rel], 0, cur))
            return MonoClique{rel, cur};
    }
    return std::nullopt;
}

inline void verify_clique(const PointSet& pts, const RelationFamily& fam, const MonoClique& mc) {
    for (std::size_t i = 0; i < mc.clique.size(); ++i)
        for (std::size_t j = i + 1; j < mc.clique.size(); ++j)
            if (!fam[mc.relation].holds(pts[mc.clique[i]], pts[mc.clique[j]]))
                throw std::logic_error("mono clique failed pairwise re-verification");
}

inline std::optional<MonoClique> search_rec(const PointSet& pts, const CliqueQuery& q,
                                            std::vector<std::size_t> universe,
                                            std::vector<std::size_t> targets, int depth_cap) {
    const std::size_t m = targets.size();
    // settled targets: any relation needing <= 1 vertex is immediate
    for (std::size_t rel = 0; rel < m; ++rel) {
        if (targets[rel] == 0) return MonoClique{rel, {}};
        if (targets[rel] == 1 && !universe.empty()) return MonoClique{rel, {universe[0]}};
    }
    if (universe.size() <= 12) return exhaustive_search(pts, q, universe, targets);

    const std::size_t d = pts.dim;
    // surfaces of the sub-instance
    std::vector<Surface> sigma;
    std::size_t s_total = q.family.total_polynomials();
    for (std::size_t ui = 0; ui < universe.size(); ++ui)
        for (std::size_t rel = 0; rel < m; ++rel)
            for (std::size_t k = 0; k < q.family[rel].polys.size(); ++k)
                sigma.push_back(Surface::from_poly(
                    q.family[rel].polys[k].partial_eval_prefix(pts[universe[ui]].coords),
                    {ui, rel, k}));
    Rat r = Rat(2) * Rat(static_cast<long>(s_total));
    bool have_cut = true;
    Cutting cut;
    try {
        if (d == 1) {
            cut = cut_1d(sigma, r);
        } else {
            std::vector<Point> sub;
            for (std::size_t v : universe) sub.push_back(pts[v]);
            cut = cut_adaptive(sigma, r, d, depth_cap, bounding_box_of(PointSet(d, sub), 1));
        }
    } catch (const cut_error&) {
        have_cut = false;
    }

    if (have_cut) {
        std::vector<char> residual(cut.cells.size(), 0);
        for (std::size_t c : cut.residual) residual[c] = 1;
        // most populous cell
        std::vector<std::size_t> cell_of(universe.size());
        std::vector<std::size_t> pop(cut.cells.size(), 0);
        for (std::size_t i = 0; i < universe.size(); ++i) {
            cell_of[i] = locate_point(cut, pts[universe[i]]);
            ++pop[cell_of[i]];
        }
        std::size_t delta = 0;
        for (std::size_t c = 1; c < cut.cells.size(); ++c)
            if (pop[c] > pop[delta]) delta = c;

        std::vector<std::size_t> v1, v2local;
        for (std::size_t i = 0; i < universe.size(); ++i) {
            if (cell_of[i] == delta) {
                v1.push_back(universe[i]);
                continue;
            }
            bool touches = false;
            for (std::size_t k = 0; k < s_total && !touches; ++k)
                touches = crosses(sigma[i * s_total + k], cut.cells[delta].region) ==
                          CrossStatus::Crosses;
            if (!touches) v2local.push_back(i);
        }

        if (!v1.empty() && v1.size() < universe.size() && !v2local.empty() &&
            !residual[delta]) {
            // chi: minimum relation containing v x V1
            std::vector<std::size_t> chi(v2local.size());
            std::vector<std::vector<std::size_t>> classes(m);
            bool chi_ok = true;
            for (std::size_t t = 0; t < v2local.size() && chi_ok; ++t) {
                std::size_t v = universe[v2local[t]];
                std::size_t c = m;
                for (std::size_t rel = 0; rel < m && c == m; ++rel) {
                    bool all_in = true;
                    for (std::size_t u : v1)
                        if (!q.family[rel].holds(pts[v], pts[u])) {
                            all_in = false;
                            break;
                        }
                    if (all_in) c = rel;
                }
                if (c == m) {
                    chi_ok = false;  // conservative classification failed the lemma
                    break;
                }
                chi[t] = c;
                classes[c].push_back(v);
            }
            if (chi_ok) {
                std::size_t best = m;
                for (std::size_t rel = 0; rel < m; ++rel)
                    if (!classes[rel].empty() &&
                        (best == m || classes[rel].size() > classes[best].size()))
                        best = rel;
                // branch 1: the largest chi-class with its target reduced
                if (best != m) {
                    std::vector<std::size_t> t3 = targets;
                    t3[best] -= 1;
                    auto sub = search_rec(pts, q, classes[best], t3, depth_cap);
                    if (sub) {
                        if (sub->relation == best && sub->clique.size() == targets[best] - 1) {
                            sub->clique.push_back(v1.front());
                            std::sort(sub->clique.begin(), sub->clique.end());
                        }
                        return sub;
                    }
                }
                // branch 2: the cell's points with every touched color reduced
                std::vector<std::size_t> t1 = targets;
                bool reduced = false;
                for (std::size_t rel = 0; rel < m; ++rel)
                    if (!classes[rel].empty()) {
                        t1[rel] -= 1;
                        reduced = true;
                    }
                if (reduced) {
                    auto sub = search_rec(pts, q, v1, t1, depth_cap);
                    if (sub) {
                        if (!classes[sub->relation].empty() &&
                            sub->clique.size() == targets[sub->relation] - 1) {
                            sub->clique.push_back(classes[sub->relation].front());
                            std::sort(sub->clique.begin(), sub->clique.end());
                        }
                        return sub;
                    }
                }
            }
        }
    }
    // completeness fallback
    return exhaustive_search(pts, q, universe, targets);
}

}  // namespace detail

// Recursive search; any returned clique is re-verified pairwise. NOT_FOUND
// means the exhaustive fallback also found nothing.
inline std::optional<MonoClique> mono_clique_search(const PointSet& pts, const CliqueQuery& q,
                                                    int depth_cap = 40) {
    q.validate();
    q.family.validate();
    auto rep = validate_family(q.family, pts);
    if (!rep.covering_violations.empty())
        throw input_error("mono_clique_search: family does not cover the point set");
    std::vector<std::size_t> universe(pts.size());
    for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = i;
    auto out = detail::search_rec(pts, q, universe, q.targets, depth_cap);
    if (out) detail::verify_clique(pts, q.family, *out);
    return out;
}

// Exhaustive oracle; hard caps keep it honest as an independent check.
inline std::optional<MonoClique> brute_ramsey_check(const PointSet& pts, const CliqueQuery& q) {
    q.validate();
    if (pts.size() > 16) throw input_error("brute_ramsey_check: at most 16 points");
    for (std::size_t p : q.targets)
        if (p > 5) throw input_error("brute_ramsey_check: targets capped at 5");
    std::vector<std::size_t> universe(pts.size());
    for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = i;
    return detail::exhaustive_search(pts, q, universe, q.targets);
}

}  // namespace sareg
