#pragma once

// Layered (p, q)-colorings: the explicit doubling construction on the line,
// exhaustive (p, q) verification, relation-preserving isomorphism search,
// layered-set recognition, and the regularity-driven layered-set finder.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "sareg/graph.hpp"
#include "sareg/regularity.hpp"
#include "sareg/relation.hpp"

namespace sareg {

// A point set with a disjoint covering family; every pair carries exactly
// one color (the index of its relation).
struct ColoredGraph {
    PointSet points;
    RelationFamily family;
    std::vector<std::vector<int>> color_of;  // n x n, -1 on the diagonal

    std::size_t n() const { return points.size(); }
    std::size_t colors() const { return family.size(); }
    int color(std::size_t i, std::size_t j) const { return color_of[i][j]; }

    static ColoredGraph build(PointSet pts, RelationFamily fam) {
        if (!fam.disjoint) throw input_error("ColoredGraph: family must declare disjointness");
        fam.validate();
        ColoredGraph g;
        const std::size_t n = pts.size();
        g.color_of.assign(n, std::vector<int>(n, -1));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                int c = -1;
                for (std::size_t rel = 0; rel < fam.size(); ++rel)
                    if (fam[rel].holds(pts[i], pts[j])) {
                        if (c >= 0)
                            throw input_error("ColoredGraph: relations overlap on a pair");
                        c = static_cast<int>(rel);
                    }
                if (c < 0) throw input_error("ColoredGraph: a pair is uncovered");
                g.color_of[i][j] = g.color_of[j][i] = c;
            }
        g.points = std::move(pts);
        g.family = std::move(fam);
        return g;
    }
};

// Certificate of an s-layered set: a balanced bipartition tree whose cross
// pairs are monochromatic per node and whose halves are isomorphic under the
// stored bijection. Leaves are the 2-point base sets.
struct CertNode {
    std::vector<std::size_t> set;  // sorted point indices
    std::size_t color = static_cast<std::size_t>(-1);
    std::vector<std::pair<std::size_t, std::size_t>> bijection;  // left -> right
    std::vector<CertNode> kids;    // empty (leaf) or exactly {left, right}
};

struct LayeredCertificate {
    CertNode root;
    std::size_t s = 0;
};

// Internal consistency check of a certificate against a colored graph.
inline bool certificate_valid(const CertNode& node, const ColoredGraph& g) {
    if (node.set.size() < 2 || (node.set.size() & (node.set.size() - 1)) != 0) return false;
    if (node.set.size() == 2) return node.kids.empty();
    if (node.kids.size() != 2) return false;
    const auto& l = node.kids[0].set;
    const auto& r = node.kids[1].set;
    if (l.size() != r.size() || l.size() * 2 != node.set.size()) return false;
    std::vector<std::size_t> merged = l;
    merged.insert(merged.end(), r.begin(), r.end());
    std::sort(merged.begin(), merged.end());
    if (merged != node.set) return false;
    for (std::size_t u : l)
        for (std::size_t v : r)
            if (static_cast<std::size_t>(g.color(u, v)) != node.color) return false;
    if (node.bijection.size() != l.size()) return false;
    std::map<std::size_t, std::size_t> h(node.bijection.begin(), node.bijection.end());
    if (h.size() != l.size()) return false;
    for (auto [a, b] : node.bijection)
        if (std::find(l.begin(), l.end(), a) == l.end() ||
            std::find(r.begin(), r.end(), b) == r.end())
            return false;
    for (std::size_t a : l)
        for (std::size_t b : l) {
            if (a == b) continue;
            if (g.color(a, b) != g.color(h.at(a), h.at(b))) return false;
        }
    return certificate_valid(node.kids[0], g) && certificate_valid(node.kids[1], g);
}

inline bool certificate_valid(const LayeredCertificate& cert, const ColoredGraph& g) {
    if (cert.root.set.size() != (std::size_t{1} << cert.s)) return false;
    if (cert.s == 0) return false;
    return cert.s == 1 ? cert.root.set.size() == 2 && cert.root.kids.empty()
                       : certificate_valid(cert.root, g);
}

namespace detail {

inline SemiAlgebraicRelation layered_band(const Rat& c) {
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial q = d * d;
    SemiAlgebraicRelation e;
    e.dim = 1;
    e.complexity = 4;
    e.polys.push_back(Polynomial::constant(2, c * c) - q * 4);   // C^2 - 4q < 0
    e.polys.push_back(q - Polynomial::constant(2, 4 * c * c));   // q - 4C^2 < 0
    e.formula = Formula::conj({lt(0), lt(1)});
    e.validate();
    return e;
}

inline SemiAlgebraicRelation unit_distance_relation() {
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial g = d * d - Polynomial::constant(2, 1);
    SemiAlgebraicRelation e;
    e.dim = 1;
    e.complexity = 4;
    e.polys.push_back(g);
    e.polys.push_back(-g);
    e.formula = Formula::conj({Formula::atom(0), Formula::atom(1)});
    e.validate();
    return e;
}

inline CertNode canonical_cert_node(std::size_t lo, std::size_t size, std::size_t level) {
    CertNode node;
    node.set.resize(size);
    for (std::size_t i = 0; i < size; ++i) node.set[i] = lo + i;
    if (size == 2) return node;
    node.color = level - 1;
    std::size_t half = size / 2;
    for (std::size_t i = 0; i < half; ++i) node.bijection.emplace_back(lo + i, lo + half + i);
    node.kids.push_back(canonical_cert_node(lo, half, level - 1));
    node.kids.push_back(canonical_cert_node(lo + half, half, level - 1));
    return node;
}

}  // namespace detail

// The doubling construction: V_1 = {1, 2} with the unit-distance color, and
// V_{i+1} = V_i together with a copy shifted by C(i) = 10 * max(V_i), the
// new color being C/2 < |u - v| < 2C. Disjoint, covering, shift-invariant.
inline std::pair<ColoredGraph, LayeredCertificate> build_layered(std::size_t m) {
    if (m < 1) throw input_error("build_layered: m must be at least 1");
    std::vector<Rat> vals = {Rat(1), Rat(2)};
    RelationFamily fam;
    fam.relations.push_back(detail::unit_distance_relation());
    for (std::size_t i = 1; i < m; ++i) {
        Rat mx = vals.back();  // construction keeps values sorted
        Rat c = 10 * mx;
        fam.relations.push_back(detail::layered_band(c));
        std::size_t sz = vals.size();
        for (std::size_t k = 0; k < sz; ++k) vals.push_back(vals[k] + c);
    }
    fam.covering = true;
    fam.disjoint = true;
    std::vector<Point> pts;
    pts.reserve(vals.size());
    for (const Rat& v : vals) pts.push_back(Point{v});
    ColoredGraph g = ColoredGraph::build(PointSet(1, std::move(pts)), std::move(fam));
    LayeredCertificate cert;
    cert.s = m;
    cert.root = detail::canonical_cert_node(0, std::size_t{1} << m, m);
    return {std::move(g), std::move(cert)};
}

struct PqResult {
    bool pass = true;
    std::vector<std::size_t> witness;  // lexicographically-first failing p-subset
};

// Exhaustive (p, q) verification over all p-subsets. Vacuous PASS when
// p > |V|; q above the pair count of a p-set is unsatisfiable and rejected.
inline PqResult verify_pq(const ColoredGraph& g, std::size_t p, std::size_t q) {
    const std::size_t n = g.n();
    if (p > n) return {};
    if (p >= 2 && q > p * (p - 1) / 2)
        throw input_error("verify_pq: q exceeds the number of pairs in a p-set");
    if (p < 2) {
        if (q > 0) throw input_error("verify_pq: p < 2 induces no colors");
        return {};
    }
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    std::vector<char> seen(g.colors(), 0);
    while (true) {
        std::size_t distinct = 0;
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t a = 0; a < p && distinct < q; ++a)
            for (std::size_t b = a + 1; b < p; ++b) {
                int c = g.color(idx[a], idx[b]);
                if (!seen[c]) {
                    seen[c] = 1;
                    if (++distinct >= q) break;
                }
            }
        if (distinct < q) return {false, idx};
        // next lexicographic p-subset
        std::size_t i = p;
        while (i-- > 0) {
            if (idx[i] != i + n - p) {
                ++idx[i];
                for (std::size_t j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return {};
        }
    }
}

// Color-preserving bijection between two equal-size subsets, or nullopt.
// Exhaustive backtracking with color-degree-vector pruning; |S| <= 12.
inline std::optional<std::vector<std::pair<std::size_t, std::size_t>>>
are_isomorphic(const ColoredGraph& g, std::vector<std::size_t> s1, std::vector<std::size_t> s2) {
    if (s1.size() != s2.size()) throw input_error("are_isomorphic: size mismatch");
    if (s1.size() > 12) throw input_error("are_isomorphic: subsets larger than the search cap");
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    const std::size_t k = s1.size();
    auto degvec = [&](const std::vector<std::size_t>& set, std::size_t v) {
        std::vector<int> d;
        for (std::size_t u : set)
            if (u != v) d.push_back(g.color(v, u));
        std::sort(d.begin(), d.end());
        return d;
    };
    std::vector<std::vector<int>> dv1, dv2;
    for (std::size_t v : s1) dv1.push_back(degvec(s1, v));
    for (std::size_t v : s2) dv2.push_back(degvec(s2, v));
    {
        auto m1 = dv1;
        auto m2 = dv2;
        std::sort(m1.begin(), m1.end());
        std::sort(m2.begin(), m2.end());
        if (m1 != m2) return std::nullopt;
    }
    // assign s1's vertices sorted by (degree vector, index)
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dv1[a] != dv1[b]) return dv1[a] < dv1[b];
        return s1[a] < s1[b];
    });
    std::vector<int> assign(k, -1);   // position in s1 -> position in s2
    std::vector<char> used(k, 0);
    auto backtrack = [&](auto&& self, std::size_t step) -> bool {
        if (step == k) return true;
        std::size_t i = order[step];
        for (std::size_t j = 0; j < k; ++j) {
            if (used[j] || dv2[j] != dv1[i]) continue;
            bool ok = true;
            for (std::size_t prev = 0; prev < step && ok; ++prev) {
                std::size_t a = order[prev];
                ok = g.color(s1[i], s1[a]) == g.color(s2[j], s2[assign[a]]);
            }
            if (!ok) continue;
            assign[i] = static_cast<int>(j);
            used[j] = 1;
            if (self(self, step + 1)) return true;
            used[j] = 0;
            assign[i] = -1;
        }
        return false;
    };
    if (!backtrack(backtrack, 0)) return std::nullopt;
    std::vector<std::pair<std::size_t, std::size_t>> h;
    for (std::size_t i = 0; i < k; ++i) h.emplace_back(s1[i], s2[assign[i]]);
    return h;
}

// Is the subset s-layered? Exhaustive over balanced bipartitions (the half
// containing the minimum element), recursing with memoization on subsets.
inline std::optional<LayeredCertificate> is_s_layered(const ColoredGraph& g,
                                                      std::vector<std::size_t> subset) {
    std::size_t sz = subset.size();
    if (sz < 2 || (sz & (sz - 1)) != 0)
        throw input_error("is_s_layered: subset size must be a power of two (>= 2)");
    if (sz > 16) throw input_error("is_s_layered: subsets larger than 16 are not searched");
    std::sort(subset.begin(), subset.end());
    std::size_t s = 0;
    while ((std::size_t{1} << s) < sz) ++s;

    std::map<std::vector<std::size_t>, std::optional<CertNode>> memo;
    auto rec = [&](auto&& self, const std::vector<std::size_t>& set) -> std::optional<CertNode> {
        if (set.size() == 2) {
            CertNode leaf;
            leaf.set = set;
            return leaf;
        }
        auto it = memo.find(set);
        if (it != memo.end()) return it->second;
        std::optional<CertNode> result;
        const std::size_t half = set.size() / 2;
        // enumerate halves containing set[0], lexicographically
        std::vector<std::size_t> pick(half - 1);
        for (std::size_t i = 0; i < half - 1; ++i) pick[i] = i;
        const std::size_t rest = set.size() - 1;
        while (true) {
            std::vector<std::size_t> left, right;
            std::vector<char> inleft(set.size(), 0);
            inleft[0] = 1;
            for (std::size_t i : pick) inleft[i + 1] = 1;
            for (std::size_t i = 0; i < set.size(); ++i)
                (inleft[i] ? left : right).push_back(set[i]);
            // monochromatic cross color?
            int color = g.color(left[0], right[0]);
            bool mono = true;
            for (std::size_t u : left)
                for (std::size_t v : right)
                    if (g.color(u, v) != color) {
                        mono = false;
                        break;
                    }
            if (mono) {
                auto lcert = self(self, left);
                if (lcert) {
                    auto rcert = self(self, right);
                    if (rcert) {
                        auto iso = are_isomorphic(g, left, right);
                        if (iso) {
                            CertNode node;
                            node.set = set;
                            node.color = static_cast<std::size_t>(color);
                            node.bijection = *iso;
                            node.kids.push_back(std::move(*lcert));
                            node.kids.push_back(std::move(*rcert));
                            result = std::move(node);
                            break;
                        }
                    }
                }
            }
            // next combination
            std::size_t i = pick.size();
            bool done = pick.empty();
            while (i-- > 0) {
                if (pick[i] != i + rest - pick.size()) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0) done = true;
            }
            if (done) break;
        }
        memo.emplace(set, result);
        return result;
    };
    auto node = rec(rec, subset);
    if (!node) return std::nullopt;
    LayeredCertificate cert;
    cert.root = std::move(*node);
    cert.s = s;
    return cert;
}

struct LayeredSearchResult {
    std::vector<std::size_t> subset;
    LayeredCertificate certificate;
};

// The inductive layered-set finder: homogeneous partition at eps = 1/m^s
// (or the override), a pairwise-homogeneous clique of m^{s-1}+1 parts,
// recursion inside the parts, then the pigeonhole join of two isomorphic
// certificates. Falls back to exhaustive search at desk scale; NOT_FOUND is
// a legal outcome below the theorem's threshold.
inline std::optional<LayeredSearchResult> find_layered_set(
    const ColoredGraph& g, std::size_t s, std::optional<Rat> eps_override = std::nullopt) {
    if (s < 1) throw input_error("find_layered_set: s must be at least 1");
    if (s > 4) throw input_error("find_layered_set: s above the certificate cap (4)");

    const std::size_t m = g.colors();

    auto subset_points = [&](const std::vector<std::size_t>& idx) {
        std::vector<Point> pts;
        for (std::size_t i : idx) pts.push_back(g.points[i]);
        return PointSet(g.points.dim, std::move(pts));
    };

    auto rec = [&](auto&& self, const std::vector<std::size_t>& universe,
                   std::size_t level) -> std::optional<LayeredSearchResult> {
        const std::size_t need = std::size_t{1} << level;
        if (universe.size() < need) return std::nullopt;
        if (level == 1) {
            LayeredSearchResult res;
            res.subset = {universe[0], universe[1]};
            res.certificate.s = 1;
            res.certificate.root.set = res.subset;
            return res;
        }
        // proof path
        Rat eps = eps_override ? *eps_override : Rat(1);
        if (!eps_override) {
            Rat ms = 1;
            for (std::size_t i = 0; i < level; ++i) ms *= Rat(static_cast<long>(m));
            eps = 1 / ms;
        }
        std::size_t want_parts = 1;
        for (std::size_t i = 0; i + 1 < level; ++i) want_parts *= m;
        want_parts += 1;

        std::optional<LayeredSearchResult> joined;
        try {
            PointSet sub = subset_points(universe);
            PairMasks masks(sub, g.family);
            RegularityResult reg = partition_homogeneous(sub, g.family, eps, {}, &masks);
            const auto& parts = reg.partition.parts;
            const std::size_t K = parts.size();
            // homogeneous-pair graph over parts, with the witness relation
            Graph pg(K);
            std::vector<std::vector<int>> witness_rel(K, std::vector<int>(K, -1));
            const std::size_t wpp = masks.words_per_pair();
            std::vector<std::uint64_t> acc(wpp);
            for (std::size_t a = 0; a < K; ++a)
                for (std::size_t b = a + 1; b < K; ++b) {
                    for (std::size_t w = 0; w < wpp; ++w) acc[w] = ~0ull;
                    bool alive = true;
                    for (std::size_t u : parts[a]) {
                        for (std::size_t v : parts[b])
                            if (!masks.and_into(u, v, acc.data())) {
                                alive = false;
                                break;
                            }
                        if (!alive) break;
                    }
                    if (!alive) continue;
                    pg.add_edge(a, b);
                    for (std::size_t w = 0; w < wpp && witness_rel[a][b] < 0; ++w)
                        if (acc[w])
                            witness_rel[a][b] = witness_rel[b][a] =
                                static_cast<int>(w * 64 +
                                                 static_cast<std::size_t>(__builtin_ctzll(acc[w])));
                }
            // clique of want_parts parts: exact for small part counts
            std::vector<std::size_t> club;
            if (K <= 20) {
                auto cl = find_clique_of_size(pg, want_parts);
                if (cl) club = *cl;
            } else {
                // greedy: order by degree descending, extend greedily
                std::vector<std::size_t> order(K);
                for (std::size_t i = 0; i < K; ++i) order[i] = i;
                std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    std::size_t da = pg.degree(a), db = pg.degree(b);
                    if (da != db) return da > db;
                    return a < b;
                });
                for (std::size_t v : order) {
                    bool ok = true;
                    for (std::size_t u : club) ok = ok && pg.has_edge(u, v);
                    if (ok) club.push_back(v);
                    if (club.size() == want_parts) break;
                }
                if (club.size() < want_parts) club.clear();
            }
            if (!club.empty()) {
                std::sort(club.begin(), club.end());
                // recurse inside the clique's parts
                std::vector<std::pair<std::size_t, LayeredSearchResult>> found;
                for (std::size_t part : club) {
                    std::vector<std::size_t> inner;
                    for (std::size_t local : parts[part]) inner.push_back(universe[local]);
                    std::sort(inner.begin(), inner.end());
                    auto sub_res = self(self, inner, level - 1);
                    if (sub_res) found.emplace_back(part, std::move(*sub_res));
                }
                // pigeonhole: two isomorphic certificates across parts
                for (std::size_t i = 0; i < found.size() && !joined; ++i)
                    for (std::size_t j = i + 1; j < found.size() && !joined; ++j) {
                        auto iso = are_isomorphic(g, found[i].second.subset, found[j].second.subset);
                        if (!iso) continue;
                        LayeredSearchResult res;
                        res.subset = found[i].second.subset;
                        res.subset.insert(res.subset.end(), found[j].second.subset.begin(),
                                          found[j].second.subset.end());
                        std::sort(res.subset.begin(), res.subset.end());
                        res.certificate.s = level;
                        CertNode node;
                        node.set = res.subset;
                        int wr = witness_rel[found[i].first][found[j].first];
                        node.color = static_cast<std::size_t>(wr);
                        node.bijection = *iso;
                        node.kids.push_back(found[i].second.certificate.root);
                        node.kids.push_back(found[j].second.certificate.root);
                        res.certificate.root = std::move(node);
                        joined = std::move(res);
                    }
            }
        } catch (const partition_degraded&) {
            // fall through to the exhaustive path
        } catch (const cut_error&) {
            // unrepresentable degenerate cutting; the fallback still applies
        }
        if (joined) return joined;
        // desk-scale exhaustive fallback over 2^level-subsets
        if (universe.size() <= 18) {
            std::vector<std::size_t> pick(need);
            for (std::size_t i = 0; i < need; ++i) pick[i] = i;
            while (true) {
                std::vector<std::size_t> cand;
                for (std::size_t i : pick) cand.push_back(universe[i]);
                auto cert = is_s_layered(g, cand);
                if (cert) return LayeredSearchResult{cand, std::move(*cert)};
                std::size_t i = pick.size();
                bool done = false;
                while (i-- > 0) {
                    if (pick[i] != i + universe.size() - need) {
                        ++pick[i];
                        for (std::size_t j = i + 1; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
                        break;
                    }
                    if (i == 0) done = true;
                }
                if (done) break;
            }
        }
        return std::nullopt;
    };

    std::vector<std::size_t> universe(g.n());
    for (std::size_t i = 0; i < universe.size(); ++i) universe[i] = i;
    auto out = rec(rec, universe, s);
    if (out && !certificate_valid(out->certificate, g))
        throw std::logic_error("find_layered_set produced an invalid certificate");
    return out;
}

}  // namespace sareg
