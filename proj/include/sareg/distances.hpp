#pragma once

// Distinct-distance machinery: exact squared-distance classes, the quadruple
// relation Q on ordered point pairs, the Cauchy-Schwarz distance bound, the
// two distance-repetition observations as checkable predicates, and the
// Zarankiewicz-style K_{2,r} audit.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "sareg/graph.hpp"
#include "sareg/parallel.hpp"
#include "sareg/relation.hpp"

namespace sareg {

struct DistanceProfile {
    std::map<Rat, std::vector<std::pair<std::size_t, std::size_t>>> classes;

    std::size_t m() const { return classes.size(); }
    std::size_t pair_count() const {
        std::size_t c = 0;
        for (const auto& [d, v] : classes) c += v.size();
        return c;
    }
    Rat sum_squared_sizes() const {
        Rat s = 0;
        for (const auto& [d, v] : classes)
            s += Rat(static_cast<long>(v.size())) * Rat(static_cast<long>(v.size()));
        return s;
    }
};

inline DistanceProfile distance_profile(const PointSet& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j]) throw input_error("distance_profile: duplicate points");
    DistanceProfile prof;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            prof.classes[squared_distance(pts[i], pts[j])].emplace_back(i, j);
    return prof;
}

// The relation Q on U = V x V (ordered pairs, indexed a*n+b): two elements
// are related when their four points are distinct and one of the two
// first-first / first-second distance equalities holds.
struct QuadRelation {
    std::size_t n = 0;
    std::vector<char> adj;       // |U| x |U| symmetric matrix
    std::size_t edge_count = 0;  // unordered pairs of U elements

    std::size_t elems() const { return n * n; }
    bool related(std::size_t pq, std::size_t rs) const { return adj[pq * elems() + rs] != 0; }
    bool related(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
        return related(p * n + q, r * n + s);
    }
};

inline bool quad_predicate(const PointSet& pts, std::size_t u1, std::size_t u2, std::size_t v1,
                           std::size_t v2) {
    if (u1 == u2 || u1 == v1 || u1 == v2 || u2 == v1 || u2 == v2 || v1 == v2) return false;
    return squared_distance(pts[u1], pts[v1]) == squared_distance(pts[u2], pts[v2]) ||
           squared_distance(pts[u1], pts[v2]) == squared_distance(pts[u2], pts[v1]);
}

inline QuadRelation build_Q(const PointSet& pts) {
    QuadRelation q;
    q.n = pts.size();
    const std::size_t u = q.elems();
    q.adj.assign(u * u, 0);
    // distance table once, exact
    std::vector<std::vector<Rat>> d2(q.n, std::vector<Rat>(q.n, Rat(0)));
    for (std::size_t i = 0; i < q.n; ++i)
        for (std::size_t j = i + 1; j < q.n; ++j)
            d2[i][j] = d2[j][i] = squared_distance(pts[i], pts[j]);
    std::size_t edges = 0;
    for (std::size_t a = 0; a < u; ++a) {
        std::size_t u1 = a / q.n, u2 = a % q.n;
        if (u1 == u2) continue;
        for (std::size_t b = a + 1; b < u; ++b) {
            std::size_t v1 = b / q.n, v2 = b % q.n;
            if (v1 == v2 || v1 == u1 || v1 == u2 || v2 == u1 || v2 == u2) continue;
            if (d2[u1][v1] == d2[u2][v2] || d2[u1][v2] == d2[u2][v1]) {
                q.adj[a * u + b] = q.adj[b * u + a] = 1;
                ++edges;
            }
        }
    }
    q.edge_count = edges;
    return q;
}

// Q as a semi-algebraic relation on R^4 (a pair of planar points per
// element): the two squared-distance equalities under OR, complexity 4. The
// all-distinct condition stays a combinatorial guard on indices and is not
// encoded in the polynomials.
inline SemiAlgebraicRelation quad_semialgebraic() {
    auto sq = [](const Polynomial& p) { return p * p; };
    auto var = [](std::size_t i) { return Polynomial::variable(8, i); };
    // element 1 holds points (x0,x1) and (x2,x3); element 2 points (x4,x5), (x6,x7)
    Polynomial d11 = sq(var(0) - var(4)) + sq(var(1) - var(5));  // |u1 - v1|^2
    Polynomial d22 = sq(var(2) - var(6)) + sq(var(3) - var(7));  // |u2 - v2|^2
    Polynomial d12 = sq(var(0) - var(6)) + sq(var(1) - var(7));  // |u1 - v2|^2
    Polynomial d21 = sq(var(2) - var(4)) + sq(var(3) - var(5));  // |u2 - v1|^2
    SemiAlgebraicRelation rel;
    rel.dim = 4;
    rel.complexity = 4;
    rel.polys.push_back(d11 - d22);
    rel.polys.push_back(d22 - d11);
    rel.polys.push_back(d12 - d21);
    rel.polys.push_back(d21 - d12);
    rel.formula = Formula::disj({eq_zero(0, 1), eq_zero(2, 3)});
    rel.validate();
    return rel;
}

struct DistanceBoundReport {
    std::size_t n = 0;
    std::size_t m = 0;             // distinct distances
    std::size_t q_edges = 0;       // |Q|
    bool q_empty = false;          // infinite-bound sentinel
    Rat bound;                     // (n^4 - 2n^3) / ((2p)^2 |Q|)
    Rat sum_squared_class_sizes;   // Cauchy-Schwarz intermediate
    bool holds = false;
};

// Audits m >= (n^4 - 2n^3) / ((2p)^2 |Q|) with exact arithmetic. An empty Q
// reports the infinite-bound sentinel and holds vacuously (flagged).
inline DistanceBoundReport distance_bound_audit(const PointSet& pts, std::size_t p) {
    if (pts.size() < 3) throw input_error("distance_bound_audit: need n >= 3");
    if (p < 1) throw input_error("distance_bound_audit: p must be positive");
    DistanceBoundReport rep;
    rep.n = pts.size();
    DistanceProfile prof = distance_profile(pts);
    rep.m = prof.m();
    rep.sum_squared_class_sizes = prof.sum_squared_sizes();
    QuadRelation q = build_Q(pts);
    rep.q_edges = q.edge_count;
    if (q.edge_count == 0) {
        rep.q_empty = true;
        rep.holds = true;
        return rep;
    }
    Rat n4(static_cast<long>(rep.n));
    n4 = n4 * n4 * n4 * (Rat(static_cast<long>(rep.n)) - 2);  // n^3 (n - 2)
    Rat denom = Rat(4) * Rat(static_cast<long>(p * p)) * Rat(static_cast<long>(q.edge_count));
    rep.bound = n4 / denom;
    rep.holds = Rat(static_cast<long>(rep.m)) >= rep.bound;
    return rep;
}

struct ObsReport {
    std::size_t point_count = 0;
    std::size_t distinct = 0;
    std::size_t threshold = 0;
    bool satisfied = false;
};

namespace detail {

inline std::size_t count_distinct_distances(const std::vector<Point>& pts) {
    std::map<Rat, char> seen;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            seen.emplace(squared_distance(pts[i], pts[j]), 1);
    return seen.size();
}

inline void require_distinct(const std::vector<Point>& pts, const char* who) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j]) throw input_error(std::string(who) + ": points must be distinct");
}

inline bool quad_points(const Point& u1, const Point& u2, const Point& v1, const Point& v2) {
    if (u1 == u2 || u1 == v1 || u1 == v2 || u2 == v1 || u2 == v2 || v1 == v2) return false;
    return squared_distance(u1, v1) == squared_distance(u2, v2) ||
           squared_distance(u1, v2) == squared_distance(u2, v1);
}

}  // namespace detail

// Observation 1: if (u1u2, v w_j) lies in Q for every j, the p points
// u1, u2, v, w_1..w_{p-3} determine at most C(p,2) - p + 3 distinct
// distances.
inline ObsReport check_obs1(const Point& u1, const Point& u2, const Point& v,
                            const std::vector<Point>& ws) {
    std::vector<Point> all = {u1, u2, v};
    all.insert(all.end(), ws.begin(), ws.end());
    detail::require_distinct(all, "check_obs1");
    if (ws.empty()) throw input_error("check_obs1: need at least one neighbour w");
    for (const Point& w : ws)
        if (!detail::quad_points(u1, u2, v, w))
            throw input_error("check_obs1: (u1u2, v w) is not in Q");
    ObsReport rep;
    rep.point_count = all.size();
    const std::size_t p = all.size();
    rep.threshold = p * (p - 1) / 2 - p + 3;
    rep.distinct = detail::count_distinct_distances(all);
    rep.satisfied = rep.distinct <= rep.threshold;
    return rep;
}

// Observation 2: a K_{2,r} between the U-side elements u1u2, u3u4 and the
// matched pairs v1v2, ..., v_{2r-1}v_{2r}. Case 1 (all u distinct) audits
// the 2r + 4 points; case 2 (u2 == u3) audits 2r + 3 points, or 2r + 4 with
// an explicit extra point following the proof's augmentation.
inline ObsReport check_obs2(const Point& u1, const Point& u2, const Point& u3, const Point& u4,
                            const std::vector<std::pair<Point, Point>>& vpairs,
                            const std::optional<Point>& extra = std::nullopt) {
    if (vpairs.empty()) throw input_error("check_obs2: need at least one V-side pair");
    std::vector<Point> vs;
    for (const auto& [a, b] : vpairs) {
        vs.push_back(a);
        vs.push_back(b);
    }
    detail::require_distinct(vs, "check_obs2 (V side)");
    for (const auto& [a, b] : vpairs) {
        if (!detail::quad_points(u1, u2, a, b))
            throw input_error("check_obs2: (u1u2, v pair) is not in Q");
        if (!detail::quad_points(u3, u4, a, b))
            throw input_error("check_obs2: (u3u4, v pair) is not in Q");
    }
    bool case2 = (u2 == u3);
    std::vector<Point> all;
    if (case2) {
        if (u1 == u2 || u1 == u4 || u2 == u4)
            throw input_error("check_obs2: case 2 requires u1, u2 = u3, u4 distinct");
        all = {u1, u2, u4};
    } else {
        all = {u1, u2, u3, u4};
        detail::require_distinct(all, "check_obs2 (U side)");
    }
    all.insert(all.end(), vs.begin(), vs.end());
    detail::require_distinct(all, "check_obs2");
    if (extra) {
        if (!case2) throw input_error("check_obs2: the extra point belongs to case 2 only");
        all.push_back(*extra);
        detail::require_distinct(all, "check_obs2 (extra)");
    }
    const std::size_t r = vpairs.size();
    ObsReport rep;
    rep.point_count = all.size();
    std::size_t full = 2 * r + 4;
    if (case2 && !extra) {
        std::size_t k = 2 * r + 3;
        rep.threshold = k * (k - 1) / 2 - 2 * r;
    } else {
        rep.threshold = full * (full - 1) / 2 - 2 * r;
    }
    rep.distinct = detail::count_distinct_distances(all);
    rep.satisfied = rep.distinct <= rep.threshold;
    return rep;
}

struct KstReport {
    bool k2r_free = false;
    std::size_t edges = 0;
    // exact rearranged double-counting bound: E (E - n) <= (r-1) m (m-1) n
    bool exact_bound_holds = false;
    double asymptotic_bound = 0;  // (n + sqrt(n^2 + 4(r-1) m(m-1) n)) / 2
    bool exceeds_asymptotic = false;
    double trend_exponent = 0;  // log |E| / log(m + n); diagnostic only
};

inline KstReport kst_audit(const Bipartite& g, std::size_t r) {
    if (r < 1) throw input_error("kst_audit: r must be positive");
    KstReport rep;
    rep.k2r_free = g.k2r_free(r);
    rep.edges = g.edge_count();
    Rat e(static_cast<long>(rep.edges));
    Rat rhs = Rat(static_cast<long>(r - 1)) * Rat(static_cast<long>(g.m)) *
              Rat(static_cast<long>(g.m >= 1 ? g.m - 1 : 0)) * Rat(static_cast<long>(g.n));
    rep.exact_bound_holds = e * (e - Rat(static_cast<long>(g.n))) <= rhs;
    double nn = static_cast<double>(g.n);
    double disc = nn * nn + 4.0 * rhs.get_d();
    rep.asymptotic_bound = (nn + std::sqrt(disc)) / 2.0;
    rep.exceeds_asymptotic = static_cast<double>(rep.edges) > rep.asymptotic_bound;
    if (rep.edges > 0 && g.m + g.n > 2)
        rep.trend_exponent =
            std::log(static_cast<double>(rep.edges)) / std::log(static_cast<double>(g.m + g.n));
    return rep;
}

struct PqDistanceResult {
    bool pass = true;
    std::vector<std::size_t> witness;
};

// Exhaustive check that every p points determine at least q distinct
// distances. Mirrors verify_pq but over exact distance classes.
inline PqDistanceResult pq_distance_check(const PointSet& pts, std::size_t p, std::size_t q) {
    const std::size_t n = pts.size();
    if (p > n) throw input_error("pq_distance_check: p exceeds the point count");
    if (p < 2) {
        if (q > 0) return {false, {}};
        return {};
    }
    // C(n, p) guard against accidental blowups
    double work = 1;
    for (std::size_t i = 0; i < p; ++i) work *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (work > 2e7) throw input_error("pq_distance_check: C(n, p) beyond the desk-scale cap");
    // pair class ids
    DistanceProfile prof = distance_profile(pts);
    std::vector<std::vector<int>> cls(n, std::vector<int>(n, -1));
    int next = 0;
    for (const auto& [d, pairs] : prof.classes) {
        for (auto [i, j] : pairs) cls[i][j] = cls[j][i] = next;
        ++next;
    }
    std::vector<std::size_t> idx(p);
    for (std::size_t i = 0; i < p; ++i) idx[i] = i;
    std::vector<char> seen(prof.m(), 0);
    while (true) {
        std::size_t distinct = 0;
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t a = 0; a < p && distinct < q; ++a)
            for (std::size_t b = a + 1; b < p; ++b) {
                int c = cls[idx[a]][idx[b]];
                if (!seen[c]) {
                    seen[c] = 1;
                    if (++distinct >= q) break;
                }
            }
        if (distinct < q) return {false, idx};
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

}  // namespace sareg
