#pragma once

// The Ramsey-Turan construction: translated copies of a triangle-free
// segment family, edges between crossing segments or far-apart left
// endpoints, exact clique and independence audits, and the deletion-argument
// upper-bound checker.

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "sareg/colorings.hpp"
#include "sareg/graph.hpp"
#include "sareg/regularity.hpp"
#include "sareg/relation.hpp"

namespace sareg {

// Planar segment with the left endpoint designated (smaller x, ties by y).
struct Segment {
    Point a, b;  // a is the left endpoint

    Segment(Point p, Point q) {
        if (p.dim() != 2 || q.dim() != 2) throw input_error("Segment: endpoints must be planar");
        if (p == q) throw input_error("Segment: endpoints must be distinct");
        bool p_left = p[0] < q[0] || (p[0] == q[0] && p[1] < q[1]);
        a = p_left ? p : q;
        b = p_left ? q : p;
    }

    Segment translated(const Rat& dx, const Rat& dy) const {
        return Segment(Point{a[0] + dx, a[1] + dy}, Point{b[0] + dx, b[1] + dy});
    }
    Segment scaled(const Rat& s) const {
        return Segment(Point{a[0] * s, a[1] * s}, Point{b[0] * s, b[1] * s});
    }
};

inline Rat orient(const Point& p, const Point& q, const Point& r) {
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
}

// Exact closed-segment intersection: shared endpoints and collinear overlap
// count as intersecting.
inline bool segments_intersect(const Segment& s, const Segment& t) {
    int o1 = sgn(orient(s.a, s.b, t.a));
    int o2 = sgn(orient(s.a, s.b, t.b));
    int o3 = sgn(orient(t.a, t.b, s.a));
    int o4 = sgn(orient(t.a, t.b, s.b));
    if (o1 * o2 > 0 || o3 * o4 > 0) return false;
    if (o1 != 0 || o2 != 0 || o3 != 0 || o4 != 0) return true;
    // collinear: overlap along the supporting line, via projections on s
    auto dot_along = [&](const Point& x) -> Rat {
        return (x[0] - s.a[0]) * (s.b[0] - s.a[0]) + (x[1] - s.a[1]) * (s.b[1] - s.a[1]);
    };
    Rat len2 = dot_along(s.b);
    Rat ta = dot_along(t.a), tb = dot_along(t.b);
    if (ta > tb) std::swap(ta, tb);
    return !(tb < 0 || ta > len2);
}

inline Graph intersection_graph(const std::vector<Segment>& segs) {
    Graph g(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j)
            if (segments_intersect(segs[i], segs[j])) g.add_edge(i, j);
    return g;
}

struct RTGraph {
    std::vector<Segment> segments;   // all p-1 copies, copy-major order
    std::vector<std::size_t> copy_of;
    std::size_t p = 0;
    Graph graph;                     // crossing OR far-left-endpoints
    bool triangle_free_validated = false;

    std::size_t n() const { return segments.size(); }

    // Segment encoded as a point of R^4: (left x, left y, right x, right y).
    PointSet encoded_points() const {
        std::vector<Point> pts;
        for (const auto& s : segments) pts.push_back(Point{s.a[0], s.a[1], s.b[0], s.b[1]});
        return PointSet(4, std::move(pts));
    }
};

inline bool rt_edge_predicate(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) return true;
    Rat dx = s.a[0] - t.a[0], dy = s.a[1] - t.a[1];
    return dx * dx + dy * dy >= Rat(1, 4);
}

// The RT edge rule as a semi-algebraic relation on the R^4 encodings, with
// complexity at most 10: o1 o2 <= 0 and o3 o4 <= 0 handle crossings, a
// squared-orientation gate separates the collinear-overlap case, and the
// far-apart clause compares left endpoints. Only valid on points that are
// genuine segment encodings (left endpoint first, endpoints distinct).
inline SemiAlgebraicRelation rt_semialgebraic() {
    auto var = [](std::size_t i) { return Polynomial::variable(8, i); };
    // first segment: a = (x0, x1), b = (x2, x3); second: a' = (x4, x5), b' = (x6, x7)
    auto orient3 = [&](std::size_t px, std::size_t py, std::size_t qx, std::size_t qy,
                       std::size_t rx, std::size_t ry) {
        return (var(qx) - var(px)) * (var(ry) - var(py)) -
               (var(qy) - var(py)) * (var(rx) - var(px));
    };
    Polynomial o1 = orient3(0, 1, 2, 3, 4, 5);
    Polynomial o2 = orient3(0, 1, 2, 3, 6, 7);
    Polynomial o3 = orient3(4, 5, 6, 7, 0, 1);
    Polynomial o4 = orient3(4, 5, 6, 7, 2, 3);
    // projections of the second segment's endpoints along the first
    Polynomial dirx = var(2) - var(0), diry = var(3) - var(1);
    Polynomial t1 = (var(4) - var(0)) * dirx + (var(5) - var(1)) * diry;
    Polynomial t2 = (var(6) - var(0)) * dirx + (var(7) - var(1)) * diry;
    Polynomial len2 = dirx * dirx + diry * diry;
    SemiAlgebraicRelation rel;
    rel.dim = 4;
    rel.complexity = 10;
    rel.polys.push_back(-(o1 * o2));                         // 0: o1 o2 <= 0
    rel.polys.push_back(-(o3 * o4));                         // 1: o3 o4 <= 0
    rel.polys.push_back(-(o1 * o1 + o2 * o2));               // 2: >= 0 iff collinear
    rel.polys.push_back(t1);                                 // 3
    rel.polys.push_back(t2);                                 // 4
    rel.polys.push_back(len2 - t1);                          // 5: t1 <= |dir|^2
    rel.polys.push_back(len2 - t2);                          // 6
    Polynomial fx = var(0) - var(4), fy = var(1) - var(5);
    rel.polys.push_back(fx * fx + fy * fy - Polynomial::constant(8, frac(1, 4)));  // 7: far
    Formula noncollinear_hit = Formula::conj(
        {Formula::atom(0), Formula::atom(1), Formula::negate(Formula::atom(2))});
    // collinear disjointness: both projections below 0 or both above |dir|^2
    Formula both_low = Formula::conj({lt(3), lt(4)});
    Formula both_high = Formula::conj({lt(5), lt(6)});
    Formula collinear_hit = Formula::conj(
        {Formula::atom(2), Formula::negate(Formula::disj({both_low, both_high}))});
    rel.formula = Formula::disj({noncollinear_hit, collinear_hit, Formula::atom(7)});
    rel.validate();
    return rel;
}

struct ComposeOptions {
    std::size_t triangle_check_cap = 60;
};

// p-1 translated copies of a (normalized) triangle-free family, copy i
// centered at (i, 0). The input family is translated to its bounding-box
// center and scaled once to fit the radius-1/10 ball.
inline RTGraph compose_rt(const std::vector<Segment>& family, std::size_t p,
                          const ComposeOptions& opts = {}) {
    if (p < 2) throw input_error("compose_rt: p must be at least 2");
    if (family.empty()) throw input_error("compose_rt: empty segment family");
    // center on the endpoint bounding box
    Rat xlo = family[0].a[0], xhi = xlo, ylo = family[0].a[1], yhi = ylo;
    for (const auto& s : family)
        for (const Point* e : {&s.a, &s.b}) {
            xlo = std::min(xlo, (*e)[0]);
            xhi = std::max(xhi, (*e)[0]);
            ylo = std::min(ylo, (*e)[1]);
            yhi = std::max(yhi, (*e)[1]);
        }
    Rat cx = (xlo + xhi) / 2, cy = (ylo + yhi) / 2;
    std::vector<Segment> base;
    Rat max_norm2 = 0;
    for (const auto& s : family) {
        Segment t = s.translated(-cx, -cy);
        base.push_back(t);
        for (const Point* e : {&t.a, &t.b}) {
            Rat n2 = (*e)[0] * (*e)[0] + (*e)[1] * (*e)[1];
            max_norm2 = std::max(max_norm2, n2);
        }
    }
    if (max_norm2 > frac(1, 100)) {
        // scale by 1/(10 ceil(sqrt(max_norm2))): rational, deterministic
        Int m = ceil_isqrt(rat_ceil(max_norm2));
        Rat s = Rat(1) / (Rat(10) * Rat(m));
        for (auto& seg : base) seg = seg.scaled(s);
    }
    for (const auto& s : base)
        for (const Point* e : {&s.a, &s.b})
            if ((*e)[0] * (*e)[0] + (*e)[1] * (*e)[1] > frac(1, 100))
                throw input_error("compose_rt: family does not fit the 1/10 ball after scaling");

    RTGraph rt;
    rt.p = p;
    Graph base_graph = intersection_graph(base);
    if (base.size() <= opts.triangle_check_cap) {
        if (auto tri = find_triangle(base_graph))
            throw input_error("compose_rt: the family's intersection graph has a triangle");
        rt.triangle_free_validated = true;
    }
    for (std::size_t copy = 1; copy < p; ++copy)
        for (const auto& s : base) {
            rt.segments.push_back(s.translated(Rat(static_cast<long>(copy)), Rat(0)));
            rt.copy_of.push_back(copy);
        }
    rt.graph = Graph(rt.segments.size());
    for (std::size_t i = 0; i < rt.segments.size(); ++i)
        for (std::size_t j = i + 1; j < rt.segments.size(); ++j)
            if (rt_edge_predicate(rt.segments[i], rt.segments[j])) rt.graph.add_edge(i, j);
    return rt;
}

struct RTAuditReport {
    std::size_t n = 0;
    bool degraded = false;  // the regularity pipeline refused at this scale
    std::string degraded_reason;
    std::size_t K = 0;  // equitable block count
    std::size_t total_edges = 0;
    std::size_t intra_part_edges = 0;
    std::size_t nonhomogeneous_edges = 0;
    std::size_t remaining_edges = 0;
    Rat turan_threshold;  // (1 - 1/(p-1) + eps/5) n^2 / 2
    bool kp_found = false;
    std::vector<std::size_t> kp_parts;
    std::optional<std::size_t> independent_part;  // block with no internal edge
    std::size_t independent_part_size = 0;
    std::vector<std::size_t> k2p_witness;  // 2p vertices forming K_2p when found
};

// The deletion argument of the RT upper bound, executed exactly: the
// regularity pipeline at eps/4 on the family {E, complement} (inner run at
// eps/8, then the equitable refinement, as the proof requires blocks of
// near-equal size), deletion of intra-block and non-homogeneous edges, the
// Turan-threshold comparison, and when a K_p of E-complete block pairs
// survives either an independent block of size >= floor(n/K) or the
// assembled K_2p witness.
inline RTAuditReport rt_upper_audit(const PointSet& pts, const SemiAlgebraicRelation& edge_rel,
                                    const Graph& graph, std::size_t p, const Rat& eps) {
    if (!(eps > 0 && eps < 1)) throw input_error("rt_upper_audit: eps must be in (0,1)");
    if (p < 2) throw input_error("rt_upper_audit: p must be at least 2");
    if (graph.n != pts.size()) throw input_error("rt_upper_audit: graph/point size mismatch");
    RelationFamily fam;
    fam.relations.push_back(edge_rel);
    SemiAlgebraicRelation comp = edge_rel;
    comp.formula = Formula::negate(edge_rel.formula);
    fam.relations.push_back(comp);
    fam.covering = true;
    fam.disjoint = true;

    RTAuditReport rep;
    rep.n = pts.size();
    rep.total_edges = graph.edges.size();
    PairMasks masks(pts, fam);
    RegularityOptions opts;
    opts.max_cut_nodes = 4000;  // the audit degrades loudly instead of grinding
    RefinedPartition blocks;
    try {
        RegularityResult reg = partition_homogeneous(pts, fam, eps / 8, opts, &masks);
        blocks = equitable_refine(pts, fam, reg.partition, eps / 4, &masks);
    } catch (const partition_degraded& ex) {
        rep.degraded = true;
        rep.degraded_reason = ex.what();
        return rep;
    }
    const auto& parts = blocks.parts;
    rep.K = parts.size();

    std::vector<std::size_t> part_of(pts.size());
    for (std::size_t a = 0; a < parts.size(); ++a)
        for (std::size_t v : parts[a]) part_of[v] = a;

    // block-pair classification against the edge relation
    enum { COMPLETE_E, HOMOG_OTHER, BAD };
    std::vector<std::uint8_t> pair_class(parts.size() * parts.size(), BAD);
    const std::size_t wpp = masks.words_per_pair();
    std::vector<std::uint64_t> acc(wpp);
    for (std::size_t a = 0; a < parts.size(); ++a)
        for (std::size_t b = a + 1; b < parts.size(); ++b) {
            for (std::size_t k = 0; k < wpp; ++k) acc[k] = ~0ull;
            bool alive = true;
            for (std::size_t u : parts[a]) {
                for (std::size_t v : parts[b])
                    if (!masks.and_into(u, v, acc.data())) {
                        alive = false;
                        break;
                    }
                if (!alive) break;
            }
            std::uint8_t cls = BAD;
            if (alive) cls = (acc[0] & 1ull) ? COMPLETE_E : HOMOG_OTHER;
            pair_class[a * parts.size() + b] = pair_class[b * parts.size() + a] = cls;
        }
    for (auto [u, v] : graph.edges) {
        if (part_of[u] == part_of[v])
            ++rep.intra_part_edges;
        else if (pair_class[part_of[u] * parts.size() + part_of[v]] == BAD)
            ++rep.nonhomogeneous_edges;
    }
    rep.remaining_edges = rep.total_edges - rep.intra_part_edges - rep.nonhomogeneous_edges;
    Rat n2 = Rat(static_cast<long>(pts.size())) * Rat(static_cast<long>(pts.size()));
    rep.turan_threshold =
        (Rat(1) - Rat(1) / Rat(static_cast<long>(p - 1)) + eps / 5) * n2 / 2;

    Graph reduced(parts.size());
    for (std::size_t a = 0; a < parts.size(); ++a)
        for (std::size_t b = a + 1; b < parts.size(); ++b)
            if (pair_class[a * parts.size() + b] == COMPLETE_E) reduced.add_edge(a, b);
    auto kp = find_clique_of_size(reduced, p);
    if (!kp) return rep;
    rep.kp_found = true;
    rep.kp_parts = *kp;
    std::vector<std::size_t> witness;
    for (std::size_t part : *kp) {
        std::optional<std::pair<std::size_t, std::size_t>> internal;
        for (std::size_t i = 0; i < parts[part].size() && !internal; ++i)
            for (std::size_t j = i + 1; j < parts[part].size(); ++j)
                if (graph.has_edge(parts[part][i], parts[part][j])) {
                    internal = {parts[part][i], parts[part][j]};
                    break;
                }
        if (!internal) {
            rep.independent_part = part;
            rep.independent_part_size = parts[part].size();
            return rep;
        }
        witness.push_back(internal->first);
        witness.push_back(internal->second);
    }
    // all p blocks have an internal edge: the 2p endpoints form K_{2p}
    for (std::size_t i = 0; i < witness.size(); ++i)
        for (std::size_t j = i + 1; j < witness.size(); ++j)
            if (!graph.has_edge(witness[i], witness[j]))
                throw std::logic_error("rt_upper_audit: K_2p assembly failed adjacency check");
    rep.k2p_witness = std::move(witness);
    return rep;
}

}  // namespace sareg
