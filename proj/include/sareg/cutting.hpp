#pragma once

// The cutting engine: subdivide R^d into cells so that each cell is crossed
// by at most |Sigma|/r surfaces. Exact in one dimension (root isolation and
// an event sweep); certified-conservative box refinement for d >= 2.
//
// A surface crosses a cell when their intersection is nonempty and the cell
// is not contained in the surface. For a nonzero univariate polynomial that
// means "has a root in the cell's point set"; the zero polynomial contains
// every cell, and a singleton cell {b} is *contained* in every surface that
// vanishes at b, so singletons are never crossed.

#include <algorithm>
#include <map>
#include <variant>
#include <vector>

#include "sareg/interval.hpp"
#include "sareg/parallel.hpp"
#include "sareg/point.hpp"
#include "sareg/polynomial.hpp"
#include "sareg/roots.hpp"

namespace sareg {

struct cut_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SurfaceSource {
    std::size_t point = 0, relation = 0, poly = 0;
    bool operator==(const SurfaceSource&) const = default;
};

// The partial evaluation y -> g(u, y) of a relation polynomial at a source
// point; degenerate when the polynomial collapses to zero.
struct Surface {
    Polynomial poly;  // in d variables
    SurfaceSource source;
    bool degenerate = false;

    static Surface from_poly(Polynomial p, SurfaceSource src = {}) {
        Surface s;
        s.degenerate = p.is_zero();
        s.poly = std::move(p);
        s.source = src;
        return s;
    }
};

// 1D cell region: an interval with rational or infinite endpoints and
// explicit openness flags; cells of one cutting are pairwise disjoint.
struct Interval1 {
    ERat lo = ERat::neg_inf(), hi = ERat::pos_inf();
    bool lo_closed = false, hi_closed = false;

    bool is_singleton() const {
        return lo.finite() && hi.finite() && lo.v == hi.v;
    }
    bool contains(const Rat& x) const {
        if (lo.finite()) {
            if (x < lo.v || (x == lo.v && !lo_closed)) return false;
        } else if (lo.kind == ERat::PosInf) {
            return false;
        }
        if (hi.finite()) {
            if (x > hi.v || (x == hi.v && !hi_closed)) return false;
        } else if (hi.kind == ERat::NegInf) {
            return false;
        }
        return true;
    }
    // A rational point strictly inside (assumes a nondegenerate interval).
    Rat sample_inside() const {
        if (is_singleton()) return lo.v;
        if (lo.finite() && hi.finite()) return (lo.v + hi.v) / 2;
        if (lo.finite()) return lo.v + 1;
        if (hi.finite()) return hi.v - 1;
        return Rat(0);
    }
};

// Axis-aligned box with possibly infinite sides (closed where finite).
struct Box {
    std::vector<Ival> sides;

    std::size_t dim() const { return sides.size(); }
    static Box whole(std::size_t d) { return Box{std::vector<Ival>(d, Ival::whole())}; }

    bool contains(const Point& p) const {
        if (p.dim() != dim()) throw input_error("box containment: dimension mismatch");
        for (std::size_t i = 0; i < dim(); ++i) {
            const Ival& s = sides[i];
            if (s.lo.finite() && p[i] < s.lo.v) return false;
            if (s.hi.finite() && p[i] > s.hi.v) return false;
        }
        return true;
    }
};

using CellRegion = std::variant<Interval1, Box>;

enum class CrossStatus { Crosses, Disjoint, Contains };

struct Cell {
    CellRegion region;
    std::vector<std::size_t> crossing;    // surface indices
    std::vector<std::size_t> containing;  // surface indices
};

struct Cutting {
    std::size_t dim = 0;
    Rat r;
    long budget = 0;  // floor(|Sigma| / r)
    std::vector<Cell> cells;
    std::vector<std::size_t> residual;  // over-budget cells (adaptive failure)

    bool success() const { return residual.empty(); }
};

namespace detail {

inline UniPoly to_unipoly(const Polynomial& p) { return UniPoly(p.dense_univariate()); }

// Distinct real roots of the (nonzero) univariate polynomial inside the
// interval, computed from scratch with a Sturm chain.
inline int roots_in_interval(const UniPoly& u, const Interval1& iv) {
    SturmChain chain(primitive_integer_scale(square_free_part(u)));
    const UniPoly& p = chain.seq.front();
    if (iv.is_singleton()) return p.eval(iv.lo.v) == 0 ? 1 : 0;
    int cnt;
    if (!iv.lo.finite() && !iv.hi.finite()) {
        cnt = chain.count_all();
    } else if (!iv.lo.finite()) {
        cnt = chain.count_below(iv.hi.v);
        if (!iv.hi_closed && p.eval(iv.hi.v) == 0) --cnt;
    } else if (!iv.hi.finite()) {
        cnt = chain.count_above(iv.lo.v);
        if (iv.lo_closed && p.eval(iv.lo.v) == 0) ++cnt;
    } else {
        cnt = chain.count_half_open(iv.lo.v, iv.hi.v);
        if (!iv.hi_closed && p.eval(iv.hi.v) == 0) --cnt;
        if (iv.lo_closed && p.eval(iv.lo.v) == 0) ++cnt;
    }
    return cnt;
}

}  // namespace detail

// Exact (1D) or certified-conservative (boxes) classification of a surface
// against a cell region. Conservativity can only inflate crossing counts.
inline CrossStatus crosses(const Surface& s, const CellRegion& region) {
    if (s.degenerate) return CrossStatus::Contains;
    if (std::holds_alternative<Interval1>(region)) {
        const auto& iv = std::get<Interval1>(region);
        UniPoly u = detail::to_unipoly(s.poly);
        if (iv.is_singleton())
            return u.eval(iv.lo.v) == 0 ? CrossStatus::Contains : CrossStatus::Disjoint;
        return detail::roots_in_interval(u, iv) > 0 ? CrossStatus::Crosses : CrossStatus::Disjoint;
    }
    const auto& box = std::get<Box>(region);
    Ival range = eval_on_box(s.poly, box.sides);
    return range.certified_sign() != 0 ? CrossStatus::Disjoint : CrossStatus::Crosses;
}

namespace detail {

struct SweepEvent {
    AlgNum root;
    std::size_t isolator = 0;               // index into the isolator pool
    std::vector<std::size_t> surfaces;      // distinct surface indices at this root
};

// True when the event positions are provably strictly increasing.
inline bool strictly_separated(const SweepEvent& a, const SweepEvent& b) {
    const Rat au = a.root.upper();
    const Rat bl = b.root.lower();
    if (au < bl) return true;
    if (au == bl && !(a.root.value && b.root.value)) return true;
    return false;
}

}  // namespace detail

// Exact 1D cutting by a left-to-right sweep over isolated root events.
inline Cutting cut_1d(const std::vector<Surface>& sigma, const Rat& r) {
    if (r < 1) throw input_error("cut_1d: r must be at least 1");
    for (const auto& s : sigma)
        if (s.poly.nvars() != 1) throw input_error("cut_1d: surfaces must be univariate");

    Cutting cut;
    cut.dim = 1;
    cut.r = r;
    Rat ratio = Rat(static_cast<long>(sigma.size())) / r;
    cut.budget = static_cast<long>(rat_floor(ratio).get_si());

    // Pool isolators per distinct polynomial; collect per-root events.
    std::map<Polynomial, std::size_t> pool_index;
    std::vector<RootIsolator> pool;
    std::vector<std::vector<std::size_t>> pool_surfaces;
    std::vector<std::size_t> zero_surfaces;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i].degenerate) {
            zero_surfaces.push_back(i);
            continue;
        }
        auto [it, fresh] = pool_index.try_emplace(sigma[i].poly, pool.size());
        if (fresh) {
            pool.emplace_back(detail::to_unipoly(sigma[i].poly));
            pool_surfaces.emplace_back();
        }
        pool_surfaces[it->second].push_back(i);
    }

    std::vector<detail::SweepEvent> events;
    std::map<Rat, std::size_t> rational_events;  // value -> index in events
    for (std::size_t pi = 0; pi < pool.size(); ++pi) {
        for (AlgNum& root : pool[pi].isolate()) {
            if (root.value) {
                auto [it, fresh] = rational_events.try_emplace(*root.value, events.size());
                if (fresh) events.push_back({std::move(root), pi, pool_surfaces[pi]});
                else {
                    auto& sf = events[it->second].surfaces;
                    sf.insert(sf.end(), pool_surfaces[pi].begin(), pool_surfaces[pi].end());
                }
            } else {
                events.push_back({std::move(root), pi, pool_surfaces[pi]});
            }
        }
    }

    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        if (a.root.lower() != b.root.lower()) return a.root.lower() < b.root.lower();
        return a.root.upper() < b.root.upper();
    });

    // Resolve overlaps between neighbours: merge equal roots, refine and
    // reorder unequal ones until the sequence is provably increasing.
    for (std::size_t i = 0; i + 1 < events.size();) {
        auto& a = events[i];
        auto& b = events[i + 1];
        if (detail::strictly_separated(a, b)) {
            ++i;
            continue;
        }
        if (algnum_equal(a.root, b.root)) {
            a.surfaces.insert(a.surfaces.end(), b.surfaces.begin(), b.surfaces.end());
            if (b.root.value && !a.root.value) a.root = b.root;
            events.erase(events.begin() + static_cast<long>(i + 1));
            continue;
        }
        int cmp = compare_algnum(a.root, b.root, pool[a.isolator], pool[b.isolator]);
        // Refine copies until the order is visible, then normalize.
        while (!detail::strictly_separated(a, b) && !detail::strictly_separated(b, a)) {
            pool[a.isolator].refine(a.root);
            pool[b.isolator].refine(b.root);
        }
        if (cmp > 0) {
            std::swap(events[i], events[i + 1]);
            if (i > 0) --i;
        }
    }
    for (auto& e : events) {
        std::sort(e.surfaces.begin(), e.surfaces.end());
        e.surfaces.erase(std::unique(e.surfaces.begin(), e.surfaces.end()), e.surfaces.end());
    }

    // Sweep. Cells are emitted left to right; the running set holds the
    // distinct surfaces with a root admitted to the open cell so far.
    std::vector<char> in_cell(sigma.size(), 0);
    std::vector<std::size_t> current;  // surfaces crossing the open cell
    ERat left = ERat::neg_inf();
    bool left_closed = false;
    std::optional<std::size_t> last_admitted;  // event index of newest admitted root

    auto flush_cell = [&](ERat hi, bool hi_closed) {
        Cell c;
        c.region = Interval1{left, hi, left_closed, hi_closed};
        c.crossing = current;
        std::sort(c.crossing.begin(), c.crossing.end());
        c.containing = zero_surfaces;
        cut.cells.push_back(std::move(c));
        for (std::size_t s : current) in_cell[s] = 0;
        current.clear();
    };

    // A rational boundary strictly above the last admitted event (if any)
    // and strictly below the (irrational) next event.
    auto boundary_before = [&](detail::SweepEvent& ev) -> Rat {
        Rat floor_bound = left.finite() ? left.v : ev.root.lower() - 1;
        if (last_admitted) {
            AlgNum& prev = events[*last_admitted].root;
            while (!(prev.upper() < ev.root.lower()))
                if (prev.value)
                    pool[ev.isolator].refine(ev.root);
                else {
                    pool[events[*last_admitted].isolator].refine(prev);
                    pool[ev.isolator].refine(ev.root);
                }
            if (prev.upper() > floor_bound) floor_bound = prev.upper();
        }
        while (!(ev.root.lower() > floor_bound)) pool[ev.isolator].refine(ev.root);
        return ev.root.lower();
    };

    for (std::size_t ei = 0; ei < events.size(); ++ei) {
        auto& ev = events[ei];
        long fresh = 0;
        for (std::size_t s : ev.surfaces)
            if (!in_cell[s]) ++fresh;
        long count = static_cast<long>(current.size());
        if (count + fresh > cut.budget) {
            long alone = static_cast<long>(ev.surfaces.size());
            if (alone > cut.budget) {
                // Over-budget breakpoint: isolate it as a singleton cell,
                // which every surface rooted there *contains*.
                if (!ev.root.value)
                    throw cut_error(
                        "cut_1d: over-budget breakpoint at an irrational coordinate cannot "
                        "be represented as a rational singleton cell");
                Rat b = *ev.root.value;
                flush_cell(ERat(b), false);
                Cell single;
                single.region = Interval1{ERat(b), ERat(b), true, true};
                single.containing = zero_surfaces;
                for (std::size_t s : ev.surfaces) single.containing.push_back(s);
                std::sort(single.containing.begin(), single.containing.end());
                cut.cells.push_back(std::move(single));
                left = ERat(b);
                left_closed = false;
                last_admitted.reset();
                continue;
            }
            // Close the current cell strictly before this event.
            if (ev.root.value) {
                flush_cell(ERat(*ev.root.value), false);
                left = ERat(*ev.root.value);
                left_closed = true;
            } else {
                Rat b = boundary_before(ev);
                flush_cell(ERat(b), false);
                left = ERat(b);
                left_closed = true;
            }
            last_admitted.reset();
        }
        for (std::size_t s : ev.surfaces)
            if (!in_cell[s]) {
                in_cell[s] = 1;
                current.push_back(s);
            }
        last_admitted = ei;
    }
    flush_cell(ERat::pos_inf(), false);
    return cut;
}

inline Box bounding_box_of(const PointSet& pts, const Rat& pad) {
    if (pts.size() == 0) {
        Box b;
        for (std::size_t i = 0; i < pts.dim; ++i)
            b.sides.push_back(Ival(ERat(-pad), ERat(pad)));
        return b;
    }
    Box b;
    for (std::size_t i = 0; i < pts.dim; ++i) {
        Rat lo = pts[0][i], hi = pts[0][i];
        for (std::size_t k = 1; k < pts.size(); ++k) {
            if (pts[k][i] < lo) lo = pts[k][i];
            if (pts[k][i] > hi) hi = pts[k][i];
        }
        b.sides.push_back(Ival(ERat(lo - pad), ERat(hi + pad)));
    }
    return b;
}

// Adaptive box refinement for d >= 2. Splits over-budget boxes at the
// midpoint of their longest finite axis, breadth-first; boxes that cannot be
// split further (depth cap, no finite axis, or the node budget ran out) are
// returned as residual cells rather than silently violating the budget.
// Near-tangent surface pairs make over-budget regions shrink like the square
// root of the box width, so the node budget is what bounds the work on
// degenerate inputs.
inline Cutting cut_adaptive(const std::vector<Surface>& sigma, const Rat& r, std::size_t d,
                            int depth_cap, const Box& bbox, std::size_t max_nodes = 30000) {
    if (d < 2) throw input_error("cut_adaptive: use cut_1d for d == 1");
    if (r < 1) throw input_error("cut_adaptive: r must be at least 1");
    if (bbox.dim() != d) throw input_error("cut_adaptive: bounding box dimension mismatch");
    for (const auto& s : sigma)
        if (s.poly.nvars() != d) throw input_error("cut_adaptive: surface arity mismatch");

    Cutting cut;
    cut.dim = d;
    cut.r = r;
    cut.budget = static_cast<long>(rat_floor(Rat(static_cast<long>(sigma.size())) / r).get_si());

    struct Node {
        Box box;
        std::vector<std::size_t> crossing;
        std::vector<std::size_t> containing;
        int depth = 0;
    };

    std::vector<BoxRangeEvaluator> evals;
    evals.reserve(sigma.size());
    for (const auto& s : sigma) evals.emplace_back(s.poly);

    auto classify = [&](const Box& box, const std::vector<std::size_t>& candidates, Node& out) {
        out.box = box;
        for (std::size_t s : candidates) {
            if (sigma[s].degenerate) {
                out.containing.push_back(s);
                continue;
            }
            if (evals[s].certified_sign_on(box.sides) == 0) out.crossing.push_back(s);
        }
    };

    std::vector<std::size_t> all(sigma.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    Node root;
    classify(Box::whole(d), all, root);
    std::vector<Node> queue;
    if (static_cast<long>(root.crossing.size()) <= cut.budget) {
        cut.cells.push_back(Cell{CellRegion(root.box), root.crossing, root.containing});
        return cut;
    }

    // Initial 3^d grid around the data: the middle box is the padded
    // bounding box; outer layers absorb the rest of R^d.
    std::size_t combos = 1;
    for (std::size_t i = 0; i < d; ++i) combos *= 3;
    for (std::size_t code = 0; code < combos; ++code) {
        Box child;
        std::size_t c = code;
        for (std::size_t ax = 0; ax < d; ++ax) {
            std::size_t digit = c % 3;
            c /= 3;
            const Ival& mid = bbox.sides[ax];
            if (digit == 0)
                child.sides.push_back(Ival(ERat::neg_inf(), mid.lo));
            else if (digit == 1)
                child.sides.push_back(mid);
            else
                child.sides.push_back(Ival(mid.hi, ERat::pos_inf()));
        }
        Node n;
        classify(child, root.crossing, n);
        n.containing.insert(n.containing.end(), root.containing.begin(), root.containing.end());
        n.depth = 1;
        queue.push_back(std::move(n));
    }

    // Breadth-first waves; nodes within a wave are independent, so the
    // refinement parallelizes with a deterministic output order. A node
    // splits only while its global BFS index is under the node budget.
    std::size_t processed = 0;
    while (!queue.empty()) {
        const std::size_t wave = queue.size();
        struct Out {
            bool split = false;
            Node left, right;
        };
        std::vector<Out> outs(wave);
        parallel_for(wave, [&](std::size_t i) {
            Node& n = queue[i];
            std::sort(n.crossing.begin(), n.crossing.end());
            std::sort(n.containing.begin(), n.containing.end());
            if (static_cast<long>(n.crossing.size()) <= cut.budget) return;
            if (n.depth >= depth_cap || processed + i >= max_nodes) return;
            // Two split moves make progress on different inputs: halving the
            // longest finite axis separates bounded surface clusters, while
            // cutting an infinite axis at a point marching outward
            // geometrically lets unbounded slabs shed their open direction
            // (bounded surfaces are escaped in logarithmically many steps).
            // Alternating by depth guarantees both kinds of progress.
            int finite_axis = -1, inf_axis = -1;
            Rat best_len;
            for (std::size_t ax = 0; ax < d; ++ax) {
                const Ival& s = n.box.sides[ax];
                if (!s.lo.finite() || !s.hi.finite()) {
                    if (inf_axis < 0) inf_axis = static_cast<int>(ax);
                    continue;
                }
                Rat len = s.hi.v - s.lo.v;
                if (finite_axis < 0 || len > best_len) {
                    finite_axis = static_cast<int>(ax);
                    best_len = len;
                }
            }
            if (finite_axis >= 0 && best_len == 0) finite_axis = -1;
            bool prefer_infinite = n.depth % 2 == 0;
            int best_axis = prefer_infinite ? (inf_axis >= 0 ? inf_axis : finite_axis)
                                            : (finite_axis >= 0 ? finite_axis : inf_axis);
            bool infinite_axis = best_axis == inf_axis && inf_axis >= 0;
            if (best_axis < 0) return;  // stays a (residual) leaf
            const Ival side = n.box.sides[best_axis];
            Rat mid;
            if (!infinite_axis) {
                mid = (side.lo.v + side.hi.v) / 2;
            } else if (side.lo.finite()) {
                Rat step = abs(side.lo.v);
                if (step < 1) step = 1;
                mid = side.lo.v + step;
            } else if (side.hi.finite()) {
                Rat step = abs(side.hi.v);
                if (step < 1) step = 1;
                mid = side.hi.v - step;
            } else {
                mid = 0;
            }
            Box left_box = n.box, right_box = n.box;
            left_box.sides[best_axis] = Ival(side.lo, ERat(mid));
            right_box.sides[best_axis] = Ival(ERat(mid), side.hi);
            Out& o = outs[i];
            o.split = true;
            classify(left_box, n.crossing, o.left);
            classify(right_box, n.crossing, o.right);
            o.left.containing.insert(o.left.containing.end(), n.containing.begin(),
                                     n.containing.end());
            o.right.containing.insert(o.right.containing.end(), n.containing.begin(),
                                      n.containing.end());
            o.left.depth = o.right.depth = n.depth + 1;
        });
        std::vector<Node> next;
        for (std::size_t i = 0; i < wave; ++i) {
            if (outs[i].split) {
                next.push_back(std::move(outs[i].left));
                next.push_back(std::move(outs[i].right));
                continue;
            }
            Node& n = queue[i];
            if (static_cast<long>(n.crossing.size()) > cut.budget)
                cut.residual.push_back(cut.cells.size());
            cut.cells.push_back(Cell{CellRegion(n.box), std::move(n.crossing),
                                     std::move(n.containing)});
        }
        processed += wave;
        queue = std::move(next);
    }
    return cut;
}

// Index of the first cell (in emission order) whose closed region contains
// the point; boundary ties therefore go to the lexicographically-first cell.
inline std::size_t locate_point(const Cutting& cut, const Point& p) {
    for (std::size_t i = 0; i < cut.cells.size(); ++i) {
        const auto& reg = cut.cells[i].region;
        if (std::holds_alternative<Interval1>(reg)) {
            if (std::get<Interval1>(reg).contains(p[0])) return i;
        } else {
            if (std::get<Box>(reg).contains(p)) return i;
        }
    }
    throw input_error("locate_point: point not covered by any cell");
}

}  // namespace sareg
