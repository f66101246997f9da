#pragma once

// Small exact graph machinery: branch-and-bound clique and independence
// numbers, fixed-size clique search, the greedy matching from the matching
// lemma, and bipartite codegree checks. Everything is deterministic; first
// witnesses are lexicographic with respect to vertex order.

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "sareg/rational.hpp"

namespace sareg {

class DynBitset {
public:
    DynBitset() = default;
    explicit DynBitset(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t size() const { return n_; }
    void set(std::size_t i) { w_[i / 64] |= 1ull << (i % 64); }
    void reset(std::size_t i) { w_[i / 64] &= ~(1ull << (i % 64)); }
    bool test(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }
    bool any() const {
        for (auto x : w_)
            if (x) return true;
        return false;
    }
    DynBitset& operator&=(const DynBitset& o) {
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    // lowest set index or npos
    std::size_t first() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return i * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[i]));
        return static_cast<std::size_t>(-1);
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            std::uint64_t x = w_[i];
            while (x) {
                std::size_t b = static_cast<std::size_t>(__builtin_ctzll(x));
                fn(i * 64 + b);
                x &= x - 1;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct Graph {
    std::size_t n = 0;
    std::vector<DynBitset> adj;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // in insertion order

    Graph() = default;
    explicit Graph(std::size_t nverts) : n(nverts), adj(nverts, DynBitset(nverts)) {}

    void add_edge(std::size_t a, std::size_t b) {
        if (a == b || a >= n || b >= n) throw input_error("add_edge: bad endpoints");
        if (adj[a].test(b)) return;
        adj[a].set(b);
        adj[b].set(a);
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    bool has_edge(std::size_t a, std::size_t b) const { return adj[a].test(b); }
    std::size_t degree(std::size_t v) const { return adj[v].count(); }

    Graph complement() const {
        Graph g(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (!adj[a].test(b)) g.add_edge(a, b);
        return g;
    }
};

namespace detail {

// Greedy colouring upper bound for the max clique inside `cand`.
inline std::size_t colour_bound(const Graph& g, const DynBitset& cand) {
    std::size_t colours = 0;
    DynBitset left = cand;
    while (left.any()) {
        ++colours;
        DynBitset cls = left;
        while (cls.any()) {
            std::size_t v = cls.first();
            left.reset(v);
            cls.reset(v);
            // remove v's neighbours from this colour class
            DynBitset keep = cls;
            keep.for_each([&](std::size_t u) {
                if (g.adj[v].test(u)) cls.reset(u);
            });
        }
    }
    return colours;
}

inline void max_clique_rec(const Graph& g, DynBitset cand, std::vector<std::size_t>& cur,
                           std::vector<std::size_t>& best) {
    if (cur.size() + cand.count() <= best.size()) return;
    if (cur.size() + colour_bound(g, cand) <= best.size()) return;
    while (cand.any()) {
        if (cur.size() + cand.count() <= best.size()) return;
        std::size_t v = cand.first();
        cand.reset(v);
        cur.push_back(v);
        DynBitset next = cand;
        next &= g.adj[v];
        if (cur.size() > best.size()) best = cur;
        max_clique_rec(g, next, cur, best);
        cur.pop_back();
    }
}

}  // namespace detail

struct CapExceeded {};

// Exact clique number with witness; vertex-count cap keeps runtimes sane.
inline std::optional<std::vector<std::size_t>> clique_number_exact(const Graph& g,
                                                                   std::size_t cap = 60) {
    if (g.n > cap) return std::nullopt;
    DynBitset all(g.n);
    for (std::size_t v = 0; v < g.n; ++v) all.set(v);
    std::vector<std::size_t> cur, best;
    detail::max_clique_rec(g, all, cur, best);
    return best;
}

inline std::optional<std::vector<std::size_t>> independence_number_exact(const Graph& g,
                                                                         std::size_t cap = 60) {
    return clique_number_exact(g.complement(), cap);
}

namespace detail {

inline bool clique_of_size_rec(const Graph& g, std::size_t k, std::size_t start,
                               std::vector<std::size_t>& cur) {
    if (cur.size() == k) return true;
    for (std::size_t v = start; v < g.n; ++v) {
        if (g.n - v < k - cur.size()) return false;
        bool ok = true;
        for (std::size_t u : cur)
            if (!g.adj[u].test(v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        cur.push_back(v);
        if (clique_of_size_rec(g, k, v + 1, cur)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace detail

// Lexicographically-first clique of exactly k vertices, if one exists.
inline std::optional<std::vector<std::size_t>> find_clique_of_size(const Graph& g, std::size_t k) {
    if (k == 0) return std::vector<std::size_t>{};
    if (k > g.n) return std::nullopt;
    std::vector<std::size_t> cur;
    cur.reserve(k);
    if (detail::clique_of_size_rec(g, k, 0, cur)) return cur;
    return std::nullopt;
}

// First triangle in lexicographic order, if any.
inline std::optional<std::array<std::size_t, 3>> find_triangle(const Graph& g) {
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = a + 1; b < g.n; ++b) {
            if (!g.adj[a].test(b)) continue;
            DynBitset common = g.adj[a];
            common &= g.adj[b];
            std::size_t c = common.first();
            while (c != static_cast<std::size_t>(-1) && c <= b) {
                common.reset(c);
                c = common.first();
            }
            if (c != static_cast<std::size_t>(-1)) return std::array<std::size_t, 3>{a, b, c};
        }
    return std::nullopt;
}

// The matching lemma's greedy: walk the edges in order, keep an edge when
// both ends are free. Validates the max-degree precondition; the result is a
// maximal matching of size at least |E| / (2p).
inline std::vector<std::pair<std::size_t, std::size_t>> greedy_matching(const Graph& g,
                                                                        std::size_t p) {
    for (std::size_t v = 0; v < g.n; ++v)
        if (g.degree(v) > p) throw input_error("greedy_matching: a vertex exceeds the degree bound");
    std::vector<char> used(g.n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> matching;
    for (auto [a, b] : g.edges) {
        if (used[a] || used[b]) continue;
        used[a] = used[b] = 1;
        matching.emplace_back(a, b);
    }
    return matching;
}

// Bipartite graph on U (size m) x V (size n); adjacency from U's side.
struct Bipartite {
    std::size_t m = 0, n = 0;
    std::vector<DynBitset> nb;  // per U vertex, neighbours in V

    Bipartite() = default;
    Bipartite(std::size_t mu, std::size_t nv) : m(mu), n(nv), nb(mu, DynBitset(nv)) {}

    void add_edge(std::size_t u, std::size_t v) {
        if (u >= m || v >= n) throw input_error("bipartite add_edge: bad endpoints");
        nb[u].set(v);
    }
    std::size_t edge_count() const {
        std::size_t e = 0;
        for (const auto& b : nb) e += b.count();
        return e;
    }
    std::size_t codegree(std::size_t u1, std::size_t u2) const {
        DynBitset c = nb[u1];
        c &= nb[u2];
        return c.count();
    }
    // K_{2,r}-free with the 2 on the U side: every U pair has codegree < r.
    bool k2r_free(std::size_t r) const {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b)
                if (codegree(a, b) >= r) return false;
        return true;
    }
};

}  // namespace sareg
