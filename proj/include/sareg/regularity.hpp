#pragma once

// The multicolor homogeneous partition: build one surface per (point,
// relation, polynomial), cut space so few surfaces cross each cell, refine
// each cell's points by the full sign signature of their surfaces, and
// verify the epsilon-guarantee exhaustively. Parts are (cell, signature)
// classes; points stranded in over-budget residual cells are quarantined
// into singleton parts.

#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sareg/cutting.hpp"
#include "sareg/parallel.hpp"
#include "sareg/relation.hpp"

namespace sareg {

struct partition_degraded : std::runtime_error {
    Rat residual_mass;
    partition_degraded(const std::string& msg, Rat mass)
        : std::runtime_error(msg), residual_mass(std::move(mass)) {}
};

struct Partition {
    struct Provenance {
        std::size_t cell = 0;
        std::size_t signature = 0;
    };
    std::vector<std::vector<std::size_t>> parts;  // disjoint cover of {0..n-1}
    std::vector<Provenance> provenance;           // one entry per part
    std::vector<std::size_t> quarantined;         // part indices that are residual singletons

    std::size_t K() const { return parts.size(); }

    void validate_cover(std::size_t n) const {
        std::vector<char> seen(n, 0);
        for (const auto& part : parts)
            for (std::size_t p : part) {
                if (p >= n || seen[p]) throw input_error("partition is not a disjoint cover");
                seen[p] = 1;
            }
        for (char c : seen)
            if (!c) throw input_error("partition misses a point");
    }
};

// Precomputed relation membership for every unordered point pair; one bit
// per relation. This is the single source both verifiers read.
class PairMasks {
public:
    PairMasks(const PointSet& pts, const RelationFamily& fam) : n_(pts.size()), m_(fam.size()) {
        wpp_ = (m_ + 63) / 64;
        words_.assign(wpp_ * n_ * (n_ - 1) / 2 + wpp_, 0);  // +pad for n<2
        std::vector<std::size_t> offsets(n_, 0);
        for (std::size_t i = 0, acc = 0; i < n_; ++i) {
            offsets[i] = acc;
            acc += n_ - 1 - i;
        }
        offsets_ = std::move(offsets);
        parallel_for(n_, [&](std::size_t i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                std::uint64_t* w = word_ptr(i, j);
                for (std::size_t rel = 0; rel < m_; ++rel)
                    if (fam[rel].holds(pts[i], pts[j])) w[rel / 64] |= 1ull << (rel % 64);
            }
        });
    }

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    std::size_t words_per_pair() const { return wpp_; }

    bool holds(std::size_t i, std::size_t j, std::size_t rel) const {
        if (i == j) throw input_error("PairMasks: diagonal query");
        const std::uint64_t* w = word_ptr_c(std::min(i, j), std::max(i, j));
        return (w[rel / 64] >> (rel % 64)) & 1;
    }
    bool covered(std::size_t i, std::size_t j) const {
        const std::uint64_t* w = word_ptr_c(std::min(i, j), std::max(i, j));
        for (std::size_t k = 0; k < wpp_; ++k)
            if (w[k]) return true;
        return false;
    }
    // AND-accumulates the pair's mask into acc; returns true while any bit
    // survives.
    bool and_into(std::size_t i, std::size_t j, std::uint64_t* acc) const {
        const std::uint64_t* w = word_ptr_c(std::min(i, j), std::max(i, j));
        bool alive = false;
        for (std::size_t k = 0; k < wpp_; ++k) {
            acc[k] &= w[k];
            alive = alive || acc[k];
        }
        return alive;
    }

private:
    std::uint64_t* word_ptr(std::size_t i, std::size_t j) {
        return words_.data() + wpp_ * (offsets_[i] + (j - i - 1));
    }
    const std::uint64_t* word_ptr_c(std::size_t i, std::size_t j) const {
        return words_.data() + wpp_ * (offsets_[i] + (j - i - 1));
    }

    std::size_t n_, m_, wpp_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint64_t> words_;
};

// Exactly one surface per (point, relation, polynomial); identically-zero
// partial evaluations are flagged degenerate.
inline std::vector<Surface> build_surfaces(const PointSet& pts, const RelationFamily& fam) {
    std::vector<Surface> sigma;
    sigma.reserve(pts.size() * fam.total_polynomials());
    for (std::size_t u = 0; u < pts.size(); ++u)
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t k = 0; k < fam[i].polys.size(); ++k) {
                Polynomial part = fam[i].polys[k].partial_eval_prefix(pts[u].coords);
                sigma.push_back(Surface::from_poly(std::move(part), {u, i, k}));
            }
    return sigma;
}

struct HomogeneityReport {
    struct BadPair {
        std::size_t part_a = 0, part_b = 0;
        // one refuting point pair per relation: (relation, u, v) with u in
        // part_a, v in part_b and (u, v) not in the relation
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> refutations;
    };
    std::vector<BadPair> bad_pairs;
    Rat bad_mass;                 // sum |A||B| / n^2 over bad pairs
    std::size_t part_pairs = 0;   // C(K, 2)
    Rat bad_fraction;             // bad pairs / part pairs

    bool within(const Rat& eps) const { return bad_mass <= eps; }
};

// Exhaustive homogeneity audit: a pair of parts is homogeneous iff a single
// relation contains its full product. Intra-part pairs are not counted.
inline HomogeneityReport verify_homogeneity(const PointSet& pts, const RelationFamily& fam,
                                            const Partition& part, const PairMasks& masks) {
    part.validate_cover(pts.size());
    if (masks.n() != pts.size() || masks.m() != fam.size())
        throw input_error("verify_homogeneity: masks do not match the instance");
    HomogeneityReport rep;
    rep.bad_mass = 0;
    rep.bad_fraction = 0;
    const std::size_t K = part.parts.size();
    rep.part_pairs = K * (K - 1) / 2;
    const std::size_t wpp = masks.words_per_pair();
    std::vector<std::uint64_t> acc(wpp);
    const Rat n2 = Rat(static_cast<long>(pts.size())) * Rat(static_cast<long>(pts.size()));
    for (std::size_t a = 0; a < K; ++a) {
        for (std::size_t b = a + 1; b < K; ++b) {
            for (std::size_t k = 0; k < wpp; ++k) acc[k] = ~0ull;
            bool alive = true;
            for (std::size_t u : part.parts[a]) {
                for (std::size_t v : part.parts[b]) {
                    if (!masks.and_into(u, v, acc.data())) {
                        alive = false;
                        break;
                    }
                }
                if (!alive) break;
            }
            if (alive) continue;
            HomogeneityReport::BadPair bad;
            bad.part_a = a;
            bad.part_b = b;
            for (std::size_t rel = 0; rel < masks.m(); ++rel) {
                bool found = false;
                for (std::size_t u : part.parts[a]) {
                    for (std::size_t v : part.parts[b]) {
                        if (!masks.holds(u, v, rel)) {
                            bad.refutations.emplace_back(rel, u, v);
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
            }
            rep.bad_mass += Rat(static_cast<long>(part.parts[a].size())) *
                            Rat(static_cast<long>(part.parts[b].size())) / n2;
            rep.bad_pairs.push_back(std::move(bad));
        }
    }
    if (rep.part_pairs > 0)
        rep.bad_fraction =
            Rat(static_cast<long>(rep.bad_pairs.size())) / Rat(static_cast<long>(rep.part_pairs));
    return rep;
}

inline HomogeneityReport verify_homogeneity(const PointSet& pts, const RelationFamily& fam,
                                            const Partition& part) {
    PairMasks masks(pts, fam);
    return verify_homogeneity(pts, fam, part, masks);
}

struct RegularityOptions {
    int depth_cap = 40;
    std::size_t max_cut_nodes = 30000;
};

struct RegularityResult {
    Partition partition;
    Cutting cutting;
    Rat r;
    Rat eps;
    std::size_t signature_classes = 0;
    Rat residual_mass;  // quarantined points / n
};

namespace detail {

// Per-point signature: for every (surface slot, cell), CROSSES or the
// constant sign of the slot's surface on that cell. Encoded one byte per
// entry: 'X', '-', '0', '+'.
inline std::vector<std::string> point_signatures(const PointSet& pts,
                                                 const std::vector<Surface>& sigma,
                                                 std::size_t slots, const Cutting& cut) {
    const std::size_t cells = cut.cells.size();
    std::vector<std::vector<std::uint32_t>> crossed(sigma.size());
    for (std::size_t c = 0; c < cells; ++c)
        for (std::size_t idx : cut.cells[c].crossing)
            crossed[idx].push_back(static_cast<std::uint32_t>(c));
    // status per surface x cell, surface-major
    std::vector<char> table(sigma.size() * cells);
    parallel_for(sigma.size(), [&](std::size_t s) {
        char* row = table.data() + s * cells;
        if (sigma[s].degenerate) {
            std::memset(row, '0', cells);
            return;
        }
        if (cut.dim == 1) {
            UniPoly u = detail::to_unipoly(sigma[s].poly);
            for (std::size_t c = 0; c < cells; ++c) {
                const auto& iv = std::get<Interval1>(cut.cells[c].region);
                int sg = sgn(u.eval(iv.sample_inside()));
                row[c] = sg > 0 ? '+' : (sg < 0 ? '-' : '0');
            }
        } else {
            BoxRangeEvaluator ev(sigma[s].poly);
            for (std::size_t c = 0; c < cells; ++c) {
                const auto& box = std::get<Box>(cut.cells[c].region);
                int sg = ev.range(box.sides).certified_sign();
                row[c] = sg == 0 ? 'X' : (sg > 0 ? '+' : '-');
            }
        }
        for (std::uint32_t c : crossed[s]) row[c] = 'X';
    });
    // Assemble per-point signatures, slot-major within a point.
    std::vector<std::string> sigs(pts.size());
    parallel_for(pts.size(), [&](std::size_t u) {
        std::string sig(slots * cells, '?');
        for (std::size_t slot = 0; slot < slots; ++slot) {
            const char* row = table.data() + (u * slots + slot) * cells;
            std::copy(row, row + cells, sig.begin() + slot * cells);
        }
        sigs[u] = std::move(sig);
    });
    return sigs;
}

}  // namespace detail

// Theorem-reg style partition at parameter eps. Throws input_error for a
// non-covering or asymmetric family, partition_degraded when residual cells
// strand more than eps/2 of the points (or the verified guarantee fails
// with residuals present).
inline RegularityResult partition_homogeneous(const PointSet& pts, const RelationFamily& fam,
                                              const Rat& eps,
                                              const RegularityOptions& opts = {},
                                              const PairMasks* premasks = nullptr) {
    if (!(eps > 0 && eps < 1)) throw input_error("partition_homogeneous: eps must be in (0,1)");
    fam.validate();
    if (!fam.covering) throw input_error("partition_homogeneous: family must declare covering");
    if (fam.dim() != pts.dim) throw input_error("partition_homogeneous: dimension mismatch");
    const std::size_t n = pts.size();
    if (n == 0) throw input_error("partition_homogeneous: empty point set");

    std::optional<PairMasks> own;
    if (!premasks) {
        own.emplace(pts, fam);
        premasks = &*own;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!premasks->covered(i, j))
                throw input_error("partition_homogeneous: family does not cover the point set");
    bool structural = true;
    for (const auto& r : fam.relations) structural = structural && r.structurally_symmetric();
    if (!structural) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (const auto& r : fam.relations)
                    if (r.holds(pts[i], pts[j]) != r.holds(pts[j], pts[i]))
                        throw input_error("partition_homogeneous: relation family is asymmetric");
    }

    const std::size_t s_total = fam.total_polynomials();
    std::vector<Surface> sigma = build_surfaces(pts, fam);
    Rat r = Rat(static_cast<long>(s_total)) / eps;
    if (r < 1) r = 1;

    RegularityResult res;
    res.eps = eps;
    res.r = r;
    if (pts.dim == 1) {
        res.cutting = cut_1d(sigma, r);
    } else {
        // A zero budget asks every cell to avoid every surface; the box
        // refinement cannot deliver that around data-bound surfaces, so the
        // instance scale is declared insufficient up front.
        if (rat_floor(Rat(static_cast<long>(sigma.size())) / r) == 0)
            throw partition_degraded(
                "partition_homogeneous: eps is below the feasible scale (cell budget 0)", Rat(1));
        res.cutting = cut_adaptive(sigma, r, pts.dim, opts.depth_cap, bounding_box_of(pts, 1),
                                   opts.max_cut_nodes);
    }

    std::vector<char> residual_cell(res.cutting.cells.size(), 0);
    for (std::size_t c : res.cutting.residual) residual_cell[c] = 1;
    std::vector<std::size_t> cell_of(n);
    std::vector<std::size_t> quarantined_points;
    for (std::size_t u = 0; u < n; ++u) {
        cell_of[u] = locate_point(res.cutting, pts[u]);
        if (residual_cell[cell_of[u]]) quarantined_points.push_back(u);
    }
    res.residual_mass = Rat(static_cast<long>(quarantined_points.size())) / Rat(static_cast<long>(n));
    if (res.residual_mass > eps / 2)
        throw partition_degraded("partition_homogeneous: residual cells strand more than eps/2 of the points",
                                 res.residual_mass);

    std::vector<std::string> sigs = detail::point_signatures(pts, sigma, s_total, res.cutting);

    std::map<std::pair<std::size_t, std::string>, std::size_t> sig_ids;  // (cell, sig) -> sig id
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> part_of;  // (cell, sig id) -> part
    Partition part;
    for (std::size_t u = 0; u < n; ++u) {
        if (residual_cell[cell_of[u]]) continue;
        auto key = std::make_pair(cell_of[u], sigs[u]);
        auto [it, fresh] = sig_ids.try_emplace(key, sig_ids.size());
        auto [pit, pfresh] = part_of.try_emplace(std::make_pair(cell_of[u], it->second),
                                                 part.parts.size());
        if (pfresh) {
            part.parts.emplace_back();
            part.provenance.push_back({cell_of[u], it->second});
        }
        part.parts[pit->second].push_back(u);
    }
    res.signature_classes = sig_ids.size();
    for (std::size_t u : quarantined_points) {
        part.quarantined.push_back(part.parts.size());
        part.provenance.push_back({cell_of[u], sig_ids.size() + part.quarantined.size() - 1});
        part.parts.push_back({u});
    }
    res.partition = std::move(part);

    if (!quarantined_points.empty()) {
        HomogeneityReport rep = verify_homogeneity(pts, fam, res.partition, *premasks);
        if (!rep.within(eps))
            throw partition_degraded(
                "partition_homogeneous: quarantined residuals break the eps guarantee",
                res.residual_mass);
    }
    return res;
}

struct RefinedPartition {
    std::vector<std::vector<std::size_t>> parts;
    std::vector<std::optional<std::size_t>> origin;  // inner part, if the block is pure
    std::size_t K = 0;
    Rat bad_fraction;
    std::size_t retries = 0;  // times K was doubled to reach the guarantee
};

namespace detail {

inline Rat block_bad_fraction(const std::vector<std::vector<std::size_t>>& blocks,
                              const PairMasks& masks) {
    const std::size_t K = blocks.size();
    if (K < 2) return Rat(0);
    std::size_t bad = 0;
    const std::size_t wpp = masks.words_per_pair();
    std::vector<std::uint64_t> acc(wpp);
    for (std::size_t a = 0; a < K; ++a)
        for (std::size_t b = a + 1; b < K; ++b) {
            for (std::size_t k = 0; k < wpp; ++k) acc[k] = ~0ull;
            bool alive = true;
            for (std::size_t u : blocks[a]) {
                for (std::size_t v : blocks[b]) {
                    if (!masks.and_into(u, v, acc.data())) {
                        alive = false;
                        break;
                    }
                }
                if (!alive) break;
            }
            if (!alive) ++bad;
        }
    return Rat(static_cast<long>(bad)) / Rat(static_cast<long>(K * (K - 1) / 2));
}

}  // namespace detail

// Equitable refinement: chop the inner parts into blocks of size
// floor(n/K) / ceil(n/K), pooling the leftovers. K starts at
// min(ceil(8 K' / eps), n) and doubles (capped at n) until the exhaustively
// verified non-homogeneous block-pair fraction is below eps; K = n always
// terminates the loop since singleton pairs are homogeneous under a
// covering family.
inline RefinedPartition equitable_refine(const PointSet& pts, const RelationFamily& fam,
                                         const Partition& inner, const Rat& eps,
                                         const PairMasks* premasks = nullptr) {
    inner.validate_cover(pts.size());
    const std::size_t n = pts.size();
    std::optional<PairMasks> own;
    if (!premasks) {
        own.emplace(pts, fam);
        premasks = &*own;
    }
    Rat kq = Rat(8) * Rat(static_cast<long>(inner.parts.size())) / eps;
    std::size_t K = static_cast<std::size_t>(rat_ceil(kq).get_ui());
    if (K > n) K = n;
    if (K == 0) K = 1;

    RefinedPartition out;
    while (true) {
        const std::size_t small = n / K;
        std::size_t nbig = n % K;
        std::size_t nsmall = K - nbig;
        std::vector<std::vector<std::size_t>> blocks;
        std::vector<std::optional<std::size_t>> origin;
        std::vector<std::size_t> pool;
        std::vector<std::size_t> pool_origin_breaks;
        for (std::size_t pi = 0; pi < inner.parts.size(); ++pi) {
            const auto& p = inner.parts[pi];
            std::size_t at = 0;
            while (true) {
                std::size_t want = 0;
                if (nbig > 0 && p.size() - at >= small + 1)
                    want = small + 1;
                else if (nsmall > 0 && p.size() - at >= small && small > 0)
                    want = small;
                if (want == 0) break;
                blocks.emplace_back(p.begin() + at, p.begin() + at + want);
                origin.emplace_back(pi);
                at += want;
                if (want == small + 1) --nbig; else --nsmall;
            }
            pool.insert(pool.end(), p.begin() + at, p.end());
        }
        std::size_t at = 0;
        while (nbig > 0) {
            blocks.emplace_back(pool.begin() + at, pool.begin() + at + small + 1);
            origin.emplace_back(std::nullopt);
            at += small + 1;
            --nbig;
        }
        while (nsmall > 0) {
            blocks.emplace_back(pool.begin() + at, pool.begin() + at + small);
            origin.emplace_back(std::nullopt);
            at += small;
            --nsmall;
        }
        Rat frac = detail::block_bad_fraction(blocks, *premasks);
        if (frac < eps || K >= n) {
            out.parts = std::move(blocks);
            out.origin = std::move(origin);
            out.K = K;
            out.bad_fraction = frac;
            return out;
        }
        K = std::min(n, K * 2);
        ++out.retries;
    }
}

}  // namespace sareg
