#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sareg/regularity.hpp"
#include "test_util.hpp"

using namespace sareg;
using namespace sareg::testutil;

namespace {

// Independent homogeneity oracle: per part pair, scan relations directly
// against formula evaluation (no masks, no early-exit sharing).
Rat oracle_bad_mass(const PointSet& pts, const RelationFamily& fam, const Partition& part) {
    Rat bad = 0;
    const Rat n2 = Rat(static_cast<long>(pts.size())) * Rat(static_cast<long>(pts.size()));
    for (std::size_t a = 0; a < part.parts.size(); ++a)
        for (std::size_t b = a + 1; b < part.parts.size(); ++b) {
            bool homogeneous = false;
            for (std::size_t rel = 0; rel < fam.size() && !homogeneous; ++rel) {
                bool all = true;
                for (std::size_t u : part.parts[a])
                    for (std::size_t v : part.parts[b])
                        if (!fam[rel].holds(pts[u], pts[v])) {
                            all = false;
                            break;
                        }
                homogeneous = all;
            }
            if (!homogeneous)
                bad += Rat(static_cast<long>(part.parts[a].size())) *
                       Rat(static_cast<long>(part.parts[b].size())) / n2;
        }
    return bad;
}

RelationFamily layered_m2_family() {
    Rat c(20);
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial q = d * d;
    SemiAlgebraicRelation band;
    band.dim = 1;
    band.complexity = 4;
    band.polys.push_back(Polynomial::constant(2, c * c) - q * 4);
    band.polys.push_back(q - Polynomial::constant(2, 4 * c * c));
    band.formula = Formula::conj({lt(0), lt(1)});
    RelationFamily fam;
    fam.relations = {unit_distance_1d(), band};
    fam.covering = true;
    fam.disjoint = true;
    return fam;
}

PointSet random_points_1d(std::mt19937& rng, std::size_t n, long span) {
    std::vector<long> vals;
    std::vector<char> used(2 * span + 1, 0);
    while (vals.size() < n) {
        long v = static_cast<long>(rng() % (2 * span + 1)) - span;
        if (!used[v + span]) {
            used[v + span] = 1;
            vals.push_back(v);
        }
    }
    std::vector<Point> pts;
    for (long v : vals) pts.push_back(Point{Rat(v)});
    return PointSet(1, std::move(pts));
}

PointSet random_points_2d(std::mt19937& rng, std::size_t n, long span) {
    std::vector<Point> pts;
    std::set<std::pair<long, long>> used;
    while (pts.size() < n) {
        long x = static_cast<long>(rng() % (2 * span + 1)) - span;
        long y = static_cast<long>(rng() % (2 * span + 1)) - span;
        if (used.emplace(x, y).second) pts.push_back(Point{Rat(x), Rat(y)});
    }
    return PointSet(2, std::move(pts));
}

// Disjoint covering band family on squared distance, any dimension.
RelationFamily band_family(std::size_t dim, const std::vector<Rat>& breaks) {
    Polynomial q(2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Polynomial d = Polynomial::variable(2 * dim, i) - Polynomial::variable(2 * dim, dim + i);
        q = q + d * d;
    }
    RelationFamily fam;
    Rat lo = 0;
    auto make = [&](const Rat& lo_b, const Rat& hi_b, bool unbounded) {
        SemiAlgebraicRelation r;
        r.dim = dim;
        r.complexity = 3;
        std::vector<Formula> clauses;
        r.polys.push_back(q - Polynomial::constant(2 * dim, lo_b));
        clauses.push_back(Formula::atom(0));
        if (!unbounded) {
            r.polys.push_back(q - Polynomial::constant(2 * dim, hi_b));
            clauses.push_back(lt(1));
        }
        r.formula = Formula::conj(std::move(clauses));
        r.validate();
        return r;
    };
    for (const Rat& b : breaks) {
        fam.relations.push_back(make(lo, b, false));
        lo = b;
    }
    fam.relations.push_back(make(lo, Rat(0), true));
    fam.covering = true;
    fam.disjoint = true;
    return fam;
}

}  // namespace

TEST(BuildSurfaces, Counts) {
    RelationFamily allpairs;
    allpairs.relations.push_back(atom_relation(1, Polynomial::constant(2, 1), 1));
    allpairs.covering = true;
    auto s1 = build_surfaces(points_1d({0, 1, 2}), allpairs);
    EXPECT_EQ(s1.size(), 3u);

    RelationFamily unit;
    unit.relations.push_back(unit_distance_1d());
    unit.covering = false;
    auto s2 = build_surfaces(points_1d({0, 2}), unit);
    ASSERT_EQ(s2.size(), 4u);  // two polynomials (g and -g) per point
    // first point's first surface: (y - 0)^2 - 1, root set {-1, 1}
    EXPECT_EQ(s2[0].poly.eval(std::vector<Rat>{Rat(1)}), Rat(0));
    EXPECT_EQ(s2[0].poly.eval(std::vector<Rat>{Rat(-1)}), Rat(0));
    // second point's: (y - 2)^2 - 1 vanishes at 1 and 3
    EXPECT_EQ(s2[2].poly.eval(std::vector<Rat>{Rat(3)}), Rat(0));

    auto fam = band_family(1, {Rat(9)});  // 2 relations, sizes 2 and 1 polys
    EXPECT_EQ(fam.total_polynomials(), 3u);
    EXPECT_EQ(build_surfaces(points_1d({0, 1, 2, 3, 4}), fam).size(), 15u);
}

TEST(PartitionHomogeneous, AllPairsSingleRelation) {
    RelationFamily allpairs;
    allpairs.relations.push_back(atom_relation(1, Polynomial::constant(2, 1), 1));
    allpairs.covering = true;
    PointSet pts = points_1d({1, 5, 9, 12});
    auto res = partition_homogeneous(pts, allpairs, frac(1, 2));
    EXPECT_EQ(res.partition.K(), 1u);
    auto rep = verify_homogeneity(pts, allpairs, res.partition);
    EXPECT_EQ(rep.bad_mass, Rat(0));
}

TEST(PartitionHomogeneous, LayeredFourPoints) {
    auto fam = layered_m2_family();
    PointSet pts = points_1d({1, 2, 21, 22});
    auto res = partition_homogeneous(pts, fam, frac(1, 4));
    auto rep = verify_homogeneity(pts, fam, res.partition);
    EXPECT_LE(rep.bad_mass, frac(1, 4));
    EXPECT_EQ(rep.bad_mass, oracle_bad_mass(pts, fam, res.partition));
}

TEST(PartitionHomogeneous, ConvexPositionBands) {
    // convex position: points on a parabola; circle-band family at eps = 1/2
    std::vector<Point> pts;
    for (long x = -5; x <= 6; ++x) pts.push_back(Point{Rat(x), Rat(x) * Rat(x)});
    PointSet v(2, std::move(pts));
    auto fam = band_family(2, {Rat(25)});
    auto res = partition_homogeneous(v, fam, frac(1, 2));
    auto rep = verify_homogeneity(v, fam, res.partition);
    EXPECT_LE(rep.bad_mass, frac(1, 2));
    EXPECT_EQ(rep.bad_mass, oracle_bad_mass(v, fam, res.partition));
}

TEST(PartitionHomogeneous, NonCoveringRejected) {
    RelationFamily unit;
    unit.relations.push_back(unit_distance_1d());
    unit.covering = true;  // declared but false on this set
    EXPECT_THROW(partition_homogeneous(points_1d({0, 5}), unit, frac(1, 2)), input_error);
}

TEST(PartitionHomogeneous, DegradedOnDegenerateSurfaces) {
    // every point emits the same point-circle surface; a small depth cap
    // strands the cluster at (1,1) in a residual box
    Polynomial g(4);
    {
        Polynomial y1 = Polynomial::variable(4, 2) - Polynomial::constant(4, 1);
        Polynomial y2 = Polynomial::variable(4, 3) - Polynomial::constant(4, 1);
        g = y1 * y1 + y2 * y2;
    }
    RelationFamily fam;
    fam.relations.push_back(atom_relation(2, g, 2));  // g >= 0 always: covering
    fam.covering = true;
    std::vector<Point> pts;
    for (long k = 0; k < 12; ++k) pts.push_back(Point{Rat(1) + frac(1, 100 + k), Rat(1)});
    RegularityOptions opts;
    opts.depth_cap = 3;
    EXPECT_THROW(partition_homogeneous(PointSet(2, pts), fam, frac(1, 4), opts),
                 partition_degraded);
}

TEST(VerifyHomogeneity, SingletonsAndWhole) {
    auto fam = layered_m2_family();
    PointSet pts = points_1d({1, 2, 21, 22});
    Partition singles;
    for (std::size_t i = 0; i < 4; ++i) {
        singles.parts.push_back({i});
        singles.provenance.push_back({0, i});
    }
    auto rep = verify_homogeneity(pts, fam, singles);
    EXPECT_EQ(rep.bad_mass, Rat(0));

    Partition whole;
    whole.parts.push_back({0, 1, 2, 3});
    whole.provenance.push_back({0, 0});
    auto rep2 = verify_homogeneity(pts, fam, whole);
    EXPECT_EQ(rep2.bad_mass, Rat(0));
    EXPECT_EQ(rep2.part_pairs, 0u);
}

TEST(VerifyHomogeneity, WitnessRelationIdentified) {
    auto fam = layered_m2_family();
    PointSet pts = points_1d({1, 21});
    Partition two;
    two.parts = {{0}, {1}};
    two.provenance = {{0, 0}, {1, 1}};
    auto rep = verify_homogeneity(pts, fam, two);
    EXPECT_TRUE(rep.bad_pairs.empty());  // homogeneous via the band relation
}

TEST(VerifyHomogeneity, RefutationsPerRelation) {
    auto fam = layered_m2_family();
    // {1,2} vs {3}: |1-3| = 2 (no relation), so the pair is bad with a
    // refutation for each relation
    PointSet pts = points_1d({1, 2, 3});
    Partition p;
    p.parts = {{0, 1}, {2}};
    p.provenance = {{0, 0}, {0, 1}};
    auto rep = verify_homogeneity(pts, fam, p);
    ASSERT_EQ(rep.bad_pairs.size(), 1u);
    EXPECT_EQ(rep.bad_pairs[0].refutations.size(), fam.size());
}

TEST(EquitableRefine, TwelvePointsSpecExample) {
    auto fam = band_family(1, {Rat(25)});
    std::mt19937 rng(3);
    PointSet pts = random_points_1d(rng, 12, 60);
    // inner partition with parts sized 7 and 5 (provenance irrelevant here)
    Partition inner;
    inner.parts = {{0, 1, 2, 3, 4, 5, 6}, {7, 8, 9, 10, 11}};
    inner.provenance = {{0, 0}, {0, 1}};
    auto refined = equitable_refine(pts, fam, inner, frac(1, 2));
    EXPECT_EQ(refined.K, 12u);  // min(ceil(8*2/(1/2)), 12) = min(32, 12)
    EXPECT_EQ(refined.parts.size(), 12u);
    for (const auto& blk : refined.parts) EXPECT_EQ(blk.size(), 1u);
    EXPECT_EQ(refined.bad_fraction, Rat(0));
}

TEST(EquitableRefine, SizesSpecExample) {
    // n=100, K'=4, eps=1/2 -> K = 64, sizes 1 or 2
    RelationFamily allpairs;
    allpairs.relations.push_back(atom_relation(1, Polynomial::constant(2, 1), 1));
    allpairs.covering = true;
    std::mt19937 rng(4);
    PointSet pts = random_points_1d(rng, 100, 500);
    Partition inner;
    inner.parts = {{}, {}, {}, {}};
    for (std::size_t i = 0; i < 100; ++i) inner.parts[i % 4].push_back(i);
    inner.provenance.assign(4, {0, 0});
    auto refined = equitable_refine(pts, allpairs, inner, frac(1, 2));
    EXPECT_EQ(refined.K, 64u);
    std::size_t mn = 100, mx = 0;
    for (const auto& blk : refined.parts) {
        mn = std::min(mn, blk.size());
        mx = std::max(mx, blk.size());
    }
    EXPECT_LE(mx - mn, 1u);
    EXPECT_LT(refined.bad_fraction, frac(1, 2));
}

TEST(EquitableRefine, RandomInstancesMeetGuarantee) {
    std::mt19937 rng(9);
    for (int iter = 0; iter < 6; ++iter) {
        std::size_t n = 30 + rng() % 40;
        PointSet pts = random_points_1d(rng, n, 200);
        auto fam = band_family(1, {Rat(16), Rat(400)});
        Rat eps = iter % 2 == 0 ? frac(1, 2) : frac(1, 4);
        PairMasks masks(pts, fam);
        auto inner = partition_homogeneous(pts, fam, eps / 2, {}, &masks);
        auto refined = equitable_refine(pts, fam, inner.partition, eps, &masks);
        std::size_t mn = n, mx = 0;
        for (const auto& blk : refined.parts) {
            mn = std::min(mn, blk.size());
            mx = std::max(mx, blk.size());
        }
        EXPECT_LE(mx - mn, 1u);
        EXPECT_LT(refined.bad_fraction, eps);
        std::size_t total = 0;
        for (const auto& blk : refined.parts) total += blk.size();
        EXPECT_EQ(total, n);
    }
}

TEST(PartitionHomogeneous, RandomGuaranteeAndDeterminism) {
    std::mt19937 rng(17);
    for (int iter = 0; iter < 8; ++iter) {
        bool planar = iter % 2 == 1;
        std::size_t n = planar ? 25 + rng() % 20 : 40 + rng() % 60;
        Rat eps = planar || iter % 3 == 0 ? frac(1, 2) : frac(1, 4);
        PointSet pts = planar ? random_points_2d(rng, n, 20) : random_points_1d(rng, n, 300);
        auto fam = planar ? band_family(2, {Rat(100)}) : band_family(1, {Rat(25), Rat(900)});
        auto res1 = partition_homogeneous(pts, fam, eps);
        auto res2 = partition_homogeneous(pts, fam, eps);
        EXPECT_EQ(res1.partition.parts, res2.partition.parts);
        auto rep = verify_homogeneity(pts, fam, res1.partition);
        EXPECT_LE(rep.bad_mass, eps) << "n=" << n << " planar=" << planar;
        EXPECT_EQ(rep.bad_mass, oracle_bad_mass(pts, fam, res1.partition));
        res1.partition.validate_cover(n);
    }
}

TEST(PartitionHomogeneous, OverlappingCoveringFamily) {
    // covering but not disjoint: near = d^2 <= 100, far = d^2 >= 49 overlap
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial q = d * d;
    RelationFamily fam;
    SemiAlgebraicRelation near;
    near.dim = 1;
    near.complexity = 2;
    near.polys.push_back(Polynomial::constant(2, 100) - q);
    near.formula = Formula::atom(0);
    SemiAlgebraicRelation far;
    far.dim = 1;
    far.complexity = 2;
    far.polys.push_back(q - Polynomial::constant(2, 49));
    far.formula = Formula::atom(0);
    fam.relations = {near, far};
    fam.covering = true;
    fam.disjoint = false;
    std::mt19937 rng(29);
    PointSet pts = random_points_1d(rng, 60, 150);
    for (Rat eps : {frac(1, 2), frac(1, 4)}) {
        auto res = partition_homogeneous(pts, fam, eps);
        auto rep = verify_homogeneity(pts, fam, res.partition);
        EXPECT_LE(rep.bad_mass, eps);
        EXPECT_EQ(rep.bad_mass, oracle_bad_mass(pts, fam, res.partition));
    }
}

TEST(PartitionHomogeneous, PointsOnExactBandBoundaries) {
    // points whose pairwise distances hit the band breakpoints exactly
    // exercise the zero-sign paths of the formulas and the root sweep
    PointSet pts = points_1d({0, 3, 6, 9, 12, 20, 23, 26});
    auto fam = band_family(1, {Rat(9), Rat(144)});
    auto res = partition_homogeneous(pts, fam, frac(1, 4));
    auto rep = verify_homogeneity(pts, fam, res.partition);
    EXPECT_LE(rep.bad_mass, frac(1, 4));
    EXPECT_EQ(rep.bad_mass, oracle_bad_mass(pts, fam, res.partition));
}

TEST(PartitionHomogeneous, PlanarFourColorFamily) {
    std::mt19937 rng(37);
    PointSet pts = random_points_2d(rng, 90, 24);
    auto fam = band_family(2, {Rat(16), Rat(100), Rat(400)});  // m = 4
    auto res = partition_homogeneous(pts, fam, frac(1, 2));
    auto rep = verify_homogeneity(pts, fam, res.partition);
    EXPECT_LE(rep.bad_mass, frac(1, 2));
    EXPECT_EQ(rep.bad_mass, oracle_bad_mass(pts, fam, res.partition));
}

TEST(Cut1DZeroBudget, RationalRootsOnly) {
    // r above |Sigma| forces budget 0: every root must sit in a singleton
    std::vector<Surface> sigma;
    for (long k : {2, 5, 5, 11})
        sigma.push_back(
            Surface::from_poly(Polynomial::variable(1, 0) - Polynomial::constant(1, Rat(k))));
    Cutting cut = cut_1d(sigma, Rat(40));
    EXPECT_EQ(cut.budget, 0);
    for (const auto& cell : cut.cells) EXPECT_TRUE(cell.crossing.empty());
    // three distinct roots -> three singletons + four open intervals
    EXPECT_EQ(cut.cells.size(), 7u);
}

TEST(Signatures, SpotCheckSampledSigns) {
    // 16 samples per non-crossed (surface, cell) entry agree with the
    // recorded constant sign
    std::mt19937 rng(21);
    PointSet pts = random_points_1d(rng, 25, 80);
    auto fam = band_family(1, {Rat(49)});
    auto res = partition_homogeneous(pts, fam, frac(1, 4));
    auto sigma = build_surfaces(pts, fam);
    auto sigs = sareg::detail::point_signatures(pts, sigma, fam.total_polynomials(), res.cutting);
    const std::size_t cells = res.cutting.cells.size();
    const std::size_t slots = fam.total_polynomials();
    for (std::size_t u = 0; u < pts.size(); ++u) {
        for (std::size_t slot = 0; slot < slots; ++slot) {
            const Surface& s = sigma[u * slots + slot];
            UniPoly up{s.poly.dense_univariate()};
            for (std::size_t c = 0; c < cells; ++c) {
                char entry = sigs[u][slot * cells + c];
                if (entry == 'X') continue;
                const auto& iv = std::get<Interval1>(res.cutting.cells[c].region);
                for (int k = 1; k <= 16; ++k) {
                    Rat x;
                    if (iv.is_singleton())
                        x = iv.lo.v;
                    else if (iv.lo.finite() && iv.hi.finite())
                        x = iv.lo.v + (iv.hi.v - iv.lo.v) * Rat(k) / 17;
                    else if (iv.lo.finite())
                        x = iv.lo.v + Rat(k);
                    else if (iv.hi.finite())
                        x = iv.hi.v - Rat(k);
                    else
                        x = Rat(k);
                    if (!iv.contains(x)) continue;
                    int sg = sgn(up.eval(x));
                    char expect = sg > 0 ? '+' : (sg < 0 ? '-' : '0');
                    ASSERT_EQ(entry, expect);
                }
            }
        }
    }
}
