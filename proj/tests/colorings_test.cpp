#include <gtest/gtest.h>

#include <random>

#include "sareg/colorings.hpp"
#include "test_util.hpp"

using namespace sareg;

namespace {

long as_long(const Rat& q) {
    if (q.get_den() != 1) throw std::runtime_error("not an integer");
    return mpz_get_si(q.get_num().get_mpz_t());
}

ColoredGraph rainbow_square() {
    // 4 collinear points, every pair its own distance class: 6 colors
    PointSet pts = points_1d({0, 1, 5, 12});
    RelationFamily fam;
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial q = d * d;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Rat dist = squared_distance(pts[i], pts[j]);
            SemiAlgebraicRelation e;
            e.dim = 1;
            e.complexity = 4;
            Polynomial g = q - Polynomial::constant(2, dist);
            e.polys.push_back(g);
            e.polys.push_back(-g);
            e.formula = eq_zero(0, 1);
            fam.relations.push_back(e);
        }
    fam.covering = true;
    fam.disjoint = true;
    return ColoredGraph::build(pts, fam);
}

}  // namespace

TEST(BuildLayered, BaseCase) {
    auto [g, cert] = build_layered(1);
    ASSERT_EQ(g.n(), 2u);
    EXPECT_EQ(as_long(g.points[0][0]), 1);
    EXPECT_EQ(as_long(g.points[1][0]), 2);
    EXPECT_EQ(g.colors(), 1u);
    EXPECT_EQ(g.color(0, 1), 0);
    EXPECT_TRUE(certificate_valid(cert, g));
}

TEST(BuildLayered, TwoLevels) {
    auto [g, cert] = build_layered(2);
    std::vector<long> want = {1, 2, 21, 22};
    ASSERT_EQ(g.n(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(as_long(g.points[i][0]), want[i]);
    // cross distances {19, 20, 21} all carry color 1; within-copy pairs color 0
    EXPECT_EQ(g.color(0, 1), 0);
    EXPECT_EQ(g.color(2, 3), 0);
    for (int a : {0, 1})
        for (int b : {2, 3}) EXPECT_EQ(g.color(a, b), 1);
    EXPECT_TRUE(certificate_valid(cert, g));
}

TEST(BuildLayered, ThreeLevelsPointsAndValidity) {
    auto [g, cert] = build_layered(3);
    std::vector<long> want = {1, 2, 21, 22, 221, 222, 241, 242};
    ASSERT_EQ(g.n(), 8u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(as_long(g.points[i][0]), want[i]);
    auto rep = validate_family(g.family, g.points);
    EXPECT_TRUE(rep.clean());
    EXPECT_TRUE(certificate_valid(cert, g));
    // every relation has complexity at most 4
    for (const auto& rel : g.family.relations) {
        EXPECT_LE(rel.polys.size(), 4u);
        for (const auto& p : rel.polys) EXPECT_LE(p.total_degree(), 4u);
    }
}

TEST(BuildLayered, ColorEqualsDivergenceLevel) {
    auto [g, cert] = build_layered(4);
    ASSERT_EQ(g.n(), 16u);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = i + 1; j < 16; ++j) {
            // the construction level at which i and j diverge
            std::size_t level = 0;
            for (std::size_t bit = 3; bit != static_cast<std::size_t>(-1); --bit)
                if (((i >> bit) & 1) != ((j >> bit) & 1)) {
                    level = bit;
                    break;
                }
            EXPECT_EQ(g.color(i, j), static_cast<int>(level));
        }
    EXPECT_TRUE(certificate_valid(cert, g));
}

TEST(BuildLayered, ShiftInvariance) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    std::mt19937 rng(5);
    for (int iter = 0; iter < 20; ++iter) {
        Rat c(static_cast<long>(rng() % 2001) - 1000, 1 + rng() % 7);
        c.canonicalize();
        std::size_t i = rng() % 8, j = rng() % 8;
        if (i == j) continue;
        Point ui{g.points[i][0] + c}, vj{g.points[j][0] + c};
        for (std::size_t rel = 0; rel < g.colors(); ++rel)
            EXPECT_EQ(g.family[rel].holds(ui, vj),
                      g.family[rel].holds(g.points[i], g.points[j]));
    }
}

TEST(VerifyPq, LayeredPassAndFail) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    // p = 4 induces at least ceil(log 4) = 2 colors
    EXPECT_TRUE(verify_pq(g, 4, 2).pass);
    // but not always 3: {1, 2, 21, 22} uses exactly 2
    auto r = verify_pq(g, 4, 3);
    ASSERT_FALSE(r.pass);
    EXPECT_EQ(r.witness, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(VerifyPq, RainbowAlwaysPasses) {
    auto g = rainbow_square();
    EXPECT_TRUE(verify_pq(g, 4, 6).pass);  // q = C(4,2)
    EXPECT_TRUE(verify_pq(g, 3, 3).pass);
    EXPECT_THROW(verify_pq(g, 3, 4), input_error);  // q > C(3,2)
    EXPECT_TRUE(verify_pq(g, 7, 2).pass);            // p > |V|: vacuous
}

TEST(VerifyPq, WholeLogRangeForSmallM) {
    for (std::size_t m = 1; m <= 4; ++m) {
        auto [g, cert] = build_layered(m);
        (void)cert;
        for (std::size_t p = 2; p <= g.n(); ++p) {
            std::size_t q = 0;
            while ((std::size_t{1} << q) < p) ++q;  // ceil(log2 p)
            EXPECT_TRUE(verify_pq(g, p, q).pass) << "m=" << m << " p=" << p;
        }
    }
}

TEST(VerifyPq, LogPlusOneFailsSomewherePerM) {
    // ceil(log p) is tight: each construction admits a p-set using exactly
    // ceil(log p) colors (m = 1 has no feasible q + 1 to witness)
    for (std::size_t m = 2; m <= 4; ++m) {
        auto [g, cert] = build_layered(m);
        (void)cert;
        bool found_tight = false;
        for (std::size_t p = 2; p <= g.n() && !found_tight; ++p) {
            std::size_t q = 0;
            while ((std::size_t{1} << q) < p) ++q;
            if (q + 1 > p * (p - 1) / 2) continue;
            found_tight = !verify_pq(g, p, q + 1).pass;
        }
        EXPECT_TRUE(found_tight) << "m=" << m;
    }
}

TEST(AreIsomorphic, IdentityAndShift) {
    auto [g, cert] = build_layered(2);
    (void)cert;
    auto id = are_isomorphic(g, {0, 1}, {0, 1});
    ASSERT_TRUE(id.has_value());
    // S1 = {1,2}, S2 = {21,22}: the shift is color-preserving
    auto h = are_isomorphic(g, {0, 1}, {2, 3});
    ASSERT_TRUE(h.has_value());
    EXPECT_EQ((*h)[0], (std::pair<std::size_t, std::size_t>{0, 2}));
    EXPECT_EQ((*h)[1], (std::pair<std::size_t, std::size_t>{1, 3}));
}

TEST(AreIsomorphic, ColorMultisetMismatch) {
    auto [g, cert] = build_layered(2);
    (void)cert;
    // {1,2} is a color-0 pair, {2,21} a color-1 pair
    EXPECT_FALSE(are_isomorphic(g, {0, 1}, {1, 2}).has_value());
}

TEST(AreIsomorphic, SizeCapEnforced) {
    auto [g, cert] = build_layered(4);
    (void)cert;
    std::vector<std::size_t> big(13);
    for (std::size_t i = 0; i < 13; ++i) big[i] = i;
    EXPECT_THROW(are_isomorphic(g, big, big), input_error);
}

TEST(IsSLayered, BaseAndCanonical) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    auto base = is_s_layered(g, {0, 5});
    ASSERT_TRUE(base.has_value());
    EXPECT_EQ(base->s, 1u);
    auto full = is_s_layered(g, {0, 1, 2, 3, 4, 5, 6, 7});
    ASSERT_TRUE(full.has_value());
    EXPECT_EQ(full->s, 3u);
    EXPECT_TRUE(certificate_valid(*full, g));
    // the canonical split comes out first
    EXPECT_EQ(full->root.kids[0].set, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(IsSLayered, RainbowQuadrupleIsNot) {
    auto g = rainbow_square();
    EXPECT_FALSE(is_s_layered(g, {0, 1, 2, 3}).has_value());
    EXPECT_THROW(is_s_layered(g, {0, 1, 2}), input_error);  // not a power of two
}

TEST(FindLayered, PairAlwaysFound) {
    auto g = rainbow_square();
    auto res = find_layered_set(g, 1);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->subset.size(), 2u);
}

TEST(FindLayered, RecoversTheFullConstruction) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    auto res = find_layered_set(g, 3);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->subset.size(), 8u);
    auto recheck = is_s_layered(g, res->subset);
    EXPECT_TRUE(recheck.has_value());
}

TEST(FindLayered, NotFoundOnRainbow) {
    // 4 points, 6 distinct colors: no 2-layered 4-set exists
    auto g = rainbow_square();
    EXPECT_FALSE(find_layered_set(g, 2).has_value());
}

TEST(FindLayered, FullDepthFourConstruction) {
    auto [g, cert] = build_layered(4);
    (void)cert;
    auto res = find_layered_set(g, 4);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->subset.size(), 16u);
    EXPECT_EQ(res->certificate.s, 4u);
    EXPECT_TRUE(certificate_valid(res->certificate, g));
    EXPECT_THROW(find_layered_set(g, 5), input_error);  // above the certificate cap
}

TEST(FindLayered, OverrideEpsilonPath) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    auto res = find_layered_set(g, 2, frac(1, 4));
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->subset.size(), 4u);
    EXPECT_TRUE(is_s_layered(g, res->subset).has_value());
}
