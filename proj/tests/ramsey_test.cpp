#include <gtest/gtest.h>

#include <random>

#include "sareg/colorings.hpp"
#include "sareg/ramsey.hpp"
#include "test_util.hpp"

using namespace sareg;
using namespace sareg::testutil;

namespace {

// two-coloring of the line by squared distance threshold 9
RelationFamily near_far_family() {
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    Polynomial g = d * d - Polynomial::constant(2, 9);
    RelationFamily fam;
    SemiAlgebraicRelation near;
    near.dim = 1;
    near.complexity = 2;
    near.polys.push_back(g);
    near.formula = lt(0);  // squared distance < 9
    SemiAlgebraicRelation far;
    far.dim = 1;
    far.complexity = 2;
    far.polys.push_back(g);
    far.formula = Formula::atom(0);  // >= 9
    fam.relations = {near, far};
    fam.covering = true;
    return fam;
}

void verify_result(const PointSet& pts, const CliqueQuery& q, const MonoClique& mc) {
    ASSERT_EQ(mc.clique.size(), q.targets[mc.relation]);
    for (std::size_t i = 0; i < mc.clique.size(); ++i)
        for (std::size_t j = i + 1; j < mc.clique.size(); ++j)
            EXPECT_TRUE(q.family[mc.relation].holds(pts[mc.clique[i]], pts[mc.clique[j]]));
}

}  // namespace

TEST(MonoClique, AllPairsTriangle) {
    RelationFamily allpairs;
    allpairs.relations.push_back(atom_relation(1, Polynomial::constant(2, 1), 1));
    allpairs.covering = true;
    PointSet pts = points_1d({4, 7, 19});
    CliqueQuery q{{3}, allpairs};
    auto res = mono_clique_search(pts, q);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->relation, 0u);
    verify_result(pts, q, *res);
}

TEST(MonoClique, LayeredEdgeTargets) {
    auto [g, cert] = build_layered(3);
    (void)cert;
    CliqueQuery q{{2, 2, 2}, g.family};
    auto res = mono_clique_search(g.points, q);
    ASSERT_TRUE(res.has_value());
    verify_result(g.points, q, *res);
}

TEST(MonoClique, NearFarSixPoints) {
    PointSet pts = points_1d({0, 1, 2, 10, 11, 12});
    CliqueQuery q{{3, 3}, near_far_family()};
    auto res = mono_clique_search(pts, q);
    ASSERT_TRUE(res.has_value());
    verify_result(pts, q, *res);
    auto oracle = brute_ramsey_check(pts, q);
    ASSERT_TRUE(oracle.has_value());
    verify_result(pts, q, *oracle);
}

TEST(BruteRamsey, EmptyRelationNeverSelected) {
    Polynomial d = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
    RelationFamily fam;
    SemiAlgebraicRelation never;
    never.dim = 1;
    never.complexity = 2;
    never.polys.push_back(d * d + Polynomial::constant(2, 1));  // always positive
    never.formula = lt(0);                                      // never holds
    fam.relations.push_back(never);
    fam.relations.push_back(atom_relation(1, Polynomial::constant(2, 1), 1));
    fam.covering = true;
    PointSet pts = points_1d({0, 3, 9});
    CliqueQuery q{{2, 3}, fam};
    auto res = brute_ramsey_check(pts, q);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->relation, 1u);
}

TEST(BruteRamsey, FullySetInFirstRelation) {
    RelationFamily fam = near_far_family();
    PointSet pts = points_1d({0, 1, 2});
    CliqueQuery q{{3, 3}, fam};
    auto res = brute_ramsey_check(pts, q);
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->relation, 0u);
    EXPECT_EQ(res->clique, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(BruteRamsey, CapsEnforced) {
    RelationFamily fam = near_far_family();
    std::vector<Point> many;
    for (long i = 0; i < 17; ++i) many.push_back(Point{Rat(i)});
    CliqueQuery q{{3, 3}, fam};
    EXPECT_THROW(brute_ramsey_check(PointSet(1, many), q), input_error);
    PointSet small = points_1d({0, 1, 2});
    CliqueQuery q2{{6, 3}, fam};
    EXPECT_THROW(brute_ramsey_check(small, q2), input_error);
}

TEST(MonoClique, NotFoundWhenOracleSaysSo) {
    // 4 rainbow-ish points, need a 3-clique in either color of near/far with
    // points spaced so that no such clique exists
    PointSet pts = points_1d({0, 4, 8, 12});  // all pairwise distances >= 4 except none < 3
    CliqueQuery q{{2, 5}, near_far_family()};
    // near color has no pair at all; far needs 5 points
    auto res = mono_clique_search(pts, q);
    auto oracle = brute_ramsey_check(pts, q);
    EXPECT_FALSE(oracle.has_value());
    EXPECT_FALSE(res.has_value());
}

TEST(MonoClique, OracleAgreementRandomized) {
    std::mt19937 rng(77);
    int found = 0, not_found = 0;
    for (int iter = 0; iter < 120; ++iter) {
        bool clustered = iter % 2 == 0;
        // tight clusters far apart starve both color classes, so clustered
        // instances exercise the NOT_FOUND outcome
        std::size_t n = clustered ? 6 + rng() % 7 : 6 + rng() % 9;
        std::vector<long> vals;
        std::set<long> used;
        while (vals.size() < n) {
            long v;
            if (clustered) {
                long cluster = static_cast<long>(rng() % 4) * 1000;
                v = cluster + static_cast<long>(rng() % 3);
            } else {
                v = static_cast<long>(rng() % 201) - 100;
            }
            if (used.insert(v).second) vals.push_back(v);
        }
        std::vector<Point> pv;
        for (long v : vals) pv.push_back(Point{Rat(v)});
        PointSet pts(1, pv);
        auto fam = band_family_1d({Rat(static_cast<long>(9 + (rng() % 40) * 10))});
        std::vector<std::size_t> targets = {2 + rng() % 3, 2 + rng() % 4};
        if (clustered) targets = {3 + rng() % 2, 4 + rng() % 2};
        CliqueQuery q{targets, fam};
        auto fast = mono_clique_search(pts, q);
        auto slow = brute_ramsey_check(pts, q);
        ASSERT_EQ(fast.has_value(), slow.has_value()) << "iteration " << iter;
        if (fast) {
            verify_result(pts, q, *fast);
            ++found;
        } else {
            ++not_found;
        }
    }
    // the instance mix should exercise both outcomes
    EXPECT_GT(found, 10);
    EXPECT_GT(not_found, 10);
}

TEST(MonoClique, RecursionPathBeyondBaseCase) {
    // 40 points forces the cutting recursion before any exhaustive fallback
    std::mt19937 rng(123);
    std::vector<long> vals;
    std::vector<char> used(1001, 0);
    while (vals.size() < 40) {
        long v = static_cast<long>(rng() % 1001) - 500;
        if (!used[v + 500]) {
            used[v + 500] = 1;
            vals.push_back(v);
        }
    }
    std::vector<Point> pv;
    for (long v : vals) pv.push_back(Point{Rat(v)});
    PointSet pts(1, pv);
    auto fam = band_family_1d({Rat(400)});
    CliqueQuery q{{4, 4}, fam};
    auto res = mono_clique_search(pts, q);
    ASSERT_TRUE(res.has_value());
    verify_result(pts, q, *res);
}

TEST(MonoClique, PlanarInstanceBeyondBaseCase) {
    // 30 planar points, two circle-band colors, targets that need the
    // recursion (or its fallback) rather than the 12-point base case
    std::mt19937 rng(321);
    std::set<std::pair<long, long>> used;
    std::vector<Point> pv;
    while (pv.size() < 30) {
        long x = static_cast<long>(rng() % 41) - 20, y = static_cast<long>(rng() % 41) - 20;
        if (used.emplace(x, y).second) pv.push_back(Point{Rat(x), Rat(y)});
    }
    PointSet pts(2, pv);
    Polynomial q(4);
    for (int i = 0; i < 2; ++i) {
        Polynomial d = Polynomial::variable(4, i) - Polynomial::variable(4, 2 + i);
        q = q + d * d;
    }
    RelationFamily fam;
    SemiAlgebraicRelation near;
    near.dim = 2;
    near.complexity = 2;
    near.polys.push_back(q - Polynomial::constant(4, 200));
    near.formula = lt(0);
    SemiAlgebraicRelation far = near;
    far.formula = Formula::atom(0);
    fam.relations = {near, far};
    fam.covering = true;
    CliqueQuery query{{4, 4}, fam};
    auto res = mono_clique_search(pts, query);
    ASSERT_TRUE(res.has_value());
    for (std::size_t i = 0; i < res->clique.size(); ++i)
        for (std::size_t j = i + 1; j < res->clique.size(); ++j)
            EXPECT_TRUE(fam[res->relation].holds(pts[res->clique[i]], pts[res->clique[j]]));
}

TEST(MonoClique, NonCoveringRejected) {
    RelationFamily fam;
    fam.relations.push_back(unit_distance_1d());
    fam.covering = true;
    PointSet pts = points_1d({0, 5, 11});
    CliqueQuery q{{2}, fam};
    EXPECT_THROW(mono_clique_search(pts, q), input_error);
}
