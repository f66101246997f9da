#include <gtest/gtest.h>

#include <random>

#include "sareg/roots.hpp"

using namespace sareg;

namespace {

UniPoly poly_from(std::initializer_list<long> coeffs) {
    std::vector<Rat> c;
    for (long k : coeffs) c.emplace_back(k);
    return UniPoly(std::move(c));
}

// (x - r1)(x - r2)... expanded, exact.
UniPoly from_roots(const std::vector<Rat>& roots) {
    UniPoly p(std::vector<Rat>{Rat(1)});
    for (const Rat& r : roots) {
        std::vector<Rat> q(p.c.size() + 1, Rat(0));
        for (std::size_t i = 0; i < p.c.size(); ++i) {
            q[i + 1] += p.c[i];
            q[i] -= r * p.c[i];
        }
        p = UniPoly(std::move(q));
    }
    return p;
}

}  // namespace

TEST(Sturm, CountConventions) {
    // roots of (x-1)(x-3) are {1, 3}
    UniPoly p = from_roots({Rat(1), Rat(3)});
    SturmChain chain(p);
    EXPECT_EQ(chain.count_all(), 2);
    EXPECT_EQ(chain.count_half_open(Rat(0), Rat(1)), 1);   // (0,1] includes 1
    EXPECT_EQ(chain.count_half_open(Rat(1), Rat(3)), 1);   // (1,3] has only 3
    EXPECT_EQ(chain.count_half_open(Rat(1), Rat(2)), 0);
    EXPECT_EQ(chain.count_below(Rat(1)), 1);
    EXPECT_EQ(chain.count_below(Rat(0)), 0);
    EXPECT_EQ(chain.count_above(Rat(1)), 1);  // (1, inf) has only 3
    EXPECT_EQ(chain.count_above(Rat(3)), 0);
}

TEST(Sturm, RandomAgainstKnownRoots) {
    std::mt19937 rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        int k = 1 + rng() % 4;
        std::vector<Rat> roots;
        for (int i = 0; i < k; ++i)
            roots.push_back(frac(static_cast<long>(rng() % 21) - 10, 1 + static_cast<long>(rng() % 4)));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        UniPoly p = from_roots(roots);
        SturmChain chain(p);
        Rat a(static_cast<long>(rng() % 25) - 12, 1 + rng() % 3);
        Rat b = a + frac(1 + rng() % 20, 1 + rng() % 3);
        int expect = 0;
        for (const Rat& r : roots)
            if (a < r && r <= b) ++expect;
        EXPECT_EQ(chain.count_half_open(a, b), expect);
    }
}

TEST(Isolate, RationalRootsExact) {
    RootIsolator iso(poly_from({-1, 0, 1}));  // x^2 - 1
    auto roots = iso.isolate();
    ASSERT_EQ(roots.size(), 2u);
    ASSERT_TRUE(roots[0].is_rational());
    ASSERT_TRUE(roots[1].is_rational());
    EXPECT_EQ(*roots[0].value, Rat(-1));
    EXPECT_EQ(*roots[1].value, Rat(1));
}

TEST(Isolate, IrrationalRootsBracketed) {
    RootIsolator iso(poly_from({-2, 0, 1}));  // x^2 - 2
    auto roots = iso.isolate();
    ASSERT_EQ(roots.size(), 2u);
    for (auto& r : roots) {
        EXPECT_FALSE(r.is_rational());
        iso.refine_below_width(r, frac(1, 100));
        EXPECT_LT(r.hi - r.lo, frac(1, 100));
    }
    // sqrt(2) in (1.41, 1.42) after refinement
    AlgNum pos = roots[1];
    iso.refine_below_width(pos, frac(1, 1000));
    EXPECT_GT(pos.hi, frac(1414, 1000));
    EXPECT_LT(pos.lo, frac(1415, 1000));
}

TEST(Isolate, NoRealRoots) {
    RootIsolator iso(poly_from({1, 0, 1}));  // x^2 + 1
    EXPECT_TRUE(iso.isolate().empty());
}

TEST(Isolate, ZeroPolynomialRejected) {
    EXPECT_THROW(RootIsolator(UniPoly{}), input_error);
}

TEST(Isolate, NonDyadicRationalRootFound) {
    // roots 1/3 and 1/7 and an irrational pair from x^2 - 3
    UniPoly p = from_roots({frac(1, 3), frac(1, 7)});
    RootIsolator iso(p);
    auto roots = iso.isolate();
    ASSERT_EQ(roots.size(), 2u);
    ASSERT_TRUE(roots[0].is_rational());
    ASSERT_TRUE(roots[1].is_rational());
    EXPECT_EQ(*roots[0].value, frac(1, 7));
    EXPECT_EQ(*roots[1].value, frac(1, 3));
}

TEST(Isolate, MixedRationalIrrational) {
    // x(x^2 - 2)(x - 1/10): rational roots 0 and 1/10 hide next to sqrt2 roots
    UniPoly p = from_roots({Rat(0), frac(1, 10)});
    // multiply by (x^2 - 2)
    std::vector<Rat> mul(p.c.size() + 2, Rat(0));
    for (std::size_t i = 0; i < p.c.size(); ++i) {
        mul[i + 2] += p.c[i];
        mul[i] -= 2 * p.c[i];
    }
    RootIsolator iso(UniPoly{std::move(mul)});
    auto roots = iso.isolate();
    ASSERT_EQ(roots.size(), 4u);
    std::vector<Rat> rational;
    int irrational = 0;
    for (const auto& r : roots)
        if (r.is_rational())
            rational.push_back(*r.value);
        else
            ++irrational;
    EXPECT_EQ(irrational, 2);
    ASSERT_EQ(rational.size(), 2u);
    EXPECT_EQ(rational[0], Rat(0));
    EXPECT_EQ(rational[1], frac(1, 10));
}

TEST(Isolate, RandomRationalRootsRecovered) {
    std::mt19937 rng(13);
    for (int iter = 0; iter < 100; ++iter) {
        int k = 1 + rng() % 4;
        std::vector<Rat> roots;
        for (int i = 0; i < k; ++i)
            roots.push_back(frac(static_cast<long>(rng() % 41) - 20, 1 + static_cast<long>(rng() % 9)));
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        RootIsolator iso(from_roots(roots));
        auto found = iso.isolate();
        ASSERT_EQ(found.size(), roots.size());
        for (std::size_t i = 0; i < roots.size(); ++i) {
            ASSERT_TRUE(found[i].is_rational());
            EXPECT_EQ(*found[i].value, roots[i]);
        }
    }
}

TEST(AlgNum, CompareAcrossPolynomials) {
    RootIsolator sqrt2(poly_from({-2, 0, 1}));
    RootIsolator sqrt3(poly_from({-3, 0, 1}));
    RootIsolator shared(poly_from({0, -2, 0, 1}));  // x(x^2-2)
    auto r2 = sqrt2.isolate();
    auto r3 = sqrt3.isolate();
    auto rs = shared.isolate();
    ASSERT_EQ(r2.size(), 2u);
    ASSERT_EQ(r3.size(), 2u);
    ASSERT_EQ(rs.size(), 3u);
    // sqrt2 < sqrt3
    EXPECT_EQ(compare_algnum(r2[1], r3[1], sqrt2, sqrt3), -1);
    EXPECT_EQ(compare_algnum(r3[1], r2[1], sqrt3, sqrt2), 1);
    // sqrt2 appears in both polynomials: equal across isolators
    EXPECT_TRUE(algnum_equal(r2[1], rs[2]));
    EXPECT_EQ(compare_algnum(r2[1], rs[2], sqrt2, shared), 0);
    EXPECT_TRUE(algnum_equal(r2[0], rs[0]));
    // -sqrt2 < 0 < sqrt2
    EXPECT_EQ(compare_algnum(rs[0], rs[1], shared, shared), -1);
    EXPECT_EQ(compare_algnum(rs[1], rs[2], shared, shared), -1);
}

TEST(AlgNum, RationalVersusIrrational) {
    RootIsolator sqrt2(poly_from({-2, 0, 1}));
    RootIsolator line(poly_from({-7, 5}));  // root 7/5 = 1.4, just below sqrt2
    auto r2 = sqrt2.isolate();
    auto rl = line.isolate();
    ASSERT_TRUE(rl[0].is_rational());
    EXPECT_EQ(compare_algnum(rl[0], r2[1], line, sqrt2), -1);
    EXPECT_EQ(compare_algnum(r2[1], rl[0], sqrt2, line), 1);
    EXPECT_FALSE(algnum_equal(rl[0], r2[1]));
}
