#pragma once

// Exact real-root isolation for univariate rational polynomials via Sturm
// sequences. Roots come back as algebraic numbers: an exact rational when the
// root is rational, otherwise a square-free integer polynomial plus an open
// isolating interval that can be refined on demand and compared exactly
// against other roots.

#include <algorithm>
#include <optional>
#include <vector>

#include "sareg/rational.hpp"

namespace sareg {

// Dense univariate polynomial, coefficient of x^i at index i. The invariant
// is a trimmed representation: either empty (the zero polynomial) or a
// nonzero leading coefficient.
struct UniPoly {
    std::vector<Rat> c;

    UniPoly() = default;
    explicit UniPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    Rat eval(const Rat& x) const {
        Rat acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }

    UniPoly derivative() const {
        if (c.size() <= 1) return UniPoly{};
        std::vector<Rat> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Rat(static_cast<long>(i));
        return UniPoly(std::move(d));
    }

    // Sign at +infinity / -infinity.
    int sign_at_pos_inf() const { return is_zero() ? 0 : sgn(c.back()); }
    int sign_at_neg_inf() const {
        if (is_zero()) return 0;
        int s = sgn(c.back());
        return degree() % 2 == 0 ? s : -s;
    }

    bool operator==(const UniPoly& o) const { return c == o.c; }
};

inline UniPoly operator-(const UniPoly& p) {
    UniPoly r = p;
    for (auto& k : r.c) k = -k;
    return r;
}

inline UniPoly uni_rem(UniPoly a, const UniPoly& b) {
    if (b.is_zero()) throw input_error("uni_rem: division by zero polynomial");
    while (!a.is_zero() && a.degree() >= b.degree()) {
        Rat q = a.c.back() / b.c.back();
        std::size_t shift = a.degree() - b.degree();
        for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i + shift] -= q * b.c[i];
        a.c.pop_back();
        a.trim();
    }
    return a;
}

inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = uni_rem(a, b);
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        Rat lead = a.c.back();
        for (auto& k : a.c) k /= lead;  // monic
    }
    return a;
}

// p / gcd(p, p'): same roots, all simple.
inline UniPoly square_free_part(const UniPoly& p) {
    if (p.is_zero()) throw input_error("square_free_part: zero polynomial");
    UniPoly g = uni_gcd(p, p.derivative());
    if (g.degree() <= 0) return p;
    // exact division p / g
    UniPoly num = p, quot;
    quot.c.assign(p.degree() - g.degree() + 1, Rat(0));
    while (!num.is_zero() && num.degree() >= g.degree()) {
        Rat q = num.c.back() / g.c.back();
        std::size_t shift = num.degree() - g.degree();
        quot.c[shift] = q;
        for (std::size_t i = 0; i < g.c.size(); ++i) num.c[i + shift] -= q * g.c[i];
        num.trim();
    }
    quot.trim();
    return quot;
}

// Clears denominators and divides by integer content; the sign of the
// leading coefficient is preserved.
inline UniPoly primitive_integer_scale(const UniPoly& p) {
    if (p.is_zero()) return p;
    Int lcm = 1;
    for (const auto& k : p.c)
        if (k != 0) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), k.get_den().get_mpz_t());
    std::vector<Rat> scaled;
    scaled.reserve(p.c.size());
    Int content = 0;
    for (const auto& k : p.c) {
        Rat v = k * Rat(lcm);
        v.canonicalize();
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_num().get_mpz_t());
        scaled.push_back(v);
    }
    if (content == 0) content = 1;
    for (auto& v : scaled) {
        v /= Rat(content);
        v.canonicalize();
    }
    return UniPoly(std::move(scaled));
}

// Sturm chain of a square-free polynomial.
struct SturmChain {
    std::vector<UniPoly> seq;

    explicit SturmChain(const UniPoly& p) {
        seq.push_back(p);
        UniPoly d = p.derivative();
        if (!d.is_zero()) {
            seq.push_back(d);
            while (true) {
                UniPoly r = uni_rem(seq[seq.size() - 2], seq.back());
                if (r.is_zero()) break;
                seq.push_back(-r);
            }
        }
    }

    int variations_at(const Rat& x) const {
        int v = 0, prev = 0;
        for (const auto& p : seq) {
            int s = sgn(p.eval(x));
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }
    int variations_neg_inf() const {
        int v = 0, prev = 0;
        for (const auto& p : seq) {
            int s = p.sign_at_neg_inf();
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }
    int variations_pos_inf() const {
        int v = 0, prev = 0;
        for (const auto& p : seq) {
            int s = p.sign_at_pos_inf();
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }

    // Number of distinct real roots in (a, b]. With the zero-skipping
    // variation convention, V(x) counts roots strictly greater than x, so
    // V(a) - V(b) is exactly the count in the half-open interval.
    int count_half_open(const Rat& a, const Rat& b) const {
        if (a >= b) return 0;
        return variations_at(a) - variations_at(b);
    }
    int count_below(const Rat& b) const {  // roots in (-inf, b]
        return variations_neg_inf() - variations_at(b);
    }
    int count_above(const Rat& a) const {  // roots in (a, +inf)
        return variations_at(a) - variations_pos_inf();
    }
    int count_all() const { return variations_neg_inf() - variations_pos_inf(); }
};

// Cauchy bound: all real roots lie in (-B, B).
inline Rat cauchy_root_bound(const UniPoly& p) {
    if (p.is_zero() || p.degree() == 0) return Rat(1);
    Rat m = 0;
    for (int i = 0; i < p.degree(); ++i) {
        Rat a = abs(p.c[i]);
        if (a > m) m = a;
    }
    return Rat(1) + m / abs(p.c.back());
}

// One isolated real root. Either `value` is set (exact rational root) or
// (lo, hi) is an open interval containing exactly one root of `poly`. The
// defining polynomial is square-free, primitive and integer in both cases.
struct AlgNum {
    std::optional<Rat> value;
    UniPoly poly;
    Rat lo, hi;

    bool is_rational() const { return value.has_value(); }

    Rat lower() const { return value ? *value : lo; }
    Rat upper() const { return value ? *value : hi; }
    Rat approx_mid() const { return value ? *value : (lo + hi) / 2; }
};

namespace detail {

// Halves the isolating interval (bisection against the Sturm chain). If the
// midpoint happens to be the root, the number becomes rational.
inline void refine_once(AlgNum& a, const SturmChain& chain) {
    if (a.value) return;
    Rat mid = (a.lo + a.hi) / 2;
    if (a.poly.eval(mid) == 0) {
        a.value = mid;
        return;
    }
    if (chain.count_half_open(a.lo, mid) == 1)
        a.hi = mid;
    else
        a.lo = mid;
}

}  // namespace detail

// Root isolation context for one square-free primitive polynomial; owns the
// Sturm chain so repeated refinement is cheap.
class RootIsolator {
public:
    explicit RootIsolator(const UniPoly& input)
        : poly_(primitive_integer_scale(square_free_part(input))), chain_(poly_) {
        if (input.is_zero()) throw input_error("root isolation of the zero polynomial");
    }

    const UniPoly& poly() const { return poly_; }

    // All real roots, ascending. Rational roots are detected exactly: any
    // rational root of the primitive square-free polynomial has denominator
    // dividing the leading coefficient, so once the isolating interval is
    // narrower than 1/lead^2 the simplest rational inside is the only
    // candidate left.
    std::vector<AlgNum> isolate() {
        std::vector<AlgNum> out;
        if (poly_.degree() <= 0) return out;
        Rat bound = cauchy_root_bound(poly_);
        isolate_range(-bound, bound, chain_.count_half_open(-bound, bound), out);
        for (auto& r : out) decide_rational(r);
        return out;
    }

    void refine(AlgNum& a) const { detail::refine_once(a, chain_); }
    void refine_below_width(AlgNum& a, const Rat& w) const {
        while (!a.value && a.hi - a.lo >= w) detail::refine_once(a, chain_);
    }

private:
    void isolate_range(const Rat& lo, const Rat& hi, int nroots, std::vector<AlgNum>& out) {
        if (nroots == 0) return;
        if (nroots == 1) {
            AlgNum a;
            a.poly = poly_;
            a.lo = lo;
            a.hi = hi;
            // (lo, hi] holds one root; if it is not hi itself the open
            // interval (lo, hi) isolates it.
            if (poly_.eval(hi) == 0) a.value = hi;
            out.push_back(std::move(a));
            return;
        }
        Rat mid = (lo + hi) / 2;
        int left = chain_.count_half_open(lo, mid);
        isolate_range(lo, mid, left, out);
        isolate_range(mid, hi, nroots - left, out);
    }

    // Moves a.lo strictly between its current value and the isolated root,
    // so that neither endpoint is a root of the defining polynomial. (The
    // left endpoint of a fresh isolating interval may be a *different* root
    // of poly_, which would poison the simplest-rational test below.)
    void clear_root_endpoints(AlgNum& a) const {
        while (poly_.eval(a.lo) == 0) {
            Rat t = (a.lo + a.hi) / 2;
            if (chain_.count_half_open(a.lo, t) == 0)
                a.lo = t;
            else if (poly_.eval(t) == 0)
                a.value = t;  // t is inside (lo, hi), hence the root itself
            else
                a.hi = t;
            if (a.value) return;
        }
        while (poly_.eval(a.hi) == 0) {
            Rat t = (a.lo + a.hi) / 2;
            if (chain_.count_half_open(a.lo, t) == 1) {
                if (poly_.eval(t) == 0) {
                    a.value = t;
                    return;
                }
                a.hi = t;
            } else {
                a.lo = t;
            }
        }
    }

    // A rational root of the primitive square-free poly has denominator
    // dividing the leading coefficient L. Once the interval is narrower than
    // 1/L^2 it contains at most one rational with denominator <= L, and the
    // simplest rational inside is that candidate.
    void decide_rational(AlgNum& a) const {
        if (a.value) return;
        clear_root_endpoints(a);
        if (a.value) return;
        Rat lead = abs(poly_.c.back());
        Rat witness_width = 1 / (lead * lead);
        refine_below_width(a, witness_width);
        if (a.value) return;
        Rat s = simplest_rational_in(a.lo, a.hi);
        if (s > a.lo && s < a.hi && poly_.eval(s) == 0) a.value = s;
    }

    UniPoly poly_;
    SturmChain chain_;
};

namespace detail {

// Roots of g strictly inside (lo, hi).
inline int open_count(const SturmChain& gc, const UniPoly& g, const Rat& lo, const Rat& hi) {
    if (lo >= hi) return 0;
    return gc.count_half_open(lo, hi) - (g.eval(hi) == 0 ? 1 : 0);
}

}  // namespace detail

// Exact equality of two isolated roots. Both isolating intervals contain
// exactly one root of their defining polynomial, so the roots coincide iff a
// common root of both polynomials lies in the overlap of the intervals.
inline bool algnum_equal(const AlgNum& a, const AlgNum& b) {
    if (a.value && b.value) return *a.value == *b.value;
    if (a.value) return b.poly.eval(*a.value) == 0 && *a.value > b.lo && *a.value < b.hi;
    if (b.value) return a.poly.eval(*b.value) == 0 && *b.value > a.lo && *b.value < a.hi;
    Rat lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo >= hi) return false;
    if (a.poly == b.poly) {
        SturmChain gc(a.poly);
        return detail::open_count(gc, a.poly, lo, hi) >= 1;
    }
    UniPoly g = uni_gcd(UniPoly(a.poly), UniPoly(b.poly));
    if (g.degree() < 1) return false;
    SturmChain gc(g);
    return detail::open_count(gc, g, lo, hi) >= 1;
}

// Exact comparison; -1/0/+1. Refines copies of unequal roots until their
// intervals separate.
inline int compare_algnum(const AlgNum& a, const AlgNum& b,
                          const RootIsolator& ia, const RootIsolator& ib) {
    if (a.value && b.value) return *a.value < *b.value ? -1 : (*a.value == *b.value ? 0 : 1);
    if (algnum_equal(a, b)) return 0;
    AlgNum ac = a, bc = b;
    while (!(ac.upper() <= bc.lower() || bc.upper() <= ac.lower())) {
        ia.refine(ac);
        ib.refine(bc);
    }
    return ac.upper() <= bc.lower() ? -1 : 1;
}

}  // namespace sareg
