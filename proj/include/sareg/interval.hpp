#pragma once

// Exact interval arithmetic over extended rationals, used to certify that a
// polynomial has constant nonzero sign on an axis-aligned box. Endpoints may
// be infinite; the arithmetic is outward-exact (no rounding), so a proven
// sign is a real certificate while failure to prove is merely inconclusive.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "sareg/polynomial.hpp"
#include "sareg/rational.hpp"

namespace sareg {

// Extended rational: finite value, or one of the infinities.
struct ERat {
    enum Kind { NegInf = -1, Finite = 0, PosInf = 1 };
    Kind kind = Finite;
    Rat v;

    ERat() = default;
    ERat(Rat q) : kind(Finite), v(std::move(q)) {}
    static ERat neg_inf() { return ERat(NegInf, Rat(0)); }
    static ERat pos_inf() { return ERat(PosInf, Rat(0)); }

    bool finite() const { return kind == Finite; }
    bool operator==(const ERat& o) const {
        return kind == o.kind && (kind != Finite || v == o.v);
    }
    bool operator<(const ERat& o) const {
        if (kind != o.kind) return kind < o.kind;
        return kind == Finite && v < o.v;
    }
    bool operator<=(const ERat& o) const { return *this < o || *this == o; }

private:
    ERat(Kind k, Rat q) : kind(k), v(std::move(q)) {}
};

// Closed interval over extended rationals; lo <= hi.
struct Ival {
    ERat lo, hi;

    Ival() = default;
    Ival(ERat l, ERat h) : lo(std::move(l)), hi(std::move(h)) {}
    static Ival point(const Rat& q) { return Ival(ERat(q), ERat(q)); }
    static Ival whole() { return Ival(ERat::neg_inf(), ERat::pos_inf()); }

    bool contains_zero() const {
        bool lo_le = lo.kind == ERat::NegInf || (lo.finite() && lo.v <= 0);
        bool hi_ge = hi.kind == ERat::PosInf || (hi.finite() && hi.v >= 0);
        return lo_le && hi_ge;
    }
    int certified_sign() const {  // +1, -1, or 0 when inconclusive
        if (lo.finite() && lo.v > 0) return 1;
        if (lo.kind == ERat::PosInf) return 1;
        if (hi.finite() && hi.v < 0) return -1;
        if (hi.kind == ERat::NegInf) return -1;
        return 0;
    }
};

namespace ivops {

inline ERat add(const ERat& a, const ERat& b) {
    if (a.finite() && b.finite()) return ERat(a.v + b.v);
    if (a.kind == ERat::NegInf || b.kind == ERat::NegInf) return ERat::neg_inf();
    return ERat::pos_inf();
}

// Multiplication with the 0 * inf = 0 convention, which is the right one for
// interval products of a zero-width factor.
inline ERat mul(const ERat& a, const ERat& b) {
    if (a.finite() && a.v == 0) return ERat(Rat(0));
    if (b.finite() && b.v == 0) return ERat(Rat(0));
    if (a.finite() && b.finite()) return ERat(a.v * b.v);
    int sa = a.finite() ? sgn(a.v) : static_cast<int>(a.kind);
    int sb = b.finite() ? sgn(b.v) : static_cast<int>(b.kind);
    return sa * sb > 0 ? ERat::pos_inf() : ERat::neg_inf();
}

inline Ival add(const Ival& a, const Ival& b) { return Ival(add(a.lo, b.lo), add(a.hi, b.hi)); }

inline Ival mul(const Ival& a, const Ival& b) {
    ERat cands[4] = {mul(a.lo, b.lo), mul(a.lo, b.hi), mul(a.hi, b.lo), mul(a.hi, b.hi)};
    ERat lo = cands[0], hi = cands[0];
    for (int i = 1; i < 4; ++i) {
        if (cands[i] < lo) lo = cands[i];
        if (hi < cands[i]) hi = cands[i];
    }
    return Ival(lo, hi);
}

inline Ival pow(const Ival& a, std::uint32_t k) {
    if (k == 0) return Ival::point(Rat(1));
    Ival r = a;
    for (std::uint32_t i = 1; i < k; ++i) r = mul(r, a);
    // An even power is nonnegative; the naive product chain loses that only
    // when the base spans zero, where the true minimum is exactly 0.
    if (k % 2 == 0 && r.lo < ERat(Rat(0))) r.lo = ERat(Rat(0));
    return r;
}

}  // namespace ivops

namespace detail {

using TermIter = std::map<ExpVec, Rat>::const_iterator;

// Recursive Horner evaluation: terms are lexicographically sorted, so the
// range [first, last) groups by the exponent of `var`; each group's
// coefficient is the Horner value of the remaining variables. The factored
// form keeps per-variable dependencies linear, which certifies signs the
// naive term sum cannot (notably on unbounded boxes).
inline Ival horner_range(const Polynomial& p, const std::vector<Ival>& box, std::size_t var,
                         TermIter first, TermIter last) {
    if (var == p.nvars()) return Ival::point(first->second);
    std::vector<std::pair<std::uint32_t, Ival>> groups;
    TermIter it = first;
    while (it != last) {
        std::uint32_t k = it->first[var];
        TermIter stop = it;
        while (stop != last && stop->first[var] == k) ++stop;
        groups.emplace_back(k, horner_range(p, box, var + 1, it, stop));
        it = stop;
    }
    Ival acc = groups.back().second;  // highest exponent (map is ascending)
    for (std::size_t g = groups.size() - 1; g-- > 0;) {
        acc = ivops::mul(acc, ivops::pow(box[var], groups[g + 1].first - groups[g].first));
        acc = ivops::add(acc, groups[g].second);
    }
    if (groups.front().first > 0) acc = ivops::mul(acc, ivops::pow(box[var], groups.front().first));
    return acc;
}

}  // namespace detail

namespace detail {

inline void intersect_into(Ival& out, const Ival& other) {
    if (out.lo < other.lo) out.lo = other.lo;
    if (other.hi < out.hi) out.hi = other.hi;
}

inline Ival naive_range(const Polynomial& p, const std::vector<Ival>& box) {
    Ival acc = Ival::point(Rat(0));
    for (const auto& [e, c] : p.terms()) {
        Ival t = Ival::point(c);
        for (std::size_t i = 0; i < p.nvars(); ++i)
            if (e[i] > 0) t = ivops::mul(t, ivops::pow(box[i], e[i]));
        acc = ivops::add(acc, t);
    }
    return acc;
}

}  // namespace detail

namespace dival {

// Double intervals, outward-widened after every operation; a certificate
// from these is sound regardless of the rounding mode.
struct DIv {
    double lo, hi;
};

inline double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

inline DIv from_rat(const Rat& q) {
    double d = q.get_d();
    return {down(d), up(d)};
}
inline DIv add(const DIv& a, const DIv& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
inline double mul1(double a, double b) {
    if (a == 0 || b == 0) return 0;  // the 0 * inf convention of the exact ops
    return a * b;
}
inline DIv mul(const DIv& a, const DIv& b) {
    double c1 = mul1(a.lo, b.lo), c2 = mul1(a.lo, b.hi), c3 = mul1(a.hi, b.lo),
           c4 = mul1(a.hi, b.hi);
    return {down(std::min(std::min(c1, c2), std::min(c3, c4))),
            up(std::max(std::max(c1, c2), std::max(c3, c4)))};
}
inline DIv pow(const DIv& a, std::uint32_t k) {
    if (k == 0) return {1, 1};
    DIv r = a;
    for (std::uint32_t i = 1; i < k; ++i) r = mul(r, a);
    if (k % 2 == 0 && r.lo < 0) r.lo = 0;
    return r;
}
inline int certified_sign(const DIv& v) {
    if (v.lo > 0) return 1;
    if (v.hi < 0) return -1;
    return 0;
}

}  // namespace dival

// Caches a vertex-recentered copy and double-precision term tables of one
// polynomial so that repeated box classifications stay cheap: the widened
// double forms certify the easy majority, the exact rational forms decide
// the rest. Every form used is an interval extension of a FIXED polynomial
// representation, hence monotone under box inclusion: once a box certifies
// a sign, every sub-box does too. That monotonicity is what keeps inherited
// cell censuses identical to from-scratch re-classification.
class BoxRangeEvaluator {
public:
    explicit BoxRangeEvaluator(Polynomial p) : poly_(std::move(p)) {
        // Per-axis anchor at the quadratic vertex -c1/(2 c2); this kills the
        // linear-term dependency exactly for distance-type surfaces and is
        // harmless elsewhere. Any fixed anchor preserves monotonicity.
        anchor_.assign(poly_.nvars(), Rat(0));
        bool any = false;
        for (std::size_t i = 0; i < poly_.nvars(); ++i) {
            ExpVec lin(poly_.nvars(), 0), quad(poly_.nvars(), 0);
            lin[i] = 1;
            quad[i] = 2;
            auto itq = poly_.terms().find(quad);
            auto itl = poly_.terms().find(lin);
            if (itq != poly_.terms().end() && itl != poly_.terms().end()) {
                anchor_[i] = -itl->second / (2 * itq->second);
                any = any || anchor_[i] != 0;
            }
        }
        if (any)
            centered_ = poly_.compose_affine(anchor_, std::vector<int>(poly_.nvars(), 1));
        for (const auto& [e, c] : poly_.terms()) dterms_.push_back({dival::from_rat(c), e});
        if (any)
            for (const auto& [e, c] : centered_.terms())
                dcentered_.push_back({dival::from_rat(c), e});
        for (auto& a : anchor_) danchor_.push_back(dival::from_rat(a));
    }

    const Polynomial& poly() const { return poly_; }

    // Sign classification for cell budgets: +1/-1 when the polynomial has
    // certified constant sign on the box, 0 otherwise. Equivalent to
    // range(box).certified_sign() but with a fast exit: certified opposite
    // signs at two box corners prove a sign change, which already implies
    // the inconclusive verdict, so no exact arithmetic is spent on it.
    int certified_sign_on(const std::vector<Ival>& box) const {
        if (box.size() != poly_.nvars()) throw input_error("certified_sign_on: arity mismatch");
        if (poly_.is_zero()) return 0;
        bool finite = true;
        for (const auto& s : box) finite = finite && s.lo.finite() && s.hi.finite();
        if (finite) {
            std::vector<dival::DIv> lo_corner(box.size()), hi_corner(box.size()), mid(box.size());
            for (std::size_t i = 0; i < box.size(); ++i) {
                double l = dival::down(box[i].lo.v.get_d());
                double h = dival::up(box[i].hi.v.get_d());
                lo_corner[i] = {l, l};
                hi_corner[i] = {h, h};
                double m = (l + h) / 2;
                mid[i] = {dival::down(m), dival::up(m)};
            }
            int sa = dival::certified_sign(dterm_sum(dterms_, lo_corner));
            int sb = dival::certified_sign(dterm_sum(dterms_, hi_corner));
            if (sa * sb < 0) return 0;
            int sm = dival::certified_sign(dterm_sum(dterms_, mid));
            if (sm * sa < 0 || sm * sb < 0) return 0;
        }
        return range(box).certified_sign();
    }

    Ival range(const std::vector<Ival>& box) const {
        if (box.size() != poly_.nvars()) throw input_error("range: arity mismatch");
        if (poly_.is_zero()) return Ival::point(Rat(0));
        // double prefilter; a double-certified sign yields a sound rational
        // bound since double-to-mpq conversion is exact, and the double
        // range encloses the exact range, so the exact forms below would
        // certify as well (which keeps the shortcut consistent).
        std::vector<dival::DIv> dbox(box.size());
        for (std::size_t i = 0; i < box.size(); ++i) {
            double lo = box[i].lo.finite() ? dival::down(box[i].lo.v.get_d())
                                           : -std::numeric_limits<double>::infinity();
            double hi = box[i].hi.finite() ? dival::up(box[i].hi.v.get_d())
                                           : std::numeric_limits<double>::infinity();
            dbox[i] = {lo, hi};
        }
        dival::DIv dnaive = dterm_sum(dterms_, dbox);
        if (dival::certified_sign(dnaive) > 0) return Ival(ERat(Rat(dnaive.lo)), ERat::pos_inf());
        if (dival::certified_sign(dnaive) < 0) return Ival(ERat::neg_inf(), ERat(Rat(dnaive.hi)));
        if (!dcentered_.empty()) {
            std::vector<dival::DIv> shifted(dbox.size());
            for (std::size_t i = 0; i < dbox.size(); ++i)
                shifted[i] = {dival::down(dbox[i].lo - danchor_[i].hi),
                              dival::up(dbox[i].hi - danchor_[i].lo)};
            dival::DIv dc = dterm_sum(dcentered_, shifted);
            if (dival::certified_sign(dc) > 0) return Ival(ERat(Rat(dc.lo)), ERat::pos_inf());
            if (dival::certified_sign(dc) < 0) return Ival(ERat::neg_inf(), ERat(Rat(dc.hi)));
        }
        // exact forms, all monotone under box inclusion
        Ival out = detail::naive_range(poly_, box);
        if (out.certified_sign() != 0) return out;
        detail::intersect_into(
            out, detail::horner_range(poly_, box, 0, poly_.terms().begin(), poly_.terms().end()));
        if (out.certified_sign() != 0) return out;
        if (!centered_.is_zero()) {
            std::vector<Ival> shifted(box.size());
            for (std::size_t i = 0; i < box.size(); ++i) {
                ERat lo = box[i].lo.finite() ? ERat(box[i].lo.v - anchor_[i]) : box[i].lo;
                ERat hi = box[i].hi.finite() ? ERat(box[i].hi.v - anchor_[i]) : box[i].hi;
                shifted[i] = Ival(lo, hi);
            }
            detail::intersect_into(out, detail::naive_range(centered_, shifted));
            if (out.certified_sign() != 0) return out;
            detail::intersect_into(out, detail::horner_range(centered_, shifted, 0,
                                                             centered_.terms().begin(),
                                                             centered_.terms().end()));
        }
        return out;
    }

private:
    struct DTerm {
        dival::DIv coeff;
        ExpVec exps;
    };

    static dival::DIv dterm_sum(const std::vector<DTerm>& terms, const std::vector<dival::DIv>& box) {
        dival::DIv acc{0, 0};
        for (const auto& t : terms) {
            dival::DIv v = t.coeff;
            for (std::size_t i = 0; i < box.size(); ++i)
                if (t.exps[i] > 0) v = dival::mul(v, dival::pow(box[i], t.exps[i]));
            acc = dival::add(acc, v);
        }
        return acc;
    }

    Polynomial poly_;
    Polynomial centered_;          // zero polynomial when no anchor applies
    std::vector<Rat> anchor_;
    std::vector<dival::DIv> danchor_;
    std::vector<DTerm> dterms_;
    std::vector<DTerm> dcentered_;
};

// One-shot range; builds the evaluator behind the scenes. Prefer the cached
// evaluator in hot loops.
inline Ival eval_on_box(const Polynomial& p, const std::vector<Ival>& box) {
    return BoxRangeEvaluator(p).range(box);
}

}  // namespace sareg
