#pragma once

// Exact rational arithmetic. All predicates in this library are decided over
// mpq_class values; nothing here ever rounds.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sareg {

using Rat = mpq_class;
using Int = mpz_class;

struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int sgn(const Rat& q) { return ::sgn(q); }

// Canonicalized fraction; the two-argument mpq_class constructor does not
// reduce, so use this instead.
inline Rat frac(long num, long den) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Parses "num/den" or a bare integer string. Rejects zero denominators and
// anything mpq refuses to read.
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw input_error("empty rational literal");
    Rat q;
    if (q.set_str(s, 10) != 0) throw input_error("bad rational literal: " + s);
    if (q.get_den() == 0) throw input_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

// Canonical text form: integers without the "/1", everything else "num/den".
inline std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Int rat_floor(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return f;
}

inline Int rat_ceil(const Rat& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

// Smallest integer s with s*s >= n (n >= 0).
inline Int ceil_isqrt(const Int& n) {
    if (n < 0) throw input_error("ceil_isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    if (r * r < n) ++r;
    return r;
}

// The rational with the smallest denominator in the closed interval
// [lo, hi] (smallest such value if several). Continued-fraction descent.
inline Rat simplest_rational_in(const Rat& lo, const Rat& hi) {
    if (lo > hi) throw input_error("simplest_rational_in: empty interval");
    if (lo == hi) return lo;
    if (lo <= 0 && 0 <= hi) return Rat(0);
    if (hi < 0) return -simplest_rational_in(-hi, -lo);
    // 0 < lo < hi: any integer in range is simplest; else recurse on the
    // fractional part.
    Int c = rat_ceil(lo);
    if (Rat(c) <= hi) return Rat(c);
    Int a = rat_floor(lo);
    Rat inner = simplest_rational_in(1 / (hi - Rat(a)), 1 / (lo - Rat(a)));
    return Rat(a) + 1 / inner;
}

}  // namespace sareg
