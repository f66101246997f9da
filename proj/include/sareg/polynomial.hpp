#pragma once

// Sparse multivariate polynomials over the exact rationals. Terms are keyed
// by exponent vector and kept in lexicographic order so serialized forms are
// bit-stable; zero coefficients are never stored.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sareg/point.hpp"
#include "sareg/rational.hpp"

namespace sareg {

using ExpVec = std::vector<std::uint32_t>;

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rat& c) {
        Polynomial p(nvars);
        p.add_term(ExpVec(nvars, 0), c);
        return p;
    }
    static Polynomial variable(std::size_t nvars, std::size_t i, const Rat& coeff = 1) {
        Polynomial p(nvars);
        ExpVec e(nvars, 0);
        e[i] = 1;
        p.add_term(e, coeff);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<ExpVec, Rat>& terms() const { return terms_; }

    std::uint32_t total_degree() const {
        std::uint32_t deg = 0;
        for (const auto& [e, c] : terms_) {
            std::uint32_t d = 0;
            for (auto x : e) d += x;
            if (d > deg) deg = d;
        }
        return deg;
    }

    void add_term(const ExpVec& e, const Rat& c) {
        if (e.size() != nvars_) throw input_error("exponent vector arity mismatch");
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    Polynomial operator+(const Polynomial& o) const {
        check_arity(o);
        Polynomial r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }
    Polynomial operator*(const Polynomial& o) const {
        check_arity(o);
        Polynomial r(nvars_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                ExpVec e(nvars_);
                for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    Polynomial operator*(const Rat& c) const {
        Polynomial r(nvars_);
        if (c == 0) return r;
        for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
        return r;
    }

    bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }
    bool operator<(const Polynomial& o) const {
        if (nvars_ != o.nvars_) return nvars_ < o.nvars_;
        return terms_ < o.terms_;
    }

    Rat eval(std::span<const Rat> x) const {
        if (x.size() != nvars_) throw input_error("eval: wrong number of values");
        Rat acc = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) t *= x[i];
            acc += t;
        }
        return acc;
    }

    // Fixes the first k variables to the given values; the result is a
    // polynomial in the remaining nvars-k variables.
    Polynomial partial_eval_prefix(std::span<const Rat> x) const {
        if (x.size() > nvars_) throw input_error("partial_eval: too many values");
        std::size_t rest = nvars_ - x.size();
        Polynomial r(rest);
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < x.size(); ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) t *= x[i];
            if (t == 0) continue;
            ExpVec tail(e.begin() + x.size(), e.end());
            r.add_term(tail, t);
        }
        return r;
    }

    Polynomial partial_derivative(std::size_t var) const {
        if (var >= nvars_) throw input_error("partial_derivative: variable out of range");
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            ExpVec f = e;
            f[var] -= 1;
            r.add_term(f, c * Rat(static_cast<long>(e[var])));
        }
        return r;
    }

    // Substitutes x_i -> sign_i * x_i + offset_i (signs +-1), exactly.
    Polynomial compose_affine(const std::vector<Rat>& offset, const std::vector<int>& sign) const {
        if (offset.size() != nvars_ || sign.size() != nvars_)
            throw input_error("compose_affine: arity mismatch");
        Polynomial acc(nvars_);
        for (const auto& [e, c] : terms_) {
            Polynomial term = Polynomial::constant(nvars_, c);
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                Polynomial lin = Polynomial::variable(nvars_, i, Rat(sign[i]));
                lin.add_term(ExpVec(nvars_, 0), offset[i]);
                for (std::uint32_t k = 0; k < e[i]; ++k) term = term * lin;
            }
            acc = acc + term;
        }
        return acc;
    }

    // Swaps the first half of the variables with the second half (arity must
    // be even). Used to test relations for argument-order invariance.
    Polynomial swap_halves() const {
        if (nvars_ % 2 != 0) throw input_error("swap_halves: odd arity");
        std::size_t d = nvars_ / 2;
        Polynomial r(nvars_);
        for (const auto& [e, c] : terms_) {
            ExpVec f(nvars_);
            for (std::size_t i = 0; i < d; ++i) {
                f[i] = e[d + i];
                f[d + i] = e[i];
            }
            r.add_term(f, c);
        }
        return r;
    }

    // Dense coefficient list (constant first) of a univariate polynomial.
    std::vector<Rat> dense_univariate() const {
        if (nvars_ != 1) throw input_error("dense_univariate: not univariate");
        std::uint32_t deg = total_degree();
        std::vector<Rat> c(is_zero() ? 0 : deg + 1, Rat(0));
        for (const auto& [e, k] : terms_) c[e[0]] = k;
        return c;
    }

private:
    void check_arity(const Polynomial& o) const {
        if (nvars_ != o.nvars_) throw input_error("polynomial arity mismatch");
    }

    std::size_t nvars_ = 0;
    std::map<ExpVec, Rat> terms_;
};

inline Rat eval_pair(const Polynomial& p, const Point& u, const Point& v) {
    if (u.dim() != v.dim()) throw input_error("eval_pair: dimension mismatch");
    if (p.nvars() != 2 * u.dim()) throw input_error("eval_pair: polynomial arity != 2d");
    std::vector<Rat> x;
    x.reserve(p.nvars());
    x.insert(x.end(), u.coords.begin(), u.coords.end());
    x.insert(x.end(), v.coords.begin(), v.coords.end());
    return p.eval(x);
}

}  // namespace sareg
