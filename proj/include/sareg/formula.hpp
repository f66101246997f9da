#pragma once

// Boolean formulas over sign atoms "g_k >= 0", evaluated on exact sign
// vectors in {-1, 0, +1}^s. Zero satisfies an atom.

#include <memory>
#include <span>
#include <vector>

#include "sareg/rational.hpp"

namespace sareg {

class Formula {
public:
    enum class Op { Atom, Not, And, Or };

    static Formula atom(std::size_t poly_index) {
        Formula f;
        f.op_ = Op::Atom;
        f.atom_ = poly_index;
        return f;
    }
    static Formula negate(Formula arg) {
        Formula f;
        f.op_ = Op::Not;
        f.kids_.push_back(std::move(arg));
        return f;
    }
    static Formula conj(std::vector<Formula> args) {
        Formula f;
        f.op_ = Op::And;
        f.kids_ = std::move(args);
        return f;
    }
    static Formula disj(std::vector<Formula> args) {
        Formula f;
        f.op_ = Op::Or;
        f.kids_ = std::move(args);
        return f;
    }

    Op op() const { return op_; }
    std::size_t atom_index() const { return atom_; }
    const std::vector<Formula>& children() const { return kids_; }

    bool eval(std::span<const int> signs) const {
        switch (op_) {
            case Op::Atom:
                if (atom_ >= signs.size()) throw input_error("formula atom index out of range");
                return signs[atom_] >= 0;
            case Op::Not:
                return !kids_[0].eval(signs);
            case Op::And:
                for (const auto& k : kids_)
                    if (!k.eval(signs)) return false;
                return true;
            case Op::Or:
                for (const auto& k : kids_)
                    if (k.eval(signs)) return true;
                return false;
        }
        return false;
    }

    std::size_t max_atom_index() const {
        std::size_t m = 0;
        if (op_ == Op::Atom) return atom_;
        for (const auto& k : kids_) m = std::max(m, k.max_atom_index());
        return m;
    }

    // Re-indexes atoms through the given map (used when polynomial lists are
    // concatenated, e.g. by the symmetrizing lift).
    Formula shift_atoms(std::size_t offset) const {
        Formula f = *this;
        f.shift_in_place(offset);
        return f;
    }

    bool operator==(const Formula& o) const {
        return op_ == o.op_ && atom_ == o.atom_ && kids_ == o.kids_;
    }

private:
    void shift_in_place(std::size_t offset) {
        if (op_ == Op::Atom) atom_ += offset;
        for (auto& k : kids_) k.shift_in_place(offset);
    }

    Op op_ = Op::And;  // empty conjunction = true
    std::size_t atom_ = 0;
    std::vector<Formula> kids_;
};

// g >= 0
inline Formula atom_ge(std::size_t k) { return Formula::atom(k); }
// g > 0, assuming the *negated* polynomial -g is stored at index k_neg
inline Formula gt_via_neg(std::size_t k_neg) { return Formula::negate(Formula::atom(k_neg)); }
// g < 0 needs no extra polynomial
inline Formula lt(std::size_t k) { return Formula::negate(Formula::atom(k)); }
// g == 0 from the pair (g at k, -g at k_neg)
inline Formula eq_zero(std::size_t k, std::size_t k_neg) {
    return Formula::conj({Formula::atom(k), Formula::atom(k_neg)});
}

}  // namespace sareg
